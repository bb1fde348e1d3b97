// SPDX-License-Identifier: Apache-2.0
//
// Uniform distributions of sets expressed as histograms over atoms, and the
// discrete divergences between them.
#pragma once

#include <cstdint>
#include <vector>

#include "setembed/set_model.hpp"

namespace setembed {

struct AtomHistogram {
  std::uint64_t partition_tag = 0;  // identifies the partition it lives on
  std::vector<double> weights;      // sums to 1
  std::vector<double> density;      // weight / atom volume
};

// Fingerprint of a partition; histograms on different partitions never mix.
std::uint64_t partition_tag(const AtomicPartition& p);

// Weights proportional to atom volume for atoms contained in x, 0 elsewhere.
// Throws if x is empty or is not a union of atoms of p (stale partition).
AtomHistogram uniform_histogram(const SubsetRef& x, const AtomicPartition& p,
                                const GroundUniverse& u);

// max( Σ_i w_i (log p_density_i − log(q_density_i + eps)), 0 ); the per-atom
// integral is closed-form since densities are constant on atoms.
double damped_kl(const AtomHistogram& p, const AtomHistogram& q, double eps);

// Σ p_i log(p_i/q_i) + Σ q_i − Σ p_i on non-negative weight vectors, with the
// 0 log 0 = 0 convention; +inf when some p_i > 0 has q_i = 0.
double extended_kl(const std::vector<double>& p, const std::vector<double>& q);

// Jensen-Shannon divergence via the midpoint histogram; natural log, so the
// value lies in [0, ln 2].
double discrete_js(const AtomHistogram& p, const AtomHistogram& q);

// −Σ w_i log(density_i); equals log V(X) for the uniform histogram of X.
double entropy(const AtomHistogram& h);

}  // namespace setembed
