// SPDX-License-Identifier: Apache-2.0
//
// Diagonal-Gaussian geometry: density, entropy, closed-form KL, and the
// mixture / moment-centroid / precision-centroid interpolations.
#pragma once

#include <vector>

namespace setembed {

struct DiagGaussian {
  std::vector<double> mean;
  std::vector<double> sigma;  // per-axis standard deviations, all > 0

  int dim() const { return static_cast<int>(mean.size()); }
  // Throws on mismatched lengths, non-finite entries or sigma <= 0.
  void validate() const;
};

double log_density(const DiagGaussian& g, const std::vector<double>& x);

// Closed-form KL(g1 : g2) between diagonal Gaussians.
double kl_gaussian(const DiagGaussian& g1, const DiagGaussian& g2);

// Differential entropy: Σ_j log σ^(j) + (d/2) log(2πe).
double entropy(const DiagGaussian& g);

// Linear centroid in the expectation parameters (μ, μ²+σ²) per axis.
DiagGaussian m_centroid(const DiagGaussian& g1, const DiagGaussian& g2);

// Linear centroid in the natural parameters (μ/σ², −1/(2σ²)) per axis.
DiagGaussian e_centroid(const DiagGaussian& g1, const DiagGaussian& g2);

// Density of the equal-weight two-component mixture at x.
double mixture_density(const DiagGaussian& g1, const DiagGaussian& g2,
                       const std::vector<double>& x);

}  // namespace setembed
