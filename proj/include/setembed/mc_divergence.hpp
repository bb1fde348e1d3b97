// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo Jensen-Shannon divergence between diagonal Gaussians via the
// reparameterization trick, with pathwise gradients.
#pragma once

#include <cstdint>
#include <vector>

#include "setembed/gaussian.hpp"

namespace setembed {

struct MCConfig {
  int sample_count = 128;  // K, per pair per step
  std::uint64_t seed = 0;
  bool resample_each_step = true;
};

struct NoiseBlock {
  int k = 0;
  int dim = 0;
  std::vector<double> z;  // k*dim standard-normal draws, row-major
};

// Deterministic noise addressed by (seed, step, pair_id); evaluation order
// never changes results.
NoiseBlock make_noise(std::uint64_t seed, std::uint64_t step,
                      std::uint64_t pair_id, int k, int dim);

// MC estimate of KL(g_from : (g_from + g_other)/2) with samples
// x_i = μ_from + σ_from ⊙ z_i. Every term is evaluated per sample, so the
// estimate is exactly 0 when g_from == g_other.
double mc_kl_to_mixture(const DiagGaussian& g_from, const DiagGaussian& g_other,
                        const NoiseBlock& noise);

// 0.5·KL(g1:mix) + 0.5·KL(g2:mix), each half with its own noise block.
double mc_js(const DiagGaussian& g1, const DiagGaussian& g2,
             const NoiseBlock& noise1, const NoiseBlock& noise2);

struct PairGrad {
  std::vector<double> d_mu1, d_sigma1, d_mu2, d_sigma2;
};

// Value of mc_js plus its exact gradient as a deterministic function of the
// parameters with the noise held fixed (pathwise gradient).
double mc_js_gradient(const DiagGaussian& g1, const DiagGaussian& g2,
                      const NoiseBlock& noise1, const NoiseBlock& noise2,
                      PairGrad& grad);

}  // namespace setembed
