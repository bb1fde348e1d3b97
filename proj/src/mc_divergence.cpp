// SPDX-License-Identifier: Apache-2.0

#include "setembed/mc_divergence.hpp"

#include <cmath>
#include <stdexcept>

#include "setembed/rng.hpp"

namespace setembed {

namespace {
constexpr double kLog2 = 0.69314718055994530942;

void check(const DiagGaussian& g_from, const DiagGaussian& g_other,
           const NoiseBlock& noise) {
  if (g_from.dim() != g_other.dim())
    throw std::invalid_argument("mc divergence: dimension mismatch");
  if (noise.dim != g_from.dim() || noise.k < 1 ||
      static_cast<int>(noise.z.size()) != noise.k * noise.dim)
    throw std::invalid_argument("mc divergence: noise block shape mismatch");
}

// One JS half-term and (optionally) its pathwise gradient. The per-sample
// integrand is f_i = a_i + log 2 − log(e^{a_i} + e^{b_i}) with
//   a_i = Σ_j (−log σ1 − z²/2),  x = μ1 + σ1 ⊙ z,
//   b_i = Σ_j (−log σ2 − (x−μ2)²/(2σ2²)).
// Normalization constants cancel between a_i and the log-sum-exp.
double half_term(const DiagGaussian& g1, const DiagGaussian& g2,
                 const NoiseBlock& noise, PairGrad* grad) {
  check(g1, g2, noise);
  const int d = noise.dim;
  const int k = noise.k;

  double sum_log_s1 = 0.0;
  for (int j = 0; j < d; ++j) sum_log_s1 += std::log(g1.sigma[j]);

  if (grad) {
    grad->d_mu1.assign(d, 0.0);
    grad->d_sigma1.assign(d, 0.0);
    grad->d_mu2.assign(d, 0.0);
    grad->d_sigma2.assign(d, 0.0);
  }

  std::vector<double> x(d);
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    const double* z = noise.z.data() + static_cast<std::size_t>(i) * d;
    double a = -sum_log_s1;
    double b = 0.0;
    for (int j = 0; j < d; ++j) {
      x[j] = g1.mean[j] + g1.sigma[j] * z[j];
      // evaluate both exponents through the same arithmetic so equal
      // parameters give a == b bit-exactly (and a zero estimate)
      const double u1 = (x[j] - g1.mean[j]) / g1.sigma[j];
      a -= 0.5 * u1 * u1;
      const double u2 = (x[j] - g2.mean[j]) / g2.sigma[j];
      b += -std::log(g2.sigma[j]) - 0.5 * u2 * u2;
    }
    const double m = std::max(a, b);
    const double lse = m + std::log(std::exp(a - m) + std::exp(b - m));
    acc += a + kLog2 - lse;

    if (grad) {
      // d f/d a = wb, d f/d b = −wb with wb = e^b / (e^a + e^b)
      const double wb = std::exp(b - m) / (std::exp(a - m) + std::exp(b - m));
      for (int j = 0; j < d; ++j) {
        const double v2 = g2.sigma[j] * g2.sigma[j];
        const double db_dx = -(x[j] - g2.mean[j]) / v2;
        grad->d_mu1[j] += -wb * db_dx;
        grad->d_sigma1[j] += wb * (-1.0 / g1.sigma[j]) - wb * db_dx * z[j];
        grad->d_mu2[j] += -wb * (-db_dx);
        grad->d_sigma2[j] +=
            -wb * (-1.0 / g2.sigma[j] +
                   (x[j] - g2.mean[j]) * (x[j] - g2.mean[j]) /
                       (v2 * g2.sigma[j]));
      }
    }
  }

  if (grad) {
    const double inv_k = 1.0 / k;
    for (int j = 0; j < d; ++j) {
      grad->d_mu1[j] *= inv_k;
      grad->d_sigma1[j] *= inv_k;
      grad->d_mu2[j] *= inv_k;
      grad->d_sigma2[j] *= inv_k;
    }
  }
  return acc / k;
}

}  // namespace

NoiseBlock make_noise(std::uint64_t seed, std::uint64_t step,
                      std::uint64_t pair_id, int k, int dim) {
  if (k < 1 || dim < 1)
    throw std::invalid_argument("make_noise: k and dim must be >= 1");
  NoiseBlock n;
  n.k = k;
  n.dim = dim;
  n.z = standard_normals(stream_key(seed, step, pair_id),
                         static_cast<std::size_t>(k) * dim);
  return n;
}

double mc_kl_to_mixture(const DiagGaussian& g_from, const DiagGaussian& g_other,
                        const NoiseBlock& noise) {
  return half_term(g_from, g_other, noise, nullptr);
}

double mc_js(const DiagGaussian& g1, const DiagGaussian& g2,
             const NoiseBlock& noise1, const NoiseBlock& noise2) {
  return 0.5 * half_term(g1, g2, noise1, nullptr) +
         0.5 * half_term(g2, g1, noise2, nullptr);
}

double mc_js_gradient(const DiagGaussian& g1, const DiagGaussian& g2,
                      const NoiseBlock& noise1, const NoiseBlock& noise2,
                      PairGrad& grad) {
  PairGrad h1, h2;
  const double v1 = half_term(g1, g2, noise1, &h1);
  const double v2 = half_term(g2, g1, noise2, &h2);

  const int d = g1.dim();
  grad.d_mu1.assign(d, 0.0);
  grad.d_sigma1.assign(d, 0.0);
  grad.d_mu2.assign(d, 0.0);
  grad.d_sigma2.assign(d, 0.0);
  for (int j = 0; j < d; ++j) {
    grad.d_mu1[j] = 0.5 * h1.d_mu1[j] + 0.5 * h2.d_mu2[j];
    grad.d_sigma1[j] = 0.5 * h1.d_sigma1[j] + 0.5 * h2.d_sigma2[j];
    grad.d_mu2[j] = 0.5 * h1.d_mu2[j] + 0.5 * h2.d_mu1[j];
    grad.d_sigma2[j] = 0.5 * h1.d_sigma2[j] + 0.5 * h2.d_sigma1[j];
  }
  return 0.5 * v1 + 0.5 * v2;
}

}  // namespace setembed
