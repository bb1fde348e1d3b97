// SPDX-License-Identifier: Apache-2.0

#include "setembed/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace setembed {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

void require_same_dim(const DiagGaussian& g1, const DiagGaussian& g2,
                      const char* who) {
  if (g1.dim() != g2.dim())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
}  // namespace

void DiagGaussian::validate() const {
  if (mean.size() != sigma.size())
    throw std::invalid_argument("DiagGaussian: mean/sigma length mismatch");
  for (double m : mean)
    if (!std::isfinite(m))
      throw std::invalid_argument("DiagGaussian: non-finite mean");
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("DiagGaussian: sigma must be positive finite");
}

double log_density(const DiagGaussian& g, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != g.dim())
    throw std::invalid_argument("log_density: dimension mismatch");
  double acc = -0.5 * g.dim() * kLog2Pi;
  for (int j = 0; j < g.dim(); ++j) {
    const double z = (x[j] - g.mean[j]) / g.sigma[j];
    acc += -std::log(g.sigma[j]) - 0.5 * z * z;
  }
  return acc;
}

double kl_gaussian(const DiagGaussian& g1, const DiagGaussian& g2) {
  require_same_dim(g1, g2, "kl_gaussian");
  double acc = -0.5 * g1.dim();
  for (int j = 0; j < g1.dim(); ++j) {
    const double dm = g1.mean[j] - g2.mean[j];
    const double v1 = g1.sigma[j] * g1.sigma[j];
    const double v2 = g2.sigma[j] * g2.sigma[j];
    acc += std::log(g2.sigma[j]) - std::log(g1.sigma[j]) +
           0.5 * (v1 + dm * dm) / v2;
  }
  return acc;
}

double entropy(const DiagGaussian& g) {
  double acc = 0.5 * g.dim() * (kLog2Pi + 1.0);
  for (double s : g.sigma) acc += std::log(s);
  return acc;
}

DiagGaussian m_centroid(const DiagGaussian& g1, const DiagGaussian& g2) {
  require_same_dim(g1, g2, "m_centroid");
  DiagGaussian out;
  out.mean.resize(g1.dim());
  out.sigma.resize(g1.dim());
  for (int j = 0; j < g1.dim(); ++j) {
    const double mu = 0.5 * (g1.mean[j] + g2.mean[j]);
    const double m2 = 0.5 * (g1.mean[j] * g1.mean[j] + g1.sigma[j] * g1.sigma[j] +
                             g2.mean[j] * g2.mean[j] + g2.sigma[j] * g2.sigma[j]);
    out.mean[j] = mu;
    out.sigma[j] = std::sqrt(m2 - mu * mu);
  }
  return out;
}

DiagGaussian e_centroid(const DiagGaussian& g1, const DiagGaussian& g2) {
  require_same_dim(g1, g2, "e_centroid");
  DiagGaussian out;
  out.mean.resize(g1.dim());
  out.sigma.resize(g1.dim());
  for (int j = 0; j < g1.dim(); ++j) {
    const double p1 = 1.0 / (g1.sigma[j] * g1.sigma[j]);
    const double p2 = 1.0 / (g2.sigma[j] * g2.sigma[j]);
    const double prec = 0.5 * (p1 + p2);
    const double h = 0.5 * (g1.mean[j] * p1 + g2.mean[j] * p2);
    out.mean[j] = h / prec;
    out.sigma[j] = std::sqrt(1.0 / prec);
  }
  return out;
}

double mixture_density(const DiagGaussian& g1, const DiagGaussian& g2,
                       const std::vector<double>& x) {
  require_same_dim(g1, g2, "mixture_density");
  const double l1 = log_density(g1, x);
  const double l2 = log_density(g2, x);
  const double m = std::max(l1, l2);
  // max-shifted log-sum-exp keeps far-apart components finite
  return 0.5 * std::exp(m) * (std::exp(l1 - m) + std::exp(l2 - m));
}

}  // namespace setembed
