// SPDX-License-Identifier: Apache-2.0

#include "setembed/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "setembed/rng.hpp"

namespace setembed {

namespace {

// Stream ids for randomness unrelated to pair noise; pair ids are < n².
constexpr std::uint64_t kMeansStream = 0xF000000000000001ULL;
constexpr std::uint64_t kPairPickStream = 0xF000000000000002ULL;

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

std::uint64_t pair_id(int n, int i, int j) {
  return static_cast<std::uint64_t>(i) * n + j;
}

// Ordered pairs of distinct sets used at this step, in a fixed order.
std::vector<std::pair<int, int>> step_pairs(int n, const EmbeddingConfig& cfg,
                                            std::int64_t step) {
  std::vector<std::pair<int, int>> all;
  all.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) all.emplace_back(i, j);
  if (cfg.pairs.all || cfg.pairs.per_step >= static_cast<int>(all.size()))
    return all;

  std::vector<std::size_t> idx(all.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::uint64_t key =
      stream_key(cfg.pairs.seed, static_cast<std::uint64_t>(step), kPairPickStream);
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[stream_u64(key, i) % i]);
  idx.resize(cfg.pairs.per_step);
  std::sort(idx.begin(), idx.end());  // fixed accumulation order

  std::vector<std::pair<int, int>> picked;
  picked.reserve(idx.size());
  for (std::size_t k : idx) picked.push_back(all[k]);
  return picked;
}

// Closed-form gradient of kl_gaussian(g1 : g2).
void kl_gaussian_grad(const DiagGaussian& g1, const DiagGaussian& g2,
                      PairGrad& grad) {
  const int d = g1.dim();
  grad.d_mu1.assign(d, 0.0);
  grad.d_sigma1.assign(d, 0.0);
  grad.d_mu2.assign(d, 0.0);
  grad.d_sigma2.assign(d, 0.0);
  for (int j = 0; j < d; ++j) {
    const double dm = g1.mean[j] - g2.mean[j];
    const double s1 = g1.sigma[j], s2 = g2.sigma[j];
    const double v2 = s2 * s2;
    grad.d_mu1[j] = dm / v2;
    grad.d_mu2[j] = -dm / v2;
    grad.d_sigma1[j] = -1.0 / s1 + s1 / v2;
    grad.d_sigma2[j] = 1.0 / s2 - (s1 * s1 + dm * dm) / (v2 * s2);
  }
}

struct GradBuffers {
  std::vector<double> d_means;
  std::vector<double> d_tau;
  std::vector<double> d_log_sigma_free;
  double d_log_a = 0.0;
};

// Scatter dL/d(mu_i, sigma_i) into the trainable-parameter buffers.
void accumulate(const EmbeddingState& state, const EmbeddingConfig& cfg, int i,
                const std::vector<double>& d_mu, const std::vector<double>& d_sigma,
                double weight, const DiagGaussian& g, GradBuffers& out) {
  const int d = state.dim;
  for (int j = 0; j < d; ++j) {
    out.d_means[i * d + j] += weight * d_mu[j];
    const double d_sig = weight * d_sigma[j] * g.sigma[j];  // chain via log sigma
    if (cfg.sigma_mode == SigmaMode::reparam)
      out.d_tau[j] += d_sig;
    else
      out.d_log_sigma_free[i * d + j] += d_sig;
  }
}

double evaluate(const EmbeddingState& state,
                const std::vector<std::vector<double>>& input_div,
                const EmbeddingConfig& cfg, GradBuffers* grad) {
  const int n = state.n;
  const int d = state.dim;
  const double a = std::exp(state.log_a);
  if (grad) {
    grad->d_means.assign(static_cast<std::size_t>(n) * d, 0.0);
    grad->d_tau.assign(d, 0.0);
    grad->d_log_sigma_free.assign(static_cast<std::size_t>(n) * d, 0.0);
    grad->d_log_a = 0.0;
  }

  std::vector<DiagGaussian> gauss(n);
  for (int i = 0; i < n; ++i) gauss[i] = realized_gaussian(state, i, cfg);

  const std::uint64_t noise_step =
      cfg.mc.resample_each_step ? static_cast<std::uint64_t>(state.step) : 0;

  double total = 0.0;
  for (const auto& [i, j] : step_pairs(n, cfg, state.step)) {
    double dout = 0.0;
    PairGrad pg;
    if (cfg.output_divergence == OutputDivergence::kl) {
      dout = kl_gaussian(gauss[i], gauss[j]);
      if (grad) kl_gaussian_grad(gauss[i], gauss[j], pg);
    } else {
      const NoiseBlock n1 = make_noise(cfg.mc.seed, noise_step, pair_id(n, i, j),
                                       cfg.mc.sample_count, d);
      const NoiseBlock n2 = make_noise(cfg.mc.seed, noise_step, pair_id(n, j, i),
                                       cfg.mc.sample_count, d);
      dout = grad ? mc_js_gradient(gauss[i], gauss[j], n1, n2, pg)
                  : mc_js(gauss[i], gauss[j], n1, n2);
    }

    const double r = input_div[i][j] - a * dout;
    if (!std::isfinite(r))
      throw std::runtime_error("non-finite stress term at pair (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
    total += r * r;

    if (grad) {
      const double w = -2.0 * r * a;  // dS/dDout
      accumulate(state, cfg, i, pg.d_mu1, pg.d_sigma1, w, gauss[i], *grad);
      accumulate(state, cfg, j, pg.d_mu2, pg.d_sigma2, w, gauss[j], *grad);
      if (cfg.scale.learn) grad->d_log_a += -2.0 * r * dout * a;
    }
  }
  return total;
}

}  // namespace

void EmbeddingConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("config: dim must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("config: learning_rate must be > 0");
  if (iterations < 0) throw std::invalid_argument("config: iterations < 0");
  if (mc.sample_count < 1)
    throw std::invalid_argument("config: mc.sample_count must be >= 1");
  if (!scale.learn && !(scale.fixed_value > 0.0))
    throw std::invalid_argument("config: fixed scale must be > 0");
  if (!pairs.all && pairs.per_step < 1)
    throw std::invalid_argument("config: pair sample size must be >= 1");
}

EmbeddingState init_state(const SetFamily& family, const AtomicPartition&,
                          const EmbeddingConfig& config) {
  config.validate();
  family.validate();
  const int n = static_cast<int>(family.sets.size());
  const int d = config.dim;

  EmbeddingState st;
  st.n = n;
  st.dim = d;
  st.log_volume.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v = set_volume(family.sets[i], family.universe);
    if (!(v > 0.0))
      throw std::invalid_argument("init_state: empty set " + family.sets[i].name);
    st.log_volume[i] = std::log(v);
  }

  st.means = standard_normals(stream_key(config.seed, 0, kMeansStream),
                              static_cast<std::size_t>(n) * d);
  for (double& m : st.means) m *= 0.1;

  st.tau.assign(d, 0.0);
  st.log_sigma_free.resize(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) st.log_sigma_free[i * d + j] = st.log_volume[i];

  st.log_a = config.scale.learn ? 0.0 : std::log(config.scale.fixed_value);

  const std::size_t sigma_params = config.sigma_mode == SigmaMode::reparam
                                       ? static_cast<std::size_t>(d)
                                       : static_cast<std::size_t>(n) * d;
  const std::size_t total = static_cast<std::size_t>(n) * d + sigma_params + 1;
  st.adam_m.assign(total, 0.0);
  st.adam_v.assign(total, 0.0);
  return st;
}

DiagGaussian realized_gaussian(const EmbeddingState& state, int set_index,
                               const EmbeddingConfig& config) {
  if (set_index < 0 || set_index >= state.n)
    throw std::out_of_range("realized_gaussian: bad set index");
  const int d = state.dim;
  DiagGaussian g;
  g.mean.assign(state.means.begin() + static_cast<std::size_t>(set_index) * d,
                state.means.begin() + static_cast<std::size_t>(set_index + 1) * d);
  g.sigma.resize(d);
  for (int j = 0; j < d; ++j) {
    const double log_sigma =
        config.sigma_mode == SigmaMode::reparam
            ? state.tau[j] + state.log_volume[set_index]
            : state.log_sigma_free[set_index * d + j];
    g.sigma[j] = std::exp(log_sigma);
  }
  return g;
}

std::vector<std::vector<double>> input_divergence_matrix(
    const SetFamily& family, const AtomicPartition& partition,
    const EmbeddingConfig& config) {
  const int n = static_cast<int>(family.sets.size());
  std::vector<AtomHistogram> hist(n);
  for (int i = 0; i < n; ++i)
    hist[i] = uniform_histogram(family.sets[i], partition, family.universe);

  std::vector<std::vector<double>> din(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      din[i][j] = config.input_divergence == InputDivergence::damped_kl
                      ? damped_kl(hist[i], hist[j], config.epsilon)
                      : discrete_js(hist[i], hist[j]);
    }
  return din;
}

double stress(const EmbeddingState& state,
              const std::vector<std::vector<double>>& input_div,
              const EmbeddingConfig& config) {
  return evaluate(state, input_div, config, nullptr);
}

double stress_and_gradient(const EmbeddingState& state,
                           const std::vector<std::vector<double>>& input_div,
                           const EmbeddingConfig& config, StressGradient& grad) {
  GradBuffers buf;
  const double s = evaluate(state, input_div, config, &buf);
  grad.d_means = std::move(buf.d_means);
  grad.d_tau = std::move(buf.d_tau);
  grad.d_log_sigma_free = std::move(buf.d_log_sigma_free);
  grad.d_log_a = buf.d_log_a;
  return s;
}

double step(EmbeddingState& state,
            const std::vector<std::vector<double>>& input_div,
            const EmbeddingConfig& config) {
  StressGradient g;
  const double s = stress_and_gradient(state, input_div, config, g);

  // Flatten [means | tau or log_sigma_free | log_a] for the Adam update.
  std::vector<double> grad_flat = g.d_means;
  if (config.sigma_mode == SigmaMode::reparam)
    grad_flat.insert(grad_flat.end(), g.d_tau.begin(), g.d_tau.end());
  else
    grad_flat.insert(grad_flat.end(), g.d_log_sigma_free.begin(),
                     g.d_log_sigma_free.end());
  grad_flat.push_back(config.scale.learn ? g.d_log_a : 0.0);

  const std::int64_t t = state.step + 1;
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(t));
  std::vector<double> delta(grad_flat.size());
  for (std::size_t p = 0; p < grad_flat.size(); ++p) {
    state.adam_m[p] = kAdamBeta1 * state.adam_m[p] + (1.0 - kAdamBeta1) * grad_flat[p];
    state.adam_v[p] =
        kAdamBeta2 * state.adam_v[p] + (1.0 - kAdamBeta2) * grad_flat[p] * grad_flat[p];
    delta[p] = config.learning_rate * (state.adam_m[p] / bc1) /
               (std::sqrt(state.adam_v[p] / bc2) + kAdamEps);
  }

  std::size_t p = 0;
  for (double& m : state.means) m -= delta[p++];
  if (config.sigma_mode == SigmaMode::reparam)
    for (double& tj : state.tau) tj -= delta[p++];
  else
    for (double& l : state.log_sigma_free) l -= delta[p++];
  if (config.scale.learn) state.log_a -= delta[p];
  ++p;

  ++state.step;
  return s;
}

FitResult fit(const SetFamily& family, const EmbeddingConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  config.validate();

  FitResult result;
  result.family = augment(family, config.augment);
  const AtomicPartition partition = compute_atoms(result.family);
  result.report.input_div = input_divergence_matrix(result.family, partition, config);

  EmbeddingState state = init_state(result.family, partition, config);
  const int n = state.n;

  if (n > 1) {
    result.report.stress_trace.reserve(config.iterations);
    for (int it = 0; it < config.iterations; ++it)
      result.report.stress_trace.push_back(step(state, result.report.input_div, config));
  }

  result.embeddings.reserve(n);
  for (int i = 0; i < n; ++i)
    result.embeddings.push_back(realized_gaussian(state, i, config));

  // Final output divergences at the last step's noise.
  const std::uint64_t noise_step =
      config.mc.resample_each_step ? static_cast<std::uint64_t>(state.step) : 0;
  result.report.output_div.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (config.output_divergence == OutputDivergence::kl) {
        result.report.output_div[i][j] =
            kl_gaussian(result.embeddings[i], result.embeddings[j]);
      } else {
        const NoiseBlock n1 = make_noise(config.mc.seed, noise_step,
                                         pair_id(n, i, j), config.mc.sample_count,
                                         state.dim);
        const NoiseBlock n2 = make_noise(config.mc.seed, noise_step,
                                         pair_id(n, j, i), config.mc.sample_count,
                                         state.dim);
        result.report.output_div[i][j] =
            mc_js(result.embeddings[i], result.embeddings[j], n1, n2);
      }
    }

  result.report.scale_a = std::exp(state.log_a);
  result.report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace setembed
