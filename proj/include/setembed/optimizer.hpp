// SPDX-License-Identifier: Apache-2.0
//
// The embedding engine: trainable parameters, the sigma reparameterization
// tying entropy to set volume, the divergence-matching stress objective, and
// the Adam loop.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "setembed/gaussian.hpp"
#include "setembed/histogram.hpp"
#include "setembed/mc_divergence.hpp"
#include "setembed/set_model.hpp"

namespace setembed {

enum class InputDivergence { damped_kl, js };
enum class OutputDivergence { kl, mc_js };
enum class SigmaMode { reparam, init_only };

struct ScaleMode {
  bool learn = true;
  double fixed_value = 1.0;  // used when learn == false
};

struct PairSampling {
  bool all = true;
  int per_step = 0;  // ordered pairs per step when all == false
  std::uint64_t seed = 0;
};

struct EmbeddingConfig {
  int dim = 2;
  InputDivergence input_divergence = InputDivergence::js;
  OutputDivergence output_divergence = OutputDivergence::mc_js;
  double epsilon = 1e-3;       // damped-KL constant
  double learning_rate = 0.05;
  int iterations = 2000;
  SigmaMode sigma_mode = SigmaMode::reparam;
  ScaleMode scale;
  PairSampling pairs;
  MCConfig mc;
  std::uint64_t seed = 0;
  AugmentMode augment;

  void validate() const;
};

struct EmbeddingState {
  int n = 0;    // number of sets
  int dim = 0;
  std::vector<double> means;           // n*dim, row-major
  std::vector<double> tau;             // dim (reparam mode)
  std::vector<double> log_sigma_free;  // n*dim (init_only mode)
  double log_a = 0.0;
  std::vector<double> log_volume;      // n, fixed
  std::vector<double> adam_m, adam_v;  // first/second moments per parameter
  std::int64_t step = 0;
};

struct StressReport {
  std::vector<double> stress_trace;            // one value per iteration
  std::vector<std::vector<double>> input_div;  // n×n, final
  std::vector<std::vector<double>> output_div; // n×n, at final parameters
  double scale_a = 1.0;
  double seconds = 0.0;
};

struct FitResult {
  SetFamily family;  // after augmentation; order matches embeddings
  std::vector<DiagGaussian> embeddings;
  StressReport report;
};

// Gradient of the stress w.r.t. all trainable parameters, laid out as
// [means | tau or log_sigma_free | log_a].
struct StressGradient {
  std::vector<double> d_means;
  std::vector<double> d_tau;             // reparam mode
  std::vector<double> d_log_sigma_free;  // init_only mode
  double d_log_a = 0.0;
};

EmbeddingState init_state(const SetFamily& family, const AtomicPartition& partition,
                          const EmbeddingConfig& config);

DiagGaussian realized_gaussian(const EmbeddingState& state, int set_index,
                               const EmbeddingConfig& config);

// Pairwise input divergences over all ordered pairs of distinct sets.
std::vector<std::vector<double>> input_divergence_matrix(
    const SetFamily& family, const AtomicPartition& partition,
    const EmbeddingConfig& config);

double stress(const EmbeddingState& state,
              const std::vector<std::vector<double>>& input_div,
              const EmbeddingConfig& config);

// Stress value and its full gradient at the current step's noise.
double stress_and_gradient(const EmbeddingState& state,
                           const std::vector<std::vector<double>>& input_div,
                           const EmbeddingConfig& config, StressGradient& grad);

// One Adam update on all trainable parameters; returns the stress evaluated
// before the update.
double step(EmbeddingState& state,
            const std::vector<std::vector<double>>& input_div,
            const EmbeddingConfig& config);

// Full pipeline: augment, atoms, histograms, input divergences, init, loop.
FitResult fit(const SetFamily& family, const EmbeddingConfig& config);

}  // namespace setembed
