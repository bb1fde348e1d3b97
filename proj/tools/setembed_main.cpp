// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: embeds a set-family file into diagonal Gaussians and
// writes CSV / JSON / SVG artifacts.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "setembed/family_io.hpp"

namespace {

bool parse_scale(const std::string& text, setembed::ScaleMode& scale,
                 std::string& err) {
  if (text == "learn") {
    scale.learn = true;
    return true;
  }
  if (text.rfind("fixed:", 0) == 0) {
    try {
      scale.fixed_value = std::stod(text.substr(6));
    } catch (...) {
      err = "bad scale value in '" + text + "'";
      return false;
    }
    scale.learn = false;
    return true;
  }
  err = "expected 'learn' or 'fixed:<f>', got '" + text + "'";
  return false;
}

bool parse_augment(const std::string& text, std::uint64_t seed,
                   setembed::AugmentMode& mode, std::string& err) {
  if (text == "none") {
    mode.kind = setembed::AugmentMode::none;
    return true;
  }
  if (text == "full") {
    mode.kind = setembed::AugmentMode::full;
    return true;
  }
  if (text.rfind("sample:", 0) == 0) {
    try {
      mode.count = std::stoi(text.substr(7));
    } catch (...) {
      err = "bad sample count in '" + text + "'";
      return false;
    }
    mode.kind = setembed::AugmentMode::sample;
    mode.seed = seed;
    return true;
  }
  err = "expected 'none', 'full' or 'sample:<n>', got '" + text + "'";
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Embed a family of finite sets into diagonal Gaussian distributions by "
      "divergence-matching stress minimization"};

  setembed::RunSpec spec;
  std::string divergence = "js";
  std::string input_div_override, output_div_override;
  std::string sigma_mode = "reparam";
  std::string scale = "learn";
  std::string augment = "none";

  app.add_option("--input", spec.input_path, "set-family file")->required();
  app.add_option("--divergence", divergence,
                 "divergence pair: kl (damped KL in, analytic KL out) or js")
      ->check(CLI::IsMember({"kl", "js"}));
  app.add_option("--input-divergence", input_div_override,
                 "override the input divergence only")
      ->check(CLI::IsMember({"damped_kl", "js"}));
  app.add_option("--output-divergence", output_div_override,
                 "override the output divergence only")
      ->check(CLI::IsMember({"kl", "mc_js"}));
  app.add_option("--epsilon", spec.config.epsilon, "damped-KL constant");
  app.add_option("--dim", spec.config.dim, "embedding dimension");
  app.add_option("--mc-samples", spec.config.mc.sample_count,
                 "Monte-Carlo samples per pair per step");
  app.add_option("--lr", spec.config.learning_rate, "Adam learning rate");
  app.add_option("--iters", spec.config.iterations, "optimizer iterations");
  app.add_option("--seed", spec.config.seed, "master seed");
  app.add_option("--sigma-mode", sigma_mode, "reparam or init-only")
      ->check(CLI::IsMember({"reparam", "init-only"}));
  app.add_option("--scale", scale, "scale a: learn or fixed:<f>");
  app.add_option("--augment", augment, "none, full, or sample:<n>");
  app.add_option("--out-csv", spec.out_csv, "embedding table output path");
  app.add_option("--out-json", spec.out_json, "run report output path");
  app.add_option("--out-svg", spec.out_svg, "ellipse plot output path");

  CLI11_PARSE(app, argc, argv);

  if (divergence == "kl") {
    spec.config.input_divergence = setembed::InputDivergence::damped_kl;
    spec.config.output_divergence = setembed::OutputDivergence::kl;
  } else {
    spec.config.input_divergence = setembed::InputDivergence::js;
    spec.config.output_divergence = setembed::OutputDivergence::mc_js;
  }
  if (input_div_override == "damped_kl")
    spec.config.input_divergence = setembed::InputDivergence::damped_kl;
  else if (input_div_override == "js")
    spec.config.input_divergence = setembed::InputDivergence::js;
  if (output_div_override == "kl")
    spec.config.output_divergence = setembed::OutputDivergence::kl;
  else if (output_div_override == "mc_js")
    spec.config.output_divergence = setembed::OutputDivergence::mc_js;

  spec.config.sigma_mode = sigma_mode == "reparam"
                               ? setembed::SigmaMode::reparam
                               : setembed::SigmaMode::init_only;
  spec.config.mc.seed = spec.config.seed;

  std::string err;
  if (!parse_scale(scale, spec.config.scale, err) ||
      !parse_augment(augment, spec.config.seed, spec.config.augment, err)) {
    std::cerr << "error: " << err << "\n";
    return 2;
  }

  return setembed::run(spec);
}
