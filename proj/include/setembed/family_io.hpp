// SPDX-License-Identifier: Apache-2.0
//
// Set-family file format, run orchestration and CSV/JSON/SVG outputs.
//
// Family files are line based:
//
//   # comment
//   universe A B C          (required, once, before any set)
//   volume B 2.0            (optional, per element)
//   set AB A B              (named set followed by its members)
//   color AB cornflowerblue (optional, per set)
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "setembed/optimizer.hpp"
#include "setembed/set_model.hpp"

namespace setembed {

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ", column " +
                           std::to_string(column_) + ": " + what_),
        line(line_),
        column(column_) {}
};

struct FamilySpec {
  GroundUniverse universe;
  std::vector<SubsetRef> sets;
  std::map<std::string, std::string> colors;  // set name -> SVG color

  bool operator==(const FamilySpec&) const = default;
};

FamilySpec parse_family(const std::string& text);  // throws ParseError
std::string print_family(const FamilySpec& spec);
SetFamily to_family(const FamilySpec& spec);

// One CSV row per set: name, mean coords, sigmas, volume, entropy; floats are
// printed with 17 significant digits for byte reproducibility.
std::string write_csv(const std::vector<std::string>& names,
                      const std::vector<DiagGaussian>& embeddings,
                      const std::vector<double>& volumes);

// JSON report: stress trace, divergence matrices, scale. Wall-clock is kept
// out so repeated runs are byte identical.
std::string write_report_json(const std::vector<std::string>& names,
                              const StressReport& report);

// One axis-aligned ellipse per embedding (mean +/- std), d = 2 only.
std::string render_svg(const std::vector<DiagGaussian>& embeddings,
                       const std::vector<std::string>& labels,
                       const std::vector<std::string>& colors);

// Default fill cycle used when a set has no explicit color.
const std::vector<std::string>& default_palette();

struct RunSpec {
  std::string input_path;
  EmbeddingConfig config;
  std::string out_csv;
  std::string out_json;
  std::string out_svg;
};

// Executes a full run and writes the requested artifacts.
// Returns 0 on success, nonzero after printing an error to stderr.
int run(const RunSpec& spec);

}  // namespace setembed
