// SPDX-License-Identifier: Apache-2.0

#include "setembed/family_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace setembed {

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

FamilySpec parse_family(const std::string& text) {
  FamilySpec spec;
  bool have_universe = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const auto& head = tokens[0];

    if (head.text == "universe") {
      if (have_universe)
        throw ParseError(lineno, head.column, "duplicate universe directive");
      if (tokens.size() < 2)
        throw ParseError(lineno, head.column, "empty universe");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (spec.universe.contains(tokens[i].text))
          throw ParseError(lineno, tokens[i].column,
                           "duplicate element id: " + tokens[i].text);
        spec.universe.elements.push_back(tokens[i].text);
      }
      have_universe = true;
    } else if (head.text == "volume") {
      if (!have_universe)
        throw ParseError(lineno, head.column, "volume before universe");
      if (tokens.size() != 3)
        throw ParseError(lineno, head.column, "expected: volume <element> <value>");
      if (!spec.universe.contains(tokens[1].text))
        throw ParseError(lineno, tokens[1].column,
                         "unknown element id: " + tokens[1].text);
      char* end = nullptr;
      const double v = std::strtod(tokens[2].text.c_str(), &end);
      if (end == tokens[2].text.c_str() || *end != '\0' || !(v > 0.0))
        throw ParseError(lineno, tokens[2].column,
                         "volume must be a positive number");
      spec.universe.volume[tokens[1].text] = v;
    } else if (head.text == "set") {
      if (!have_universe)
        throw ParseError(lineno, head.column, "set before universe");
      if (tokens.size() < 2)
        throw ParseError(lineno, head.column, "set needs a name");
      SubsetRef s;
      s.name = tokens[1].text;
      for (const auto& existing : spec.sets)
        if (existing.name == s.name)
          throw ParseError(lineno, tokens[1].column,
                           "duplicate set name: " + s.name);
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (!spec.universe.contains(tokens[i].text))
          throw ParseError(lineno, tokens[i].column,
                           "unknown element id: " + tokens[i].text);
        s.members.insert(tokens[i].text);
      }
      spec.sets.push_back(std::move(s));
    } else if (head.text == "color") {
      if (tokens.size() != 3)
        throw ParseError(lineno, head.column, "expected: color <set> <color>");
      const bool known =
          std::any_of(spec.sets.begin(), spec.sets.end(),
                      [&](const SubsetRef& s) { return s.name == tokens[1].text; });
      if (!known)
        throw ParseError(lineno, tokens[1].column,
                         "color for unknown set: " + tokens[1].text);
      spec.colors[tokens[1].text] = tokens[2].text;
    } else {
      throw ParseError(lineno, head.column, "unknown directive: " + head.text);
    }
  }

  if (!have_universe) throw ParseError(lineno + 1, 1, "missing universe");
  if (spec.sets.empty()) throw ParseError(lineno + 1, 1, "no sets defined");
  return spec;
}

std::string print_family(const FamilySpec& spec) {
  std::ostringstream out;
  out << "universe";
  for (const auto& e : spec.universe.elements) out << ' ' << e;
  out << '\n';
  for (const auto& e : spec.universe.elements) {
    auto it = spec.universe.volume.find(e);
    if (it != spec.universe.volume.end())
      out << "volume " << e << ' ' << fmt17(it->second) << '\n';
  }
  for (const auto& s : spec.sets) {
    out << "set " << s.name;
    for (const auto& m : s.members) out << ' ' << m;
    out << '\n';
  }
  for (const auto& s : spec.sets) {
    auto it = spec.colors.find(s.name);
    if (it != spec.colors.end())
      out << "color " << s.name << ' ' << it->second << '\n';
  }
  return out.str();
}

SetFamily to_family(const FamilySpec& spec) {
  SetFamily fam;
  fam.universe = spec.universe;
  fam.sets = spec.sets;
  fam.provenance.assign(fam.sets.size(), Provenance::original);
  fam.validate();
  return fam;
}

std::string write_csv(const std::vector<std::string>& names,
                      const std::vector<DiagGaussian>& embeddings,
                      const std::vector<double>& volumes) {
  std::ostringstream out;
  const int d = embeddings.empty() ? 0 : embeddings[0].dim();
  out << "name";
  for (int j = 0; j < d; ++j) out << ",mean_" << (j + 1);
  for (int j = 0; j < d; ++j) out << ",sigma_" << (j + 1);
  out << ",volume,entropy\n";
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    out << names[i];
    for (int j = 0; j < d; ++j) out << ',' << fmt17(embeddings[i].mean[j]);
    for (int j = 0; j < d; ++j) out << ',' << fmt17(embeddings[i].sigma[j]);
    out << ',' << fmt17(volumes[i]) << ',' << fmt17(entropy(embeddings[i]))
        << '\n';
  }
  return out.str();
}

std::string write_report_json(const std::vector<std::string>& names,
                              const StressReport& report) {
  nlohmann::json j;
  j["sets"] = names;
  j["scale_a"] = report.scale_a;
  j["stress"] = report.stress_trace;
  j["input_divergence"] = report.input_div;
  j["output_divergence"] = report.output_div;
  return j.dump(2) + "\n";
}

const std::vector<std::string>& default_palette() {
  static const std::vector<std::string> palette = {
      "orange",  "lightcoral", "seagreen", "cornflowerblue",
      "silver",  "darkviolet", "tomato"};
  return palette;
}

std::string render_svg(const std::vector<DiagGaussian>& embeddings,
                       const std::vector<std::string>& labels,
                       const std::vector<std::string>& colors) {
  if (embeddings.empty()) throw std::invalid_argument("render_svg: no embeddings");
  for (const auto& g : embeddings)
    if (g.dim() != 2)
      throw std::invalid_argument(
          "render_svg: only d=2 is supported; project the embedding first");
  if (labels.size() != embeddings.size() || colors.size() != embeddings.size())
    throw std::invalid_argument("render_svg: label/color count mismatch");

  // Bounding box over mean +/- sigma, in SVG coordinates (y flipped).
  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (const auto& g : embeddings) {
    min_x = std::min(min_x, g.mean[0] - g.sigma[0]);
    max_x = std::max(max_x, g.mean[0] + g.sigma[0]);
    min_y = std::min(min_y, -g.mean[1] - g.sigma[1]);
    max_y = std::max(max_y, -g.mean[1] + g.sigma[1]);
  }
  const double margin = 0.1 * std::max(max_x - min_x, max_y - min_y);
  min_x -= margin;
  max_x += margin;
  min_y -= margin;
  max_y += margin;
  const double w = max_x - min_x;
  const double h = max_y - min_y;
  const double stroke = 0.004 * std::max(w, h);
  const double font = 0.04 * std::max(w, h);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"640\" height=\"640\" viewBox=\"" << fmt6(min_x) << ' '
      << fmt6(min_y) << ' ' << fmt6(w) << ' ' << fmt6(h) << "\">\n";
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const auto& g = embeddings[i];
    out << "  <ellipse cx=\"" << fmt6(g.mean[0]) << "\" cy=\"" << fmt6(-g.mean[1])
        << "\" rx=\"" << fmt6(g.sigma[0]) << "\" ry=\"" << fmt6(g.sigma[1])
        << "\" fill=\"" << xml_escape(colors[i])
        << "\" fill-opacity=\"0.35\" stroke=\"" << xml_escape(colors[i])
        << "\" stroke-width=\"" << fmt6(stroke) << "\"/>\n";
  }
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const auto& g = embeddings[i];
    out << "  <text x=\"" << fmt6(g.mean[0]) << "\" y=\"" << fmt6(-g.mean[1])
        << "\" font-size=\"" << fmt6(font)
        << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">"
        << xml_escape(labels[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

}  // namespace

int run(const RunSpec& spec) {
  std::ifstream in(spec.input_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open input file: " << spec.input_path << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  try {
    const FamilySpec family_spec = parse_family(buf.str());
    const SetFamily family = to_family(family_spec);
    const FitResult result = fit(family, spec.config);

    std::vector<std::string> names;
    std::vector<double> volumes;
    std::vector<std::string> colors;
    const auto& palette = default_palette();
    for (std::size_t i = 0; i < result.family.sets.size(); ++i) {
      const auto& s = result.family.sets[i];
      names.push_back(s.name);
      volumes.push_back(set_volume(s, result.family.universe));
      auto it = family_spec.colors.find(s.name);
      colors.push_back(it != family_spec.colors.end()
                           ? it->second
                           : palette[i % palette.size()]);
    }

    if (!spec.out_csv.empty() &&
        !write_file(spec.out_csv, write_csv(names, result.embeddings, volumes))) {
      std::cerr << "error: cannot write " << spec.out_csv << "\n";
      return 1;
    }
    if (!spec.out_json.empty() &&
        !write_file(spec.out_json, write_report_json(names, result.report))) {
      std::cerr << "error: cannot write " << spec.out_json << "\n";
      return 1;
    }
    if (!spec.out_svg.empty() &&
        !write_file(spec.out_svg,
                    render_svg(result.embeddings, names, colors))) {
      std::cerr << "error: cannot write " << spec.out_svg << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace setembed
