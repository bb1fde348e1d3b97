// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "setembed/family_io.hpp"
#include "setembed/gaussian.hpp"
#include "setembed/histogram.hpp"
#include "setembed/mc_divergence.hpp"
#include "setembed/optimizer.hpp"
#include "setembed/set_model.hpp"

namespace py = pybind11;
using namespace setembed;

namespace {

SetFamily family_from_dict(const std::vector<std::string>& universe,
                           const std::map<std::string, std::vector<std::string>>& sets,
                           const std::map<std::string, double>& volumes) {
  SetFamily f;
  f.universe.elements = universe;
  f.universe.volume = {volumes.begin(), volumes.end()};
  for (const auto& [name, members] : sets) {
    SubsetRef s;
    s.name = name;
    s.members.insert(members.begin(), members.end());
    f.sets.push_back(std::move(s));
  }
  f.provenance.assign(f.sets.size(), Provenance::original);
  f.validate();
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Set embedding into diagonal Gaussian distributions";

  py::class_<GroundUniverse>(m, "GroundUniverse")
      .def(py::init<>())
      .def_readwrite("elements", &GroundUniverse::elements)
      .def_readwrite("volume", &GroundUniverse::volume)
      .def("volume_of", &GroundUniverse::volume_of);

  py::class_<SubsetRef>(m, "SubsetRef")
      .def(py::init([](const std::string& name,
                       const std::vector<std::string>& members) {
             SubsetRef s;
             s.name = name;
             s.members.insert(members.begin(), members.end());
             return s;
           }),
           py::arg("name"), py::arg("members"))
      .def_readwrite("name", &SubsetRef::name)
      .def_property_readonly("members", [](const SubsetRef& s) {
        return std::vector<std::string>(s.members.begin(), s.members.end());
      });

  py::class_<SetFamily>(m, "SetFamily")
      .def(py::init(&family_from_dict), py::arg("universe"), py::arg("sets"),
           py::arg("volumes") = std::map<std::string, double>{})
      .def_readwrite("universe", &SetFamily::universe)
      .def_readwrite("sets", &SetFamily::sets)
      .def("validate", &SetFamily::validate);

  py::class_<AtomicPartition>(m, "AtomicPartition")
      .def_property_readonly("atoms",
                             [](const AtomicPartition& p) {
                               std::vector<std::vector<std::string>> out;
                               for (const auto& a : p.atoms)
                                 out.emplace_back(a.begin(), a.end());
                               return out;
                             })
      .def_readonly("membership", &AtomicPartition::membership);

  py::class_<AugmentMode> augment_mode(m, "AugmentMode");
  augment_mode.def(py::init([](const std::string& kind, int count,
                               std::uint64_t seed) {
                     AugmentMode mode;
                     if (kind == "none") mode.kind = AugmentMode::none;
                     else if (kind == "full") mode.kind = AugmentMode::full;
                     else if (kind == "sample") mode.kind = AugmentMode::sample;
                     else throw std::invalid_argument("bad augment kind: " + kind);
                     mode.count = count;
                     mode.seed = seed;
                     return mode;
                   }),
                   py::arg("kind") = "none", py::arg("count") = 0,
                   py::arg("seed") = 0);

  m.def("compute_atoms", &compute_atoms, py::arg("family"));
  m.def("augment", &augment, py::arg("family"), py::arg("mode"));
  m.def("atoms_equivalent", &atoms_equivalent, py::arg("f1"), py::arg("f2"));
  m.def("set_volume", &set_volume, py::arg("subset"), py::arg("universe"));

  py::class_<AtomHistogram>(m, "AtomHistogram")
      .def_readonly("weights", &AtomHistogram::weights)
      .def_readonly("density", &AtomHistogram::density);

  m.def("uniform_histogram", &uniform_histogram, py::arg("subset"),
        py::arg("partition"), py::arg("universe"));
  m.def("damped_kl", &damped_kl, py::arg("p"), py::arg("q"), py::arg("eps"));
  m.def("extended_kl", &extended_kl, py::arg("p"), py::arg("q"));
  m.def("discrete_js", &discrete_js, py::arg("p"), py::arg("q"));
  m.def("histogram_entropy",
        py::overload_cast<const AtomHistogram&>(&entropy), py::arg("h"));

  py::class_<DiagGaussian>(m, "DiagGaussian")
      .def(py::init([](const std::vector<double>& mean,
                       const std::vector<double>& sigma) {
             DiagGaussian g{mean, sigma};
             g.validate();
             return g;
           }),
           py::arg("mean"), py::arg("sigma"))
      .def_readwrite("mean", &DiagGaussian::mean)
      .def_readwrite("sigma", &DiagGaussian::sigma);

  m.def("log_density", &log_density, py::arg("g"), py::arg("x"));
  m.def("kl_gaussian", &kl_gaussian, py::arg("g1"), py::arg("g2"));
  m.def("gaussian_entropy",
        py::overload_cast<const DiagGaussian&>(&entropy), py::arg("g"));
  m.def("m_centroid", &m_centroid, py::arg("g1"), py::arg("g2"));
  m.def("e_centroid", &e_centroid, py::arg("g1"), py::arg("g2"));
  m.def("mixture_density", &mixture_density, py::arg("g1"), py::arg("g2"),
        py::arg("x"));

  py::class_<NoiseBlock>(m, "NoiseBlock")
      .def_readonly("k", &NoiseBlock::k)
      .def_readonly("dim", &NoiseBlock::dim)
      .def_readonly("z", &NoiseBlock::z);

  m.def("make_noise", &make_noise, py::arg("seed"), py::arg("step"),
        py::arg("pair_id"), py::arg("k"), py::arg("dim"));
  m.def("mc_kl_to_mixture", &mc_kl_to_mixture, py::arg("g_from"),
        py::arg("g_other"), py::arg("noise"));
  m.def("mc_js", &mc_js, py::arg("g1"), py::arg("g2"), py::arg("noise1"),
        py::arg("noise2"));

  py::class_<MCConfig>(m, "MCConfig")
      .def(py::init<>())
      .def_readwrite("sample_count", &MCConfig::sample_count)
      .def_readwrite("seed", &MCConfig::seed)
      .def_readwrite("resample_each_step", &MCConfig::resample_each_step);

  py::class_<EmbeddingConfig>(m, "EmbeddingConfig")
      .def(py::init<>())
      .def_readwrite("dim", &EmbeddingConfig::dim)
      .def_readwrite("epsilon", &EmbeddingConfig::epsilon)
      .def_readwrite("learning_rate", &EmbeddingConfig::learning_rate)
      .def_readwrite("iterations", &EmbeddingConfig::iterations)
      .def_readwrite("mc", &EmbeddingConfig::mc)
      .def_readwrite("seed", &EmbeddingConfig::seed)
      .def_readwrite("augment", &EmbeddingConfig::augment)
      .def_property(
          "input_divergence",
          [](const EmbeddingConfig& c) {
            return c.input_divergence == InputDivergence::damped_kl ? "damped_kl"
                                                                    : "js";
          },
          [](EmbeddingConfig& c, const std::string& v) {
            if (v == "damped_kl") c.input_divergence = InputDivergence::damped_kl;
            else if (v == "js") c.input_divergence = InputDivergence::js;
            else throw std::invalid_argument("bad input divergence: " + v);
          })
      .def_property(
          "output_divergence",
          [](const EmbeddingConfig& c) {
            return c.output_divergence == OutputDivergence::kl ? "kl" : "mc_js";
          },
          [](EmbeddingConfig& c, const std::string& v) {
            if (v == "kl") c.output_divergence = OutputDivergence::kl;
            else if (v == "mc_js") c.output_divergence = OutputDivergence::mc_js;
            else throw std::invalid_argument("bad output divergence: " + v);
          });

  py::class_<StressReport>(m, "StressReport")
      .def_readonly("stress_trace", &StressReport::stress_trace)
      .def_readonly("input_div", &StressReport::input_div)
      .def_readonly("output_div", &StressReport::output_div)
      .def_readonly("scale_a", &StressReport::scale_a)
      .def_readonly("seconds", &StressReport::seconds);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("family", &FitResult::family)
      .def_readonly("embeddings", &FitResult::embeddings)
      .def_readonly("report", &FitResult::report)
      .def_property_readonly("set_names", [](const FitResult& r) {
        std::vector<std::string> names;
        for (const auto& s : r.family.sets) names.push_back(s.name);
        return names;
      });

  m.def("fit", &fit, py::arg("family"), py::arg("config") = EmbeddingConfig{});

  m.def("parse_family", [](const std::string& text) {
    const auto spec = parse_family(text);
    return to_family(spec);
  });
  m.def("render_svg", &render_svg, py::arg("embeddings"), py::arg("labels"),
        py::arg("colors"));
}
