#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "shn/binary_nets.hpp"
#include "shn/complex.hpp"
#include "shn/continuous_net.hpp"
#include "shn/harness.hpp"
#include "shn/homology.hpp"
#include "shn/io.hpp"
#include "shn/theory.hpp"

namespace py = pybind11;
using namespace shn;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

/// 2-D array -> PatternSet. Binary when every entry is +/-1, otherwise continuous.
PatternSet to_patterns(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("patterns must be a 2-D array (P x N)");
  std::vector<double> data(a.data(), a.data() + a.size());
  const bool binary = std::all_of(data.begin(), data.end(), [](double x) { return x == 1.0 || x == -1.0; });
  return PatternSet(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)), std::move(data),
                    binary ? PatternKind::Binary : PatternKind::Continuous);
}

Array patterns_to_array(const PatternSet& p) {
  Array out({static_cast<py::ssize_t>(p.num_patterns()), static_cast<py::ssize_t>(p.width())});
  std::copy(p.data().begin(), p.data().end(), out.mutable_data());
  return out;
}

BinaryState to_state(const Array& a) { return BinaryState::from_values(to_vector(a)); }

Array state_to_array(const BinaryState& s) {
  std::vector<double> v(s.spins.begin(), s.spins.end());
  return to_array(v);
}

Simplex to_simplex(const std::vector<Vertex>& v) { return Simplex::from_unsorted(v); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simplicial Hopfield networks";

  py::class_<FunctionalComplex>(m, "FunctionalComplex")
      .def(py::init([](std::size_t n, const std::vector<std::vector<Vertex>>& simplices, std::vector<double> weights) {
             std::vector<Simplex> s;
             for (const auto& v : simplices) s.push_back(to_simplex(v));
             return FunctionalComplex(n, std::move(s), std::move(weights));
           }),
           py::arg("n_vertices"), py::arg("simplices"), py::arg("weights") = std::vector<double>{})
      .def_property_readonly("n_vertices", &FunctionalComplex::n_vertices)
      .def_property_readonly("simplices",
                             [](const FunctionalComplex& c) {
                               std::vector<std::vector<Vertex>> out;
                               for (const auto& s : c.simplices()) out.emplace_back(s.vertices().begin(), s.vertices().end());
                               return out;
                             })
      .def_property_readonly("weights", [](const FunctionalComplex& c) {
        return to_array(std::vector<double>(c.weights().begin(), c.weights().end()));
      })
      .def("weight", [](const FunctionalComplex& c, const std::vector<Vertex>& s) { return c.weight(to_simplex(s)); })
      .def("counts_by_dimension", &FunctionalComplex::counts_by_dimension)
      .def("__len__", &FunctionalComplex::size)
      .def("to_json", [](const FunctionalComplex& c) { return complex_to_json(c).dump(); })
      .def_static("from_json", [](const std::string& s) { return complex_from_json(nlohmann::json::parse(s)); });

  m.def("conditions", [] {
    std::vector<std::string> out;
    for (auto c : all_conditions()) out.emplace_back(to_string(c));
    return out;
  });
  m.def("build_k_skeleton", &build_k_skeleton, py::arg("n"), py::arg("k"));
  m.def(
      "sample_complex",
      [](std::size_t n, const std::string& condition, std::uint64_t seed) {
        return sample_diluted(n, dilution_spec(parse_condition(condition), n), seed);
      },
      py::arg("n"), py::arg("condition"), py::arg("seed") = 0);
  m.def(
      "dilution_counts",
      [](std::size_t n, const std::string& condition) { return dilution_counts(dilution_spec(parse_condition(condition), n)); },
      py::arg("n"), py::arg("condition"));
  m.def(
      "hebbian_weights", [](const FunctionalComplex& c, const Array& p) { return hebbian_weights(c, to_patterns(p)); },
      py::arg("complex"), py::arg("patterns"));
  m.def("functional_euler_characteristic", &functional_euler_characteristic);
  m.def(
      "betti_numbers",
      [](const FunctionalComplex& c, int max_dim, bool gf2) {
        return betti_numbers(downward_closure(c), max_dim, gf2 ? RankField::GF2 : RankField::Rational).betti;
      },
      py::arg("complex"), py::arg("max_dim") = 2, py::arg("gf2") = false,
      "Betti numbers of the downward closure (all N vertices included).");

  m.def("random_binary_patterns", [](std::size_t p, std::size_t n, std::uint64_t seed) {
    return patterns_to_array(random_binary_patterns(p, n, seed));
  });
  m.def("hadamard_patterns", [](std::size_t p, std::size_t n, std::uint64_t seed) {
    return patterns_to_array(hadamard_patterns(p, n, seed));
  });
  m.def("random_uniform_patterns", [](std::size_t p, std::size_t n, std::uint64_t seed) {
    return patterns_to_array(random_uniform_patterns(p, n, seed));
  });

  m.def("traditional_energy", [](const Array& s, const FunctionalComplex& c) { return traditional_energy(to_state(s), c); });
  m.def("traditional_update", [](const Array& s, const FunctionalComplex& c) {
    return state_to_array(traditional_update_sync(to_state(s), c));
  });
  m.def(
      "run_to_convergence",
      [](const Array& s, const FunctionalComplex& c, std::size_t max_steps, const std::string& rule) {
        const auto out = run_to_convergence(to_state(s), TraditionalDynamics{}, c, PatternSet{}, max_steps,
                                            parse_stop_rule(rule));
        py::dict d;
        d["state"] = state_to_array(out.final_state);
        d["steps"] = out.steps_taken;
        d["energy_trace"] = to_array(out.energy_trace);
        d["stop_reason"] = std::string(to_string(out.stop_reason));
        return d;
      },
      py::arg("state"), py::arg("complex"), py::arg("max_steps") = kDefaultMaxSteps,
      py::arg("stop_rule") = "first_non_decrease");

  m.def("ced", [](const std::vector<Vertex>& s, const Array& xi, const Array& st, bool manhattan) {
    return ced(to_simplex(s), to_vector(xi), to_vector(st), manhattan ? DistanceBase::Manhattan : DistanceBase::Euclidean);
  }, py::arg("simplex"), py::arg("pattern"), py::arg("state"), py::arg("manhattan") = false);
  m.def("cmd", [](const std::vector<Vertex>& s, const Array& xi, const Array& st, bool manhattan) {
    return cmd(to_simplex(s), to_vector(xi), to_vector(st), manhattan ? DistanceBase::Manhattan : DistanceBase::Euclidean);
  }, py::arg("simplex"), py::arg("pattern"), py::arg("state"), py::arg("manhattan") = false);
  m.def("lse", [](double inv_t, const Array& p, const Array& s, const FunctionalComplex& c) {
    return lse(inv_t, to_patterns(p), to_vector(s), c);
  });
  m.def(
      "similarity",
      [](const Array& s, const Array& p, const FunctionalComplex& c, const std::string& measure) {
        return to_array(similarity_vector(to_vector(s), to_patterns(p), c, SimilarityMeasure::parse(measure)));
      },
      py::arg("state"), py::arg("patterns"), py::arg("complex"), py::arg("measure"));
  m.def(
      "continuous_update",
      [](const Array& s, const Array& p, const FunctionalComplex& c, const std::string& measure, double inv_t) {
        return to_array(continuous_update(to_vector(s), to_patterns(p), c, SimilarityMeasure::parse(measure), inv_t));
      },
      py::arg("state"), py::arg("patterns"), py::arg("complex"), py::arg("measure"), py::arg("inv_t"));
  m.def(
      "settle",
      [](const Array& s, const Array& p, const FunctionalComplex& c, const std::string& measure, double inv_t) {
        const auto out = settle(to_vector(s), to_patterns(p), c, SimilarityMeasure::parse(measure), inv_t);
        py::dict d;
        d["state"] = to_array(out.state);
        d["steps"] = out.steps;
        d["converged"] = out.converged;
        return d;
      },
      py::arg("state"), py::arg("patterns"), py::arg("complex"), py::arg("measure"), py::arg("inv_t"));

  m.def("capacity_mixed", [](std::size_t n, int d, bool errors) { return capacity_mixed({n, d, errors}); },
        py::arg("n"), py::arg("max_degree") = 1, py::arg("tolerate_errors") = true);
  m.def("connections_count", [](std::size_t n, int d) { return py::int_(py::str(connections_count(n, d).get_str())); });

  m.def(
      "_run_experiment_json",
      [](const std::string& config) {
        const auto cfg = RunConfig::from_json(nlohmann::json::parse(config));
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg);
        }
        return py::make_tuple(rows_csv(r), summary_csv(r));
      },
      "Runs a binary, continuous or homology experiment; returns (rows_csv, summary_csv).");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
