#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlue/bench.hpp"
#include "qlue/datagen.hpp"
#include "qlue/error.hpp"
#include "qlue/metrics.hpp"
#include "qlue/qlue.hpp"
#include "qlue/statevector.hpp"

namespace py = pybind11;
using namespace qlue;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Dataset make_dataset(const std::vector<std::vector<double>>& coords, const std::vector<double>& energies,
                     int precision_bits) {
  if (coords.size() != energies.size()) throw Error(ErrorCode::InvalidInput, "coords and energies differ in length");
  return Dataset::from_rows(coords, energies, {}, precision_bits);
}

py::dict cluster(const std::vector<std::vector<double>>& coords, const std::vector<double>& energies,
                 const Params& params, const std::string& engine, std::uint64_t seed) {
  auto data = make_dataset(coords, energies, params.precision_bits);
  const auto run = bench::cluster_with(bench::engine_from_string(engine), data, params, seed);
  std::vector<double> density;
  std::vector<long long> nh;
  std::vector<std::string> roles;
  for (const auto& p : data.points()) {
    density.push_back(p.density);
    nh.push_back(p.nearest_higher ? static_cast<long long>(*p.nearest_higher) : -1);
    roles.emplace_back(to_string(p.role));
  }
  py::dict out;
  out["labels"] = run.result.labels;
  out["seeds"] = run.result.seeds;
  out["outliers"] = run.result.outliers;
  out["n_clusters"] = run.result.n_clusters;
  out["density"] = density;
  out["nearest_higher"] = nh;
  out["roles"] = roles;
  out["ledger"] = to_python(run.ledger.to_json());
  return out;
}

py::dict generate(const py::dict& spec) {
  const auto data = datagen::generate(datagen::spec_from_json(from_python(spec)));
  std::vector<std::vector<double>> coords(data.size(), std::vector<double>(data.dim()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t a = 0; a < data.dim(); ++a) coords[i][a] = data.coord(i, a);
  }
  py::dict out;
  out["coords"] = coords;
  out["energies"] = data.energies();
  out["labels"] = data.true_labels();
  return out;
}

}  // namespace

PYBIND11_MODULE(_qlue, m) {
  m.doc() = "Density-peak clustering with a simulated Grover search model";

  static py::exception<Error> error(m, "QlueError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<Params>(m, "Params")
      .def(py::init<>())
      .def(py::init([](double d_c, double delta, double rho_c, double tile_edge, int precision_bits, bool nh_global) {
             Params p;
             p.d_c = d_c;
             p.delta = delta;
             p.rho_c = rho_c;
             p.tile_edge = tile_edge;
             p.precision_bits = precision_bits;
             p.nh_global = nh_global;
             return p;
           }),
           py::arg("d_c") = 20.0, py::arg("delta") = 2.0, py::arg("rho_c") = 25.0, py::arg("tile_edge") = 0.0,
           py::arg("precision_bits") = 16, py::arg("nh_global") = false)
      .def_readwrite("d_c", &Params::d_c)
      .def_readwrite("delta", &Params::delta)
      .def_readwrite("rho_c", &Params::rho_c)
      .def_readwrite("tile_edge", &Params::tile_edge)
      .def_readwrite("precision_bits", &Params::precision_bits)
      .def_readwrite("nh_global", &Params::nh_global)
      .def_property_readonly("d_m", &Params::d_m)
      .def("__repr__", [](const Params& p) {
        return "Params(d_c=" + std::to_string(p.d_c) + ", delta=" + std::to_string(p.delta) +
               ", rho_c=" + std::to_string(p.rho_c) + ")";
      });

  m.def("cluster", &cluster, py::arg("coords"), py::arg("energies"), py::arg("params") = Params{},
        py::arg("engine") = "quantum", py::arg("seed") = 0,
        "Cluster points; returns labels, seeds, densities, nearest highers and the query ledger.");

  m.def("generate", &generate, py::arg("spec"), "Synthetic dataset from a spec dict (family, sigma, ...).");

  m.def(
      "scores",
      [](const std::vector<int>& pred, const std::vector<int>& truth, std::optional<std::vector<double>> energies) {
        const auto s = energies ? metrics::scores(pred, truth, *energies) : metrics::unit_energy_scores(pred, truth);
        return py::make_tuple(s.homogeneity, s.completeness);
      },
      py::arg("predicted"), py::arg("truth"), py::arg("energies") = py::none(),
      "Energy-weighted (homogeneity, completeness); unit energies when none are given.");

  m.def("grover_iterations", &grover_iterations, py::arg("m"), py::arg("k"));
  m.def(
      "grover_success_probability",
      [](std::uint64_t m, const std::vector<std::uint64_t>& marked, unsigned iterations) {
        return qc::grover_success_probability(m, marked, iterations);
      },
      py::arg("m"), py::arg("marked"), py::arg("iterations"));

  m.def(
      "run_experiment",
      [](const py::dict& config) {
        const auto cfg = bench::config_from_json(from_python(config));
        auto report = bench::run(cfg);
        if (!cfg.output_dir.empty()) bench::write_report(cfg, report);
        return to_python(report.payload());
      },
      py::arg("config"), "Run a sweep from a config dict and return the report payload.");
}
