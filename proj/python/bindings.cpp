// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "femtocap/allocator.hpp"
#include "femtocap/channel.hpp"
#include "femtocap/config.hpp"
#include "femtocap/montecarlo.hpp"
#include "femtocap/qoscap.hpp"

namespace py = pybind11;
using namespace femtocap;

namespace {

PathLossModel model_named(const std::string& name, double carrier_ghz) {
  if (name == "inh") return PathLossModel::indoor_hotspot_nlos(carrier_ghz);
  if (name == "umi") return PathLossModel::urban_micro_nlos(carrier_ghz);
  throw std::invalid_argument("model must be 'inh' or 'umi', got '" + name + "'");
}

ChannelState make_state(std::vector<double> floors, std::optional<std::vector<double>> caps, double total_power) {
  ChannelState s;
  s.caps = caps ? std::move(*caps) : std::vector<double>(floors.size(), kNoCap);
  s.floors = std::move(floors);
  s.total_power = total_power;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capped water-filling and QoS power caps for a co-channel femtocell";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("path_loss_db", [](const std::string& model, double d, double fc) { return path_loss_db(model_named(model, fc), d); },
        py::arg("model"), py::arg("distance_m"), py::arg("carrier_ghz") = 2.5,
        "NLoS path loss in dB; model is 'inh' (indoor hotspot) or 'umi' (urban micro)");
  m.def("fading_ratio_cdf", &fading_ratio_cdf, py::arg("x"));
  m.def(
      "power_cap",
      [](double gamma, double epsilon, double ibar, double hbar, double antenna_db, double wall_db) {
        MacroSideEstimate est;
        est.avg_interference = ibar;
        est.avg_cross_gain = hbar;
        est.femto_antenna_gain = std::pow(10.0, antenna_db / 10.0);
        est.wall = WallLoss::from_db(wall_db);
        const CapParams p = power_cap({gamma, epsilon}, est);
        py::dict d;
        d["zeta"] = p.zeta;
        d["delta"] = p.delta;
        d["kappa"] = p.kappa;
        d["cap"] = p.cap;
        return d;
      },
      py::arg("gamma"), py::arg("epsilon"), py::arg("avg_interference"), py::arg("avg_cross_gain"),
      py::arg("antenna_db") = 0.0, py::arg("wall_db") = 0.0);
  m.def(
      "psi_approx",
      [](double p, double a, double h, double i, double wall_db) { return psi_approx(p, a, h, i, WallLoss::from_db(wall_db)); },
      py::arg("femto_power"), py::arg("antenna_gain"), py::arg("cross_gain"), py::arg("interference"),
      py::arg("wall_db") = 0.0);

  py::class_<AllocationResult>(m, "Allocation")
      .def_readonly("powers", &AllocationResult::powers)
      .def_readonly("water_level", &AllocationResult::water_level)
      .def_readonly("sum_rate", &AllocationResult::sum_rate)
      .def_property_readonly("kkt_residual", [](const AllocationResult& r) { return r.certificate.max_residual; })
      .def_property_readonly("lambda_", [](const AllocationResult& r) { return r.certificate.lambda; })
      .def("__repr__", [](const AllocationResult& r) {
        return "<Allocation sum_rate=" + std::to_string(r.sum_rate) +
               " kkt_residual=" + std::to_string(r.certificate.max_residual) + ">";
      });

  m.def(
      "waterfill",
      [](std::vector<double> floors, double total_power, std::optional<std::vector<double>> caps,
         const std::string& solver) {
        const ChannelState s = make_state(std::move(floors), std::move(caps), total_power);
        if (solver == "iterative") return waterfill_capped_iterative(s);
        if (solver == "bisection") return waterfill_capped_bisection(s);
        throw std::invalid_argument("solver must be 'iterative' or 'bisection'");
      },
      py::arg("floors"), py::arg("total_power"), py::arg("caps") = py::none(), py::arg("solver") = "iterative",
      "Maximize sum log2(1 + p/floor) s.t. 0 <= p <= cap, sum p <= total_power");
  m.def(
      "kkt_residual",
      [](std::vector<double> floors, double total_power, std::vector<double> powers,
         std::optional<std::vector<double>> caps) {
        const ChannelState s = make_state(std::move(floors), std::move(caps), total_power);
        AllocationResult r;
        r.powers = std::move(powers);
        return check_kkt(s, r).max_residual;
      },
      py::arg("floors"), py::arg("total_power"), py::arg("powers"), py::arg("caps") = py::none());

  m.def("default_config", [] { return serialize_config(Config{}); });
  m.def(
      "simulate",
      [](const std::string& config_json, std::optional<std::uint64_t> seed, std::optional<std::size_t> reps) {
        Config c = config_json.empty() ? Config{} : parse_config(config_json);
        if (seed) c.seed = *seed;
        if (reps) c.reps = *reps;
        ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c, c.reps, c.seed);
        }
        py::dict d;
        d["fig2_csv"] = fig2_csv(r);
        d["fig3_csv"] = fig3_csv(r);
        d["summary_json"] = summary_json(r);
        return d;
      },
      py::arg("config_json") = "", py::arg("seed") = py::none(), py::arg("reps") = py::none(),
      "Run the Monte Carlo experiment; returns the CSV and JSON outputs as strings");
}
