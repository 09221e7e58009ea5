#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "stroll/deadline.hpp"
#include "stroll/doubling.hpp"
#include "stroll/io.hpp"
#include "stroll/oracle.hpp"
#include "stroll/treewidth.hpp"

namespace py = pybind11;
using namespace stroll;

namespace {

Rational to_rational(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return Rational(h.cast<std::int64_t>());
  if (py::isinstance<py::str>(h)) return rational_from_string(h.cast<std::string>());
  if (py::isinstance<py::float_>(h)) {
    double v = h.cast<double>();
    return Rational(static_cast<std::int64_t>(std::llround(v * 1000000.0)), 1000000);
  }
  throw py::type_error("expected int, float, or \"p/q\" string");
}

py::object emit_rational(const Rational& r) {
  auto fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(r.num(), r.den());
}

std::vector<std::vector<Rational>> to_table(const py::sequence& rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : rows) {
    out.emplace_back();
    for (const auto& cell : row.cast<py::sequence>())
      out.back().push_back(to_rational(cell));
  }
  return out;
}

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  return ids;
}

std::map<int, Rational> to_deadlines(const py::dict& d) {
  std::map<int, Rational> out;
  for (const auto& [k, v] : d) out[k.cast<int>()] = to_rational(v);
  return out;
}

}  // namespace

PYBIND11_MODULE(_stroll, mod) {
  mod.doc() = "solvers for k-stroll, orienteering, and deadline routing";

  py::class_<MetricInstance>(mod, "Metric")
      .def_static("from_matrix",
                  [](const py::sequence& rows) {
                    auto t = to_table(rows);
                    auto ids = default_ids(t.size());
                    return MetricInstance::from_matrix(std::move(ids), std::move(t));
                  })
      .def_static("from_coords",
                  [](const py::sequence& rows) {
                    auto t = to_table(rows);
                    auto ids = default_ids(t.size());
                    return MetricInstance::from_coords(std::move(ids), std::move(t));
                  })
      .def("__len__", &MetricInstance::size)
      .def("dist", [](const MetricInstance& m, int u, int v) {
        return emit_rational(m.dist(u, v));
      })
      .def("scale", [](const MetricInstance& m) {
        return emit_rational(m.normalization_scale());
      });

  mod.def(
      "solve_kstroll",
      [](const MetricInstance& m, int s, int t, int k, double epsilon, int gamma,
         std::uint64_t seed) {
        SolverConfig cfg;
        cfg.epsilon = epsilon;
        cfg.gamma = gamma > 0 ? gamma
                              : 3 * static_cast<int>(std::ceil(std::log2(
                                        std::max(2, m.size()))));
        cfg.seed = seed;
        Rng rng(seed);
        auto res = solve_kstroll_dbl(m, s, t, k, cfg, rng);
        py::dict out;
        out["feasible"] = res.feasible;
        if (res.feasible) {
          out["length"] = emit_rational(res.length);
          out["walk"] = res.walk->vertices();
          out["prize"] = res.prize;
          out["certified"] = res.certified;
        }
        return out;
      },
      py::arg("metric"), py::arg("s"), py::arg("t"), py::arg("k"),
      py::arg("epsilon") = 0.5, py::arg("gamma") = 0, py::arg("seed") = 1);

  mod.def(
      "solve_p2p",
      [](const MetricInstance& m, int s, int t, const py::handle& budget,
         double epsilon, int gamma, std::uint64_t seed) {
        SolverConfig cfg;
        cfg.epsilon = epsilon;
        cfg.gamma = gamma > 0 ? gamma
                              : 3 * static_cast<int>(std::ceil(std::log2(
                                        std::max(2, m.size()))));
        cfg.seed = seed;
        Rng rng(seed);
        auto res = solve_p2p_dbl(m, s, t, to_rational(budget), cfg, rng);
        py::dict out;
        out["feasible"] = res.feasible;
        if (res.feasible) {
          out["length"] = emit_rational(res.length);
          out["walk"] = res.walk->vertices();
          out["prize"] = res.prize;
          out["certified"] = res.certified;
        }
        return out;
      },
      py::arg("metric"), py::arg("s"), py::arg("t"), py::arg("budget"),
      py::arg("epsilon") = 0.5, py::arg("gamma") = 0, py::arg("seed") = 1);

  mod.def(
      "solve_deadline",
      [](const MetricInstance& m, int s, const py::dict& deadlines, double epsilon,
         int m_max, const std::string& mode) {
        auto dl = to_deadlines(deadlines);
        DblDeadlineResult res;
        if (mode == "bicriteria")
          res = solve_deadline_bicriteria(m, s, dl, epsilon, m_max);
        else
          res = solve_deadline_dbl(m, s, dl, epsilon, m_max);
        py::dict out;
        out["feasible"] = res.feasible;
        if (res.feasible) {
          out["walk"] = res.walk;
          out["on_time"] = res.on_time;
          out["credited"] = res.credited;
          out["certified"] = res.certified;
          py::list arr;
          for (const auto& a : res.arrivals) arr.append(emit_rational(a));
          out["arrivals"] = arr;
        }
        return out;
      },
      py::arg("metric"), py::arg("s"), py::arg("deadlines"),
      py::arg("epsilon") = 0.5, py::arg("m_max") = 3,
      py::arg("mode") = "exact-deadlines");

  mod.def(
      "exact_kstroll",
      [](const MetricInstance& m, int s, int t, int k) {
        auto res = exact_kstroll(m, s, t, k);
        py::dict out;
        out["feasible"] = res.feasible;
        if (res.feasible) {
          out["length"] = emit_rational(res.value);
          out["walk"] = res.witness->vertices();
        }
        return out;
      },
      py::arg("metric"), py::arg("s"), py::arg("t"), py::arg("k"));

  mod.def(
      "exact_p2p",
      [](const MetricInstance& m, int s, int t, const py::handle& budget) {
        auto res = exact_p2p(m, s, t, to_rational(budget));
        py::dict out;
        out["feasible"] = res.feasible;
        if (res.feasible) {
          out["prize"] = static_cast<int>(res.value.num());
          out["walk"] = res.witness->vertices();
        }
        return out;
      },
      py::arg("metric"), py::arg("s"), py::arg("t"), py::arg("budget"));

  mod.def(
      "exact_deadline",
      [](const MetricInstance& m, int s, const py::dict& deadlines) {
        auto res = exact_deadline(m, s, to_deadlines(deadlines));
        py::dict out;
        out["on_time"] = static_cast<int>(res.value.num());
        out["walk"] = res.witness->vertices();
        return out;
      },
      py::arg("metric"), py::arg("s"), py::arg("deadlines"));
}
