#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "hhcs/coherence.hpp"
#include "hhcs/error.hpp"
#include "hhcs/experiment.hpp"
#include "hhcs/recovery.hpp"
#include "hhcs/sampling.hpp"
#include "hhcs/signals.hpp"
#include "hhcs/system.hpp"
#include "hhcs/transforms.hpp"

namespace py = pybind11;
using namespace hhcs;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
  if (a.ndim() != 1) throw ShapeError("expected a 1-D array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())},
                          std::vector<py::ssize_t>{static_cast<py::ssize_t>(sizeof(double))});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SystemKind system_of(const std::string& tag, int r) { return {system_tag_from_string(tag), r}; }

Direction direction_of(const std::string& name) {
  if (name == "analysis") return Direction::analysis;
  if (name == "synthesis") return Direction::synthesis;
  throw InvalidArgument("direction must be analysis or synthesis");
}

SampleSet sample_of(const std::vector<Index>& omega, const std::vector<double>& weights) {
  SampleSet s;
  s.omega = omega;
  s.weights = weights.empty() ? std::vector<double>(omega.size(), 1.0) : weights;
  return s;
}

py::dict summary_row(const RatioSummary& s) {
  py::dict d;
  d["ratio"] = s.ratio;
  d["m"] = s.m;
  d["cs_sre_db"] = s.cs.sre_db;
  d["me_sre_db"] = s.me.sre_db;
  d["cs_trial_db"] = s.cs.trial_db;
  d["me_trial_db"] = s.me.trial_db;
  d["converged"] = s.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hhcs, m) {
  m.doc() = "Hadamard-Haar compressive sensing";
  m.attr("__version__") = std::string(kLibraryVersion);

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(e.category()) + ": " + e.what()).c_str());
    }
  });

  m.def("apply_basis",
        [](const std::string& basis, int r, const std::string& direction, const Array& x) {
          return to_array(apply_basis({basis_tag_from_string(basis), r}, direction_of(direction), view(x)));
        },
        py::arg("basis"), py::arg("r"), py::arg("direction"), py::arg("x"));
  m.def("fwht", [](const Array& x) { return to_array(fwht(view(x))); }, py::arg("x"));
  m.def("dense_basis",
        [](const std::string& basis, int r) -> Eigen::MatrixXd {
          return dense_basis({basis_tag_from_string(basis), r});
        },
        py::arg("basis"), py::arg("r"));

  m.def("local_coherence",
        [](const std::string& system, int r, const std::string& mode) {
          const CoherenceProfile p = local_coherence(system_of(system, r), mode_from_string(mode));
          return py::make_tuple(to_array(p.values), p.sum_sq);
        },
        py::arg("system"), py::arg("r"), py::arg("mode") = "closed");
  m.def("multilevel_coherence",
        [](const std::string& system, int r, const std::string& mode) -> Eigen::MatrixXd {
          return multilevel_coherence(system_of(system, r), mode_from_string(mode)).values;
        },
        py::arg("system"), py::arg("r"), py::arg("mode") = "closed");
  m.def("structure_check",
        [](const std::string& system, int r) {
          const StructureReport rep = structure_check(system_of(system, r));
          py::dict d;
          d["max_offdiagonal"] = rep.max_offdiagonal;
          d["max_magnitude_residual"] = rep.max_magnitude_residual;
          d["max_pattern_residual"] = rep.max_pattern_residual;
          d["holds"] = rep.holds();
          return d;
        },
        py::arg("system"), py::arg("r"));
  m.def("levels",
        [](const std::string& system, int r) { return system_of(system, r).partition().levels; },
        py::arg("system"), py::arg("r"));

  m.def("vds_pmf", [](const std::string& system, int r) { return to_array(vds_pmf(system_of(system, r)).pmf); },
        py::arg("system"), py::arg("r"));
  m.def("mds_allocate",
        [](const std::vector<std::size_t>& k, std::size_t total, const std::string& system, int r) {
          return mds_allocate(k, total, system_of(system, r).partition()).m;
        },
        py::arg("k"), py::arg("M"), py::arg("system"), py::arg("r"));
  m.def("draw_sample",
        [](const std::string& system, int r, const std::string& strategy, std::size_t count,
           std::uint64_t seed, const std::vector<std::size_t>& k) {
          const SystemKind sys = system_of(system, r);
          SamplingPlan plan;
          switch (strategy_from_string(strategy)) {
            case Strategy::uds: plan = uds_pmf(sys.dim()); break;
            case Strategy::vds: plan = vds_pmf(sys); break;
            case Strategy::mds: plan = mds_allocate(k, count, sys.partition()); break;
          }
          const SampleSet s = draw_sample(plan, count, seed);
          return py::make_tuple(s.omega, to_array(s.weights));
        },
        py::arg("system"), py::arg("r"), py::arg("strategy"), py::arg("M"), py::arg("seed"),
        py::arg("k") = std::vector<std::size_t>{});
  m.def("measure",
        [](const std::string& system, int r, const std::vector<Index>& omega, const Array& x) {
          return to_array(measure(system_of(system, r), sample_of(omega, {}), view(x)));
        },
        py::arg("system"), py::arg("r"), py::arg("omega"), py::arg("x"));

  m.def("solve_bpdn",
        [](const std::string& system, int r, const std::vector<Index>& omega,
           const std::vector<double>& weights, const Array& y, double epsilon,
           const std::string& fidelity, double tol_feas, double tol_gap, int max_iterations) {
          const Array yc = y;
          RecoveryProblem problem{system_of(system, r),
                                  sample_of(omega, weights),
                                  std::vector<double>(view(yc).begin(), view(yc).end()),
                                  epsilon,
                                  fidelity_from_string(fidelity),
                                  {tol_feas, tol_gap, max_iterations}};
          RecoveryReport rep;
          {
            py::gil_scoped_release release;
            rep = solve_bpdn(problem);
          }
          py::dict d;
          d["x_hat"] = to_array(rep.x_hat);
          d["coefficients"] = to_array(rep.coefficients);
          d["iterations"] = rep.iterations;
          d["residual"] = rep.residual;
          d["objective"] = rep.objective;
          d["converged"] = rep.converged;
          return d;
        },
        py::arg("system"), py::arg("r"), py::arg("omega"), py::arg("weights"), py::arg("y"),
        py::arg("epsilon") = 0.0, py::arg("fidelity") = "weighted", py::arg("tol_feas") = 1e-6,
        py::arg("tol_gap") = 1e-6, py::arg("max_iterations") = 20000);
  m.def("me_reconstruct",
        [](const std::string& system, int r, const std::vector<Index>& omega, const Array& y) {
          return to_array(me_reconstruct(system_of(system, r), sample_of(omega, {}), view(y)));
        },
        py::arg("system"), py::arg("r"), py::arg("omega"), py::arg("y"));

  m.def("generate",
        [](const std::string& kind, int r, double sigma, double center) {
          return to_array(generate({signal_kind_from_string(kind), sigma, center}, r));
        },
        py::arg("kind"), py::arg("r"), py::arg("sigma") = 16.0, py::arg("center") = 0.0);
  m.def("effective_sparsity",
        [](const Array& s, double rho, const std::string& system, int r) {
          const EffectiveSparsity es = effective_sparsity(view(s), rho, system_of(system, r).partition());
          return py::make_tuple(es.K, es.k);
        },
        py::arg("s"), py::arg("rho"), py::arg("system"), py::arg("r"));

  m.def("default_config", []() { return config_to_json(ExperimentConfig{}); });
  m.def("preset", [](const std::string& name) { return config_to_json(preset(name)); }, py::arg("name"));
  m.def("run_experiment",
        [](const std::string& config_json, int threads) {
          const ExperimentConfig config = config_from_json(config_json);
          ExperimentReport rep;
          {
            py::gil_scoped_release release;
            rep = run_experiment(config, {threads});
          }
          py::list rows;
          for (const RatioSummary& s : rep.summary) rows.append(summary_row(s));
          return rows;
        },
        py::arg("config_json"), py::arg("threads") = 1);
}
