// Python bindings for the model loader, solvers and verifier reports.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "minkowski/cli.hpp"
#include "minkowski/dimension.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/geometry.hpp"
#include "minkowski/model.hpp"
#include "minkowski/symbolic.hpp"
#include "minkowski/verifier.hpp"

namespace py = pybind11;
using namespace minkowski;

namespace {

using OptWeights = std::optional<std::vector<double>>;

BernoulliMeasure measure_for(const Model& model, const System& system, const OptWeights& weights) {
  if (weights) return BernoulliMeasure(*weights, "weights");
  if (model.weights) return BernoulliMeasure(*model.weights, "model weights");
  return default_measure(system);
}

double beta_for(const Model& model, const System& system, std::optional<double> beta) {
  if (beta) return *beta;
  if (model.beta) return *model.beta;
  return default_beta(system);
}

template <typename Report>
std::string csv_of(void (*writer)(std::ostream&, const Report&), const Report& report) {
  std::ostringstream out;
  writer(out, report);
  return out.str();
}

std::size_t component_depth(const System& system, double epsilon) {
  return std::visit(
      [&](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SymbolicSystem>) {
          std::size_t depth = 0;
          while (s.max_cylinder_diameter(depth) > epsilon / 4.0) ++depth;
          return depth;
        } else {
          return depth_for_delta(s, epsilon);
        }
      },
      system);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minkowski measure verification for fractal attractors and symbolic spaces";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());

  m.attr("DEFAULT_BUDGET") = kDefaultBudget;
  m.attr("STABLE_GROWTH") = kStableGrowth;

  py::class_<Model>(m, "Model")
      .def_readonly("name", &Model::name)
      .def_property_readonly("type", [](const Model& model) { return std::string(model.type_name()); })
      .def_property_readonly("is_system", &Model::is_system)
      .def_readonly("weights", &Model::weights)
      .def_readonly("beta", &Model::beta)
      .def_readonly("axis_permutation", &Model::axis_permutation)
      .def("__repr__", [](const Model& model) {
        return "<Model '" + model.name + "' (" + model.type_name() + ")>";
      });

  m.def("load_model", &load_model, py::arg("path"));
  m.def("parse_model", &parse_model, py::arg("text"));

  m.def("solve_similarity_dimension", [](const std::vector<double>& ratios) { return solve_similarity_dimension(ratios); },
        py::arg("ratios"));
  m.def(
      "symbolic_beta",
      [](int n, int mm, const std::vector<std::pair<int, int>>& digits) { return symbolic_beta(n, mm, digits); },
      py::arg("n"), py::arg("m"), py::arg("digits"));
  m.def(
      "beta_sequence",
      [](const Model& model) {
        const auto* sponge = std::get_if<SpongeSystem>(&model.content);
        if (!sponge) throw InvalidArgument("beta_sequence: model is not a sponge");
        return solve_beta_sequence(*sponge).betas;
      },
      py::arg("model"), "Per-axis exponents of a sponge model.");
  m.def(
      "fit_box_dimension",
      [](const std::vector<std::pair<double, double>>& samples) {
        const auto fit = fit_box_dimension(samples);
        return py::dict(py::arg("slope") = fit.slope, py::arg("intercept") = fit.intercept,
                        py::arg("residual") = fit.residual);
      },
      py::arg("samples"), "Least-squares slope of log count against -log delta for (delta, count) pairs.");

  m.def("default_beta", [](const Model& model) { return default_beta(model.system()); }, py::arg("model"));
  m.def("natural_base", [](const Model& model) { return natural_base(model.system()); }, py::arg("model"));
  m.def(
      "default_weights", [](const Model& model) { return default_measure(model.system()).weights(); },
      py::arg("model"));
  m.def("geometric_schedule", &geometric_schedule, py::arg("base"), py::arg("k_min"), py::arg("k_max"));

  m.def(
      "greedy_packing",
      [](const std::vector<Point>& points, double delta) {
        const auto result = greedy_packing(PointCloud::from_points(points), delta);
        return result.centers;
      },
      py::arg("points"), py::arg("delta"), "Indices of the greedily kept centres (pairwise farther than 2 delta).");
  m.def(
      "epsilon_components",
      [](const Model& model, double epsilon, std::optional<std::size_t> depth, std::uint64_t budget) {
        if (const auto* cloud = std::get_if<PointCloud>(&model.content)) {
          return epsilon_components(*cloud, epsilon).labels;
        }
        const System system = model.system();
        const std::size_t k = depth ? *depth : component_depth(system, epsilon);
        return std::visit([&](const auto& s) { return epsilon_components(s, epsilon, k, budget).labels; }, system);
      },
      py::arg("model"), py::arg("epsilon"), py::arg("depth") = py::none(), py::arg("budget") = kDefaultBudget,
      "Component label of every depth-k cylinder (or point), in lexicographic order.");

  py::class_<RatioRow>(m, "RatioRow")
      .def_readonly("component_id", &RatioRow::component_id)
      .def_readonly("epsilon", &RatioRow::epsilon)
      .def_readonly("delta", &RatioRow::delta)
      .def_readonly("depth", &RatioRow::depth)
      .def_readonly("packing_count", &RatioRow::packing_count)
      .def_readonly("measure", &RatioRow::measure)
      .def_readonly("ratio", &RatioRow::ratio);

  py::class_<RatioReport>(m, "RatioReport")
      .def_readonly("beta", &RatioReport::beta)
      .def_readonly("rows", &RatioReport::rows)
      .def_readonly("m_hat", &RatioReport::m_hat)
      .def_readonly("deltas", &RatioReport::deltas)
      .def_readonly("running_m_hat", &RatioReport::running_m_hat)
      .def_readonly("tail_growth", &RatioReport::tail_growth)
      .def_readonly("divergent", &RatioReport::divergent)
      .def_property_readonly("per_epsilon_m_hat",
                             [](const RatioReport& r) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& e : r.per_epsilon) out.emplace_back(e.epsilon, e.m_hat);
                               return out;
                             })
      .def("to_csv", [](const RatioReport& r) { return csv_of(&write_ratio_csv, r); });

  m.def(
      "ratio_report",
      [](const Model& model, const std::vector<double>& epsilons, const std::vector<double>& deltas,
         std::optional<double> beta, const OptWeights& weights, std::uint64_t budget, double measure_scale) {
        const System system = model.system();
        ReportOptions options;
        options.budget = budget;
        options.measure_scale = measure_scale;
        return minkowski_ratio_report(system, measure_for(model, system, weights), beta_for(model, system, beta),
                                      epsilons, deltas, options);
      },
      py::arg("model"), py::arg("epsilons"), py::arg("deltas"), py::arg("beta") = py::none(),
      py::arg("weights") = py::none(), py::arg("budget") = kDefaultBudget, py::arg("measure_scale") = 1.0,
      py::call_guard<py::gil_scoped_release>());

  py::class_<TransportReport>(m, "TransportReport")
      .def_readonly("source", &TransportReport::source)
      .def_readonly("target", &TransportReport::target)
      .def_property_readonly("source_slope", [](const TransportReport& r) { return r.source_fit.slope; })
      .def_property_readonly("target_slope", [](const TransportReport& r) { return r.target_fit.slope; })
      .def_readonly("lipschitz", &TransportReport::lipschitz)
      .def_readonly("m_hat_ratio", &TransportReport::m_hat_ratio)
      .def_readonly("slopes_agree", &TransportReport::slopes_agree)
      .def("to_csv", [](const TransportReport& r) { return csv_of(&write_transport_csv, r); });

  m.def(
      "transport_check",
      [](const Model& model, const std::vector<double>& epsilons, const std::vector<double>& deltas,
         std::optional<std::vector<double>> scale, std::optional<std::vector<double>> shift,
         std::optional<std::vector<std::uint32_t>> permutation, std::optional<double> beta, const OptWeights& weights,
         std::uint64_t budget) {
        if (scale.has_value() == permutation.has_value()) {
          throw InvalidArgument("transport_check: give exactly one of scale or permutation");
        }
        TransportMap map = permutation ? TransportMap(DigitPermutation{*permutation})
                                       : TransportMap(AffineScaling{*scale, shift.value_or(std::vector<double>{})});
        const System system = model.system();
        ReportOptions options;
        options.budget = budget;
        return bilipschitz_transport_check(system, measure_for(model, system, weights), map,
                                           beta_for(model, system, beta), epsilons, deltas, options);
      },
      py::arg("model"), py::arg("epsilons"), py::arg("deltas"), py::arg("scale") = py::none(),
      py::arg("shift") = py::none(), py::arg("permutation") = py::none(), py::arg("beta") = py::none(),
      py::arg("weights") = py::none(), py::arg("budget") = kDefaultBudget, py::call_guard<py::gil_scoped_release>());

  m.def(
      "spectrum",
      [](const Model& model, std::size_t rank, const OptWeights& weights, double bin_width, std::uint64_t budget) {
        const System system = model.system();
        const auto estimate =
            coarse_multifractal_spectrum(system, measure_for(model, system, weights), rank, budget, bin_width);
        std::vector<std::pair<double, std::uint64_t>> bins;
        for (const auto& bin : estimate.histogram) bins.emplace_back(bin.lo, bin.count);
        return bins;
      },
      py::arg("model"), py::arg("rank"), py::arg("weights") = py::none(), py::arg("bin_width") = 0.05,
      py::arg("budget") = kDefaultBudget, "Occupied (alpha lower edge, count) bins of the coarse local-dimension histogram.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
