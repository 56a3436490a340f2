#include "minkowski/cli.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "minkowski/dimension.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/model.hpp"
#include "minkowski/symbolic.hpp"
#include "minkowski/verifier.hpp"

namespace minkowski {

namespace {

struct Options {
  std::string model_path;
  std::string out_path;
  std::uint64_t budget = kDefaultBudget;
  std::optional<double> delta_base;
  std::string delta_range;
  std::vector<double> deltas;
  std::vector<double> epsilons;
  std::vector<double> weights;
  std::optional<double> beta;
  double measure_scale = 1.0;
  std::optional<std::size_t> depth;
  std::string metric = "euclidean";
  bool fit = false;
  std::vector<std::size_t> ranks;
  std::vector<double> scale;
  std::vector<double> shift;
  std::vector<std::uint32_t> permutation;
  std::size_t rank = 0;
  double bin_width = 0.05;
  std::vector<double> scales;
  std::size_t samples = 1024;
};

void add_model(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model_path, "Model JSON file")->required();
  cmd->add_option("--depth-budget", o.budget, "Largest number of words enumerated at one depth")
      ->check(CLI::PositiveNumber);
}

void add_out(CLI::App* cmd, Options& o) { cmd->add_option("--out", o.out_path, "Write the report to this file"); }

void add_schedule(CLI::App* cmd, Options& o) {
  cmd->add_option("--delta-base", o.delta_base, "Schedule base b (delta_k = b^-k); default: the system's natural base")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta-range", o.delta_range, "Schedule exponents k_min..k_max");
  cmd->add_option("--delta", o.deltas, "Explicit delta values (instead of a schedule)")->delimiter(',');
}

void add_epsilons(CLI::App* cmd, Options& o) {
  cmd->add_option("--epsilon", o.epsilons, "Component scales, comma separated")->delimiter(',')->required();
}

void add_measure(CLI::App* cmd, Options& o) {
  cmd->add_option("--weights", o.weights, "Bernoulli weights, comma separated")->delimiter(',');
  cmd->add_option("--beta", o.beta, "Exponent overriding the model's dimension");
}

std::vector<double> schedule_of(const Options& o, const System* system, const char* command) {
  if (!o.deltas.empty()) return o.deltas;
  if (o.delta_range.empty()) {
    throw InvalidArgument(fmt::format("{}: give --delta-range k_min..k_max or --delta", command));
  }
  const auto dots = o.delta_range.find("..");
  int k_min = 0, k_max = 0;
  try {
    if (dots == std::string::npos) throw std::invalid_argument("no '..'");
    std::size_t used = 0;
    k_min = std::stoi(o.delta_range.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument("trailing text");
    const auto tail = o.delta_range.substr(dots + 2);
    k_max = std::stoi(tail, &used);
    if (used != tail.size()) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw InvalidArgument(
        fmt::format("{}: --delta-range '{}' is not of the form k_min..k_max", command, o.delta_range));
  }
  double base = 0.0;
  if (o.delta_base) {
    base = *o.delta_base;
  } else if (system) {
    base = natural_base(*system);
  } else {
    throw InvalidArgument(fmt::format("{}: --delta-base is required for this model", command));
  }
  return geometric_schedule(base, k_min, k_max);
}

BernoulliMeasure measure_of(const Options& o, const Model& model, const System& system) {
  if (!o.weights.empty()) return BernoulliMeasure(o.weights, "--weights");
  if (model.weights) return BernoulliMeasure(*model.weights, "model weights");
  return default_measure(system);
}

double beta_of(const Options& o, const Model& model, const System& system) {
  if (o.beta) return *o.beta;
  if (model.beta) return *model.beta;
  return default_beta(system);
}

Metric metric_of(const Options& o) {
  if (o.metric == "euclidean") return Metric::Euclidean;
  if (o.metric == "max") return Metric::MaxNorm;
  throw InvalidArgument(fmt::format("--metric '{}' must be euclidean or max", o.metric));
}

void cmd_dim(const Options& o, const Model& model, std::ostream& out) {
  out << "model: " << model.name << " (" << model.type_name() << ")\n";
  const System system = model.system();
  if (const auto* sponge = std::get_if<SpongeSystem>(&system)) {
    out << "dimension: " << sponge->dimension() << "\ndigits: " << sponge->size() << '\n';
    out << "axis_permutation:";
    for (auto axis : model.axis_permutation) out << ' ' << axis;
    out << '\n';
    const auto betas = solve_beta_sequence(*sponge);
    for (std::size_t j = 0; j < betas.betas.size(); ++j) {
      out << "beta_" << j + 1 << ": " << format_real(betas.betas[j]) << '\n';
    }
    for (std::size_t j = 0; j < betas.alphas.size(); ++j) {
      out << "alpha_" << j + 1 << ": " << format_real(betas.alphas[j]) << '\n';
    }
    out << "box_dimension: " << format_real(betas.box_dimension()) << '\n';
  } else if (const auto* ifs = std::get_if<SimilarIFS>(&system)) {
    out << "similarity_dimension: " << format_real(solve_similarity_dimension(ifs->ratios())) << '\n';
    if (ifs->dimension() == 1) {
      const auto maps = ifs->as_interval_maps();
      out << "open_set_condition: " << (check_osc_intervals(maps) ? "true" : "false") << '\n';
    }
  } else {
    const auto& symbolic = std::get<SymbolicSystem>(system);
    out << "flavor: " << (symbolic.flavor() == SymbolicFlavor::Full ? "full" : "half") << '\n';
    out << "beta: " << format_real(symbolic_beta(symbolic.n(), symbolic.m(), symbolic.digits())) << '\n';
  }
  if (o.fit) {
    const auto deltas = schedule_of(o, &system, "dim");
    const auto mu = BernoulliMeasure::uniform(std::visit([](const auto& s) { return s.size(); }, system));
    // One epsilon above every delta: the fit only needs whole-space counts.
    const double epsilon = 4.0 * *std::max_element(deltas.begin(), deltas.end());
    ReportOptions options;
    options.budget = o.budget;
    const auto report = minkowski_ratio_report(system, mu, 1.0, std::vector<double>{epsilon}, deltas, options);
    const auto fit = fit_box_dimension(report.total_counts);
    out << "fit_samples:";
    for (const auto& [delta, count] : fit.samples) out << ' ' << format_real(delta) << '=' << count;
    out << "\nfit_slope: " << format_real(fit.slope) << "\nfit_intercept: " << format_real(fit.intercept)
        << "\nfit_residual: " << format_real(fit.residual) << '\n';
  }
}

void cmd_pack(const Options& o, const Model& model, std::ostream& out) {
  out << "delta,depth,count\n";
  if (const auto* cloud = std::get_if<PointCloud>(&model.content)) {
    for (double delta : schedule_of(o, nullptr, "pack")) {
      out << format_real(delta) << ',' << 0 << ',' << greedy_packing(*cloud, delta, metric_of(o)).count << '\n';
    }
    return;
  }
  const System system = model.system();
  for (double delta : schedule_of(o, &system, "pack")) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          const std::size_t depth = o.depth ? *o.depth : depth_for_delta(s, delta);
          std::size_t count = 0;
          if constexpr (std::is_same_v<T, SymbolicSystem>) {
            count = greedy_packing(symbolic_point_cloud(s, depth, o.budget), delta).count;
          } else {
            count = greedy_packing(sample_attractor(s, depth, o.budget), delta, metric_of(o)).count;
          }
          out << format_real(delta) << ',' << depth << ',' << count << '\n';
        },
        system);
  }
}

void cmd_components(const Options& o, const Model& model, std::ostream& out) {
  out << "epsilon,depth,components\n";
  for (double epsilon : o.epsilons) {
    if (const auto* cloud = std::get_if<PointCloud>(&model.content)) {
      out << format_real(epsilon) << ',' << 0 << ',' << epsilon_components(*cloud, epsilon, metric_of(o)).size()
          << '\n';
      continue;
    }
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          std::size_t depth = 0;
          if (o.depth) {
            depth = *o.depth;
          } else if constexpr (std::is_same_v<T, SymbolicSystem>) {
            while (s.max_cylinder_diameter(depth) > epsilon / 4.0) ++depth;
          } else {
            depth = depth_for_delta(s, epsilon);
          }
          out << format_real(epsilon) << ',' << depth << ',' << epsilon_components(s, epsilon, depth, o.budget).size()
              << '\n';
        },
        model.system());
  }
}

// Writes the report to --out when given, echoing the '#' summary lines to
// `out`; otherwise writes everything to `out`.
template <typename Writer>
void emit(const Options& o, std::ostream& out, Writer&& write) {
  if (o.out_path.empty()) {
    write(out);
    return;
  }
  std::ostringstream buffer;
  write(buffer);
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw InvalidArgument(fmt::format("--out: cannot write '{}'", o.out_path));
  file << buffer.str();
  out << "wrote " << o.out_path << '\n';
  std::istringstream lines(buffer.str());
  for (std::string line; std::getline(lines, line);) {
    if (line.starts_with('#')) out << line << '\n';
  }
}

ReportOptions report_options(const Options& o) {
  ReportOptions options;
  options.budget = o.budget;
  options.measure_scale = o.measure_scale;
  return options;
}

void cmd_verify(const Options& o, const Model& model, std::ostream& out) {
  const System system = model.system();
  const auto deltas = schedule_of(o, &system, "verify");
  const auto report = minkowski_ratio_report(system, measure_of(o, model, system), beta_of(o, model, system),
                                             o.epsilons, deltas, report_options(o));
  emit(o, out, [&](std::ostream& s) { write_ratio_csv(s, report); });
}

void cmd_criterion(const Options& o, const Model& model, std::ostream& out) {
  const System system = model.system();
  const auto deltas = schedule_of(o, &system, "criterion");
  const auto report = partition_criterion_check(system, measure_of(o, model, system), beta_of(o, model, system),
                                                o.ranks, deltas, report_options(o));
  emit(o, out, [&](std::ostream& s) { write_partition_csv(s, report); });
}

void cmd_transport(const Options& o, const Model& model, std::ostream& out) {
  const System system = model.system();
  const auto deltas = schedule_of(o, &system, "transport");
  if (!o.scale.empty() && !o.permutation.empty()) {
    throw InvalidArgument("transport: give either --scale or --permutation, not both");
  }
  TransportMap map = AffineScaling{o.scale, o.shift};
  if (!o.permutation.empty()) {
    map = DigitPermutation{o.permutation};
  } else if (o.scale.empty() && std::holds_alternative<SymbolicSystem>(system)) {
    std::vector<std::uint32_t> identity(std::get<SymbolicSystem>(system).size());
    std::iota(identity.begin(), identity.end(), 0u);
    map = DigitPermutation{identity};
  }
  const auto report = bilipschitz_transport_check(system, measure_of(o, model, system), map,
                                                  beta_of(o, model, system), o.epsilons, deltas, report_options(o));
  emit(o, out, [&](std::ostream& s) { write_transport_csv(s, report); });
}

void cmd_spectrum(const Options& o, const Model& model, std::ostream& out) {
  const System system = model.system();
  const auto spectrum = coarse_multifractal_spectrum(system, measure_of(o, model, system), o.rank, o.budget, o.bin_width);
  emit(o, out, [&](std::ostream& s) { write_spectrum_csv(s, spectrum); });
}

void cmd_doubling(const Options& o, const Model& model, std::ostream& out) {
  const System system = model.system();
  const auto scales = o.scales.empty() ? schedule_of(o, &system, "doubling") : o.scales;
  const auto report = doubling_measure_check(system, measure_of(o, model, system), scales, o.samples, o.budget);
  emit(o, out, [&](std::ostream& s) { write_doubling_csv(s, report); });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Packing numbers, epsilon-components and Minkowski-measure reports for self-similar sets, "
               "diagonal sponges and symbolic spaces",
               "minkowski"};
  app.require_subcommand(1);
  Options o;

  auto* dim = app.add_subcommand("dim", "Solve the dimension exponents");
  add_model(dim, o);
  add_schedule(dim, o);
  dim->add_flag("--fit", o.fit, "Also fit a slope to whole-space packing counts over the schedule");

  auto* pack = app.add_subcommand("pack", "Greedy packing counts");
  add_model(pack, o);
  add_schedule(pack, o);
  pack->add_option("--depth", o.depth, "Sampling depth (default: the depth rule)");
  pack->add_option("--metric", o.metric, "euclidean or max (geometric models)");

  auto* components = app.add_subcommand("components", "Count epsilon-components");
  add_model(components, o);
  add_epsilons(components, o);
  components->add_option("--depth", o.depth, "Cylinder depth (default: the depth rule)");
  components->add_option("--metric", o.metric, "euclidean or max (point models)");

  auto* verify = app.add_subcommand("verify", "Minkowski ratio report over components and deltas");
  add_model(verify, o);
  add_schedule(verify, o);
  add_epsilons(verify, o);
  add_measure(verify, o);
  add_out(verify, o);
  verify->add_option("--measure-scale", o.measure_scale, "Multiply every component measure by this factor")
      ->check(CLI::PositiveNumber);

  auto* criterion = app.add_subcommand("criterion", "Ratio report over rank-k cylinder partitions");
  add_model(criterion, o);
  add_schedule(criterion, o);
  add_measure(criterion, o);
  add_out(criterion, o);
  criterion->add_option("--ranks", o.ranks, "Increasing partition ranks, comma separated")
      ->delimiter(',')
      ->required();

  auto* transport = app.add_subcommand("transport", "Ratio report on the image under a bi-Lipschitz map");
  add_model(transport, o);
  add_schedule(transport, o);
  add_epsilons(transport, o);
  add_measure(transport, o);
  add_out(transport, o);
  transport->add_option("--scale", o.scale, "Coordinatewise scale factors (geometric models)")->delimiter(',');
  transport->add_option("--shift", o.shift, "Coordinatewise shifts (geometric models)")->delimiter(',');
  transport->add_option("--permutation", o.permutation, "Digit permutation a -> p[a] (symbolic models)")
      ->delimiter(',');

  auto* spectrum = app.add_subcommand("spectrum", "Coarse local-dimension histogram of rank-k cylinders");
  add_model(spectrum, o);
  add_measure(spectrum, o);
  add_out(spectrum, o);
  spectrum->add_option("--rank", o.rank, "Cylinder rank")->required()->check(CLI::PositiveNumber);
  spectrum->add_option("--bin-width", o.bin_width, "Histogram bin width")->check(CLI::PositiveNumber);

  auto* doubling = app.add_subcommand("doubling", "Observed doubling ratios of the measure");
  add_model(doubling, o);
  add_schedule(doubling, o);
  add_measure(doubling, o);
  add_out(doubling, o);
  doubling->add_option("--scales", o.scales, "Radii, comma separated (instead of a schedule)")->delimiter(',');
  doubling->add_option("--samples", o.samples, "Largest number of sampled centres")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const auto* command = app.get_subcommands().front();
    const Model model = load_model(o.model_path);
    const auto& name = command->get_name();
    if (name == "dim") {
      cmd_dim(o, model, out);
    } else if (name == "pack") {
      cmd_pack(o, model, out);
    } else if (name == "components") {
      cmd_components(o, model, out);
    } else if (name == "verify") {
      cmd_verify(o, model, out);
    } else if (name == "criterion") {
      cmd_criterion(o, model, out);
    } else if (name == "transport") {
      cmd_transport(o, model, out);
    } else if (name == "spectrum") {
      cmd_spectrum(o, model, out);
    } else {
      cmd_doubling(o, model, out);
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace minkowski
