#include "minkowski/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "minkowski/errors.hpp"

namespace minkowski {

namespace {

constexpr std::size_t kMaxDepth = 200;

std::uint64_t power(std::size_t base, std::size_t exponent) {
  std::uint64_t value = 1;
  for (std::size_t i = 0; i < exponent; ++i) value *= base;
  return value;
}

// A system sampled at one depth at a time, with the operations the reports
// need. Point i of the current depth is the word with lexicographic index i.
class Instance {
 public:
  virtual ~Instance() = default;

  virtual std::size_t alphabet() const = 0;
  /// Smallest depth whose cylinders have diameter <= radius/4.
  virtual std::size_t depth_for(double radius) const = 0;
  /// Smallest side of a rank-k cell.
  virtual double min_cell_size(std::size_t rank) const = 0;
  virtual void prepare(std::size_t depth) = 0;
  virtual std::size_t depth() const = 0;
  virtual ComponentPartition components(double epsilon) const = 0;
  virtual std::size_t pack(std::span<const std::size_t> subset, double delta) const = 0;
  /// Distance from the representative of word i to the cylinder of word j.
  virtual double distance(std::size_t i, std::size_t j) const = 0;
};

class GeometricInstance final : public Instance {
 public:
  GeometricInstance(std::variant<SpongeSystem, SimilarIFS> system, AffineScaling scaling, std::uint64_t budget)
      : system_(std::move(system)), scaling_(std::move(scaling)), budget_(budget) {
    const std::size_t d = std::visit([](const auto& s) { return s.dimension(); }, system_);
    if (scaling_.scale.empty()) scaling_.scale.assign(d, 1.0);
    if (scaling_.shift.empty()) scaling_.shift.assign(d, 0.0);
    if (scaling_.scale.size() != d || scaling_.shift.size() != d) {
      throw InvalidArgument(fmt::format("transport: scaling needs {} coordinates", d));
    }
    for (double s : scaling_.scale) {
      if (!(std::abs(s) > 0.0) || !std::isfinite(s)) {
        throw InvalidArgument(fmt::format("transport: scale factor {} is not invertible", s));
      }
      stretch_ = std::max(stretch_, std::abs(s));
    }
  }

  std::size_t alphabet() const override {
    return std::visit([](const auto& s) { return s.size(); }, system_);
  }

  std::size_t depth_for(double radius) const override {
    if (!(radius > 0.0)) throw InvalidArgument(fmt::format("depth rule: radius {} not positive", radius));
    for (std::size_t k = 0; k < kMaxDepth; ++k) {
      if (stretch_ * diameter(k) <= radius / 4.0) return k;
    }
    throw InvalidArgument(fmt::format("depth rule: radius {} too small", radius));
  }

  double min_cell_size(std::size_t rank) const override {
    const double r = std::visit(
        [](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SpongeSystem>) {
            return s.r_star();
          } else {
            return s.min_ratio();
          }
        },
        system_);
    double min_scale = scaling_.scale.empty() ? 1.0 : std::abs(scaling_.scale.front());
    for (double s : scaling_.scale) min_scale = std::min(min_scale, std::abs(s));
    return min_scale * std::pow(r, static_cast<double>(rank));
  }

  void prepare(std::size_t depth) override {
    if (cloud_.depth == depth && cloud_.size() > 0) return;
    cloud_ = std::visit([&](const auto& s) { return sample_attractor(s, depth, budget_); }, system_);
    const std::size_t d = cloud_.dim;
    for (std::size_t i = 0; i < cloud_.coords.size(); ++i) {
      const std::size_t axis = i % d;
      cloud_.coords[i] = scaling_.shift[axis] + scaling_.scale[axis] * cloud_.coords[i];
      cloud_.half_extents[i] = std::abs(scaling_.scale[axis]) * cloud_.half_extents[i];
    }
  }

  std::size_t depth() const override { return cloud_.depth; }

  ComponentPartition components(double epsilon) const override {
    return epsilon_components(cloud_, epsilon, Metric::Euclidean);
  }

  std::size_t pack(std::span<const std::size_t> subset, double delta) const override {
    return greedy_packing(cloud_, subset, delta, Metric::Euclidean).count;
  }

  double distance(std::size_t i, std::size_t j) const override {
    const std::size_t d = cloud_.dim;
    return box_distance(cloud_.point(i), {}, cloud_.point(j),
                        std::span<const double>(cloud_.half_extents.data() + j * d, d), Metric::Euclidean);
  }

 private:
  double diameter(std::size_t rank) const {
    return std::visit(
        [&](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SpongeSystem>) {
            return s.max_pillar_diameter(rank);
          } else {
            return s.max_cylinder_diameter(rank);
          }
        },
        system_);
  }

  std::variant<SpongeSystem, SimilarIFS> system_;
  AffineScaling scaling_;
  std::uint64_t budget_;
  double stretch_ = 0.0;
  PointCloud cloud_;
};

class SymbolicInstance final : public Instance {
 public:
  SymbolicInstance(SymbolicSystem system, std::uint64_t budget) : system_(std::move(system)), budget_(budget) {}

  std::size_t alphabet() const override { return system_.size(); }
  std::size_t depth_for(double radius) const override { return depth_for_delta(system_, radius); }
  double min_cell_size(std::size_t rank) const override {
    return std::pow(static_cast<double>(system_.n()), -static_cast<double>(rank));
  }

  void prepare(std::size_t depth) override {
    if (cloud_ && cloud_->depth == depth) return;
    cloud_ = symbolic_point_cloud(system_, depth, budget_);
  }

  std::size_t depth() const override { return cloud_ ? cloud_->depth : 0; }

  ComponentPartition components(double epsilon) const override { return epsilon_components(*cloud_, epsilon); }

  std::size_t pack(std::span<const std::size_t> subset, double delta) const override {
    return greedy_packing(*cloud_, subset, delta).count;
  }

  double distance(std::size_t i, std::size_t j) const override {
    return cylinder_distance(system_, cloud_->point(i), cloud_->point(j));
  }

 private:
  SymbolicSystem system_;
  std::uint64_t budget_;
  std::optional<SymbolicCloud> cloud_;
};

std::unique_ptr<Instance> make_instance(const System& system, const AffineScaling& scaling, std::uint64_t budget) {
  return std::visit(
      [&](const auto& s) -> std::unique_ptr<Instance> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SymbolicSystem>) {
          return std::make_unique<SymbolicInstance>(s, budget);
        } else {
          return std::make_unique<GeometricInstance>(s, scaling, budget);
        }
      },
      system);
}

std::size_t alphabet_of(const System& system) {
  return std::visit([](const auto& s) { return s.size(); }, system);
}

void check_measure(const System& system, const BernoulliMeasure& mu, const char* operation) {
  if (mu.alphabet() != alphabet_of(system)) {
    throw InvalidArgument(fmt::format("{}: measure has {} weights for {} digits", operation, mu.alphabet(),
                                      alphabet_of(system)));
  }
}

std::vector<double> checked_schedule(std::span<const double> values, const char* operation, const char* what) {
  if (values.empty()) throw InvalidArgument(fmt::format("{}: {} list is empty", operation, what));
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(fmt::format("{}: {} {} not positive", operation, what, v));
  }
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double spread(double ratio) { return std::max(ratio, 1.0 / ratio); }

// Words of depth `depth` whose rank-`coarse` prefix is in `prefixes`.
std::vector<std::size_t> expand(std::span<const std::size_t> prefixes, std::size_t alphabet, std::size_t coarse,
                                std::size_t depth) {
  const auto block = power(alphabet, depth - coarse);
  std::vector<std::size_t> out;
  out.reserve(prefixes.size() * block);
  for (auto p : prefixes) {
    for (std::uint64_t k = 0; k < block; ++k) out.push_back(p * block + k);
  }
  return out;
}

RatioRow make_row(std::uint32_t id, double epsilon, double delta, std::size_t depth, std::size_t count,
                  double measure, double beta) {
  return {id, epsilon, delta, depth, count, measure, static_cast<double>(count) * std::pow(delta, beta) / measure};
}

struct EpsilonWork {
  double epsilon;
  std::size_t depth;
  std::vector<std::vector<std::size_t>> members;
  std::vector<double> measures;
};

RatioReport run_report(Instance& instance, const BernoulliMeasure& mu, double beta, std::span<const double> epsilons,
                       std::span<const double> deltas, const ReportOptions& options) {
  constexpr const char* kOp = "minkowski_ratio_report";
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument(fmt::format("{}: beta {} invalid", kOp, beta));
  if (!(options.measure_scale > 0.0)) {
    throw InvalidArgument(fmt::format("{}: measure scale {} not positive", kOp, options.measure_scale));
  }
  const auto eps = checked_schedule(epsilons, kOp, "epsilon");
  const auto schedule = checked_schedule(deltas, kOp, "delta");

  RatioReport report;
  report.beta = beta;
  std::vector<EpsilonWork> work;
  for (double epsilon : eps) {
    EpsilonWork w{epsilon, instance.depth_for(epsilon), {}, {}};
    instance.prepare(w.depth);
    const auto partition = instance.components(epsilon);
    w.members = partition.member_lists();
    for (std::size_t c = 0; c < partition.classes.size(); ++c) {
      const double m = options.measure_scale * measure_of_set(mu, partition.classes[c]);
      if (!(m > 0.0)) {
        throw ValidationError(fmt::format("{}: component {} at epsilon {} has zero measure", kOp, c, epsilon));
      }
      w.measures.push_back(m);
    }
    report.per_epsilon.push_back({epsilon, w.depth, partition.size(), 1.0});
    work.push_back(std::move(w));
  }

  for (double delta : schedule) {
    std::vector<std::size_t> active;
    std::size_t depth = instance.depth_for(delta);
    for (std::size_t e = 0; e < work.size(); ++e) {
      if (delta <= work[e].epsilon / 4.0) {
        active.push_back(e);
        depth = std::max(depth, work[e].depth);
      }
    }
    if (active.empty()) continue;
    instance.prepare(depth);
    const std::size_t n = instance.alphabet();

    double step = 1.0;
    for (auto e : active) {
      auto& w = work[e];
      for (std::size_t c = 0; c < w.members.size(); ++c) {
        const auto subset = expand(w.members[c], n, w.depth, depth);
        const auto row = make_row(static_cast<std::uint32_t>(c), w.epsilon, delta, depth, instance.pack(subset, delta),
                                  w.measures[c], beta);
        step = std::max(step, spread(row.ratio));
        report.per_epsilon[e].m_hat = std::max(report.per_epsilon[e].m_hat, spread(row.ratio));
        report.rows.push_back(row);
      }
    }
    std::vector<std::size_t> all(power(n, depth));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    report.total_counts.emplace_back(delta, static_cast<double>(instance.pack(all, delta)));

    report.deltas.push_back(delta);
    report.step_m.push_back(step);
    report.m_hat = std::max(report.m_hat, step);
    report.running_m_hat.push_back(report.m_hat);
  }
  if (report.rows.empty()) {
    throw InvalidArgument(fmt::format("{}: no delta in the schedule satisfies delta <= epsilon/4", kOp));
  }
  const auto trend = tail_trend(report.running_m_hat);
  report.tail_growth = trend.growth;
  report.divergent = trend.divergent;
  return report;
}

}  // namespace

Trend tail_trend(std::span<const double> running_m_hat) {
  Trend trend;
  if (running_m_hat.size() < kTrendWindow + 1) return trend;
  const std::size_t last = running_m_hat.size() - 1;
  trend.conclusive = true;
  trend.growth = std::log(running_m_hat[last]) - std::log(running_m_hat[last - kTrendWindow]);
  trend.stable = trend.growth < kStableGrowth;
  bool rising = true;
  for (std::size_t t = last - kTrendWindow + 1; t <= last; ++t) rising = rising && running_m_hat[t] > running_m_hat[t - 1];
  trend.divergent = rising && !trend.stable;
  return trend;
}

std::vector<double> geometric_schedule(double base, int k_min, int k_max) {
  if (!(base > 1.0)) throw InvalidArgument(fmt::format("geometric_schedule: base {} must exceed 1", base));
  if (k_min > k_max) throw InvalidArgument(fmt::format("geometric_schedule: empty range {}..{}", k_min, k_max));
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(std::pow(base, -static_cast<double>(k)));
  return out;
}

double natural_base(const System& system) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SpongeSystem>) {
          return 1.0 / s.r_upper();
        } else if constexpr (std::is_same_v<T, SimilarIFS>) {
          return 1.0 / s.max_ratio();
        } else {
          return static_cast<double>(s.n());
        }
      },
      system);
}

BernoulliMeasure default_measure(const System& system) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SpongeSystem>) {
          return bernoulli_weights(s, solve_beta_sequence(s));
        } else if constexpr (std::is_same_v<T, SimilarIFS>) {
          return natural_weights(s);
        } else {
          return BernoulliMeasure::uniform(s.size());
        }
      },
      system);
}

double default_beta(const System& system) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SpongeSystem>) {
          return solve_beta_sequence(s).box_dimension();
        } else if constexpr (std::is_same_v<T, SimilarIFS>) {
          return solve_similarity_dimension(s.ratios());
        } else {
          return symbolic_beta(s.n(), s.m(), s.digits());
        }
      },
      system);
}

RatioReport minkowski_ratio_report(const System& system, const BernoulliMeasure& mu, double beta,
                                   std::span<const double> epsilons, std::span<const double> deltas,
                                   const ReportOptions& options) {
  check_measure(system, mu, "minkowski_ratio_report");
  auto instance = make_instance(system, {}, options.budget);
  return run_report(*instance, mu, beta, epsilons, deltas, options);
}

PartitionReport partition_criterion_check(const System& system, const BernoulliMeasure& mu, double beta,
                                          std::span<const std::size_t> ranks, std::span<const double> deltas,
                                          const ReportOptions& options) {
  constexpr const char* kOp = "partition_criterion_check";
  check_measure(system, mu, kOp);
  if (ranks.empty()) throw InvalidArgument(fmt::format("{}: rank list is empty", kOp));
  for (std::size_t i = 1; i < ranks.size(); ++i) {
    if (ranks[i] <= ranks[i - 1]) {
      throw InvalidArgument(fmt::format("{}: ranks must increase so that cell sizes decrease (got {} after {})", kOp,
                                        ranks[i], ranks[i - 1]));
    }
  }
  const auto schedule = checked_schedule(deltas, kOp, "delta");
  auto instance = make_instance(system, {}, options.budget);
  const std::size_t n = instance->alphabet();

  PartitionReport report;
  report.beta = beta;
  for (auto rank : ranks) {
    const auto cells = checked_word_count(n, rank, options.budget, kOp);
    PartitionRank group;
    group.rank = rank;
    group.cells = cells;
    const double limit = instance->min_cell_size(rank) / 4.0;
    for (double delta : schedule) {
      if (delta > limit) continue;
      const std::size_t depth = std::max(instance->depth_for(delta), rank);
      instance->prepare(depth);
      for (std::uint64_t cell = 0; cell < cells; ++cell) {
        const std::size_t prefix[] = {static_cast<std::size_t>(cell)};
        const auto subset = expand(prefix, n, rank, depth);
        const double m = options.measure_scale * measure_of_word(mu, word_from_index(cell, rank, n));
        const auto row =
            make_row(static_cast<std::uint32_t>(cell), 0.0, delta, depth, instance->pack(subset, delta), m, beta);
        group.m_hat = std::max(group.m_hat, spread(row.ratio));
        group.rows.push_back(row);
      }
    }
    if (group.rows.empty()) {
      throw InvalidArgument(
          fmt::format("{}: no delta in the schedule is below a quarter of the rank-{} cell size {}", kOp, rank,
                      instance->min_cell_size(rank)));
    }
    report.m_hat = std::max(report.m_hat, group.m_hat);
    report.ranks.push_back(std::move(group));
  }
  return report;
}

TransportReport bilipschitz_transport_check(const System& source, const BernoulliMeasure& mu, const TransportMap& map,
                                            double beta, std::span<const double> epsilons,
                                            std::span<const double> deltas, const ReportOptions& options) {
  constexpr const char* kOp = "bilipschitz_transport_check";
  check_measure(source, mu, kOp);
  const bool symbolic = std::holds_alternative<SymbolicSystem>(source);
  TransportReport report;
  report.source = minkowski_ratio_report(source, mu, beta, epsilons, deltas, options);

  if (const auto* scaling = std::get_if<AffineScaling>(&map)) {
    if (symbolic) throw InvalidArgument(fmt::format("{}: unsupported map class (scaling of a symbolic space)", kOp));
    auto target = make_instance(source, *scaling, options.budget);
    // Cylinders keep their words, so the pushforward measure is mu itself.
    report.target = run_report(*target, mu, beta, epsilons, deltas, options);
    report.lipschitz = 1.0;
    for (double s : scaling->scale) report.lipschitz = std::max({report.lipschitz, std::abs(s), 1.0 / std::abs(s)});
  } else {
    const auto& perm = std::get<DigitPermutation>(map).permutation;
    if (!symbolic) {
      throw InvalidArgument(fmt::format("{}: unsupported map class (digit permutation of a geometric system)", kOp));
    }
    const auto& system = std::get<SymbolicSystem>(source);
    const auto nu = pushforward_bernoulli(perm, mu);
    report.target = minkowski_ratio_report(source, nu, beta, epsilons, deltas, options);
    // Letterwise relabelling is a lambda-isometry iff it preserves equality
    // of first and of second coordinates.
    bool isometry = true;
    for (std::uint32_t a = 0; a < perm.size(); ++a) {
      for (std::uint32_t b = 0; b < perm.size(); ++b) {
        isometry = isometry && (system.x_of(a) == system.x_of(b)) == (system.x_of(perm[a]) == system.x_of(perm[b])) &&
                   (system.y_of(a) == system.y_of(b)) == (system.y_of(perm[a]) == system.y_of(perm[b]));
      }
    }
    report.lipschitz = isometry ? 1.0 : 0.0;
  }
  report.source_fit = fit_box_dimension(report.source.total_counts);
  report.target_fit = fit_box_dimension(report.target.total_counts);
  report.m_hat_ratio = report.target.m_hat / report.source.m_hat;
  report.slopes_agree = std::abs(report.source_fit.slope - report.target_fit.slope) <= kSlopeAgreement;
  return report;
}

SpectrumEstimate coarse_multifractal_spectrum(const System& system, const BernoulliMeasure& mu, std::size_t rank,
                                              std::uint64_t budget, double bin_width) {
  constexpr const char* kOp = "coarse_multifractal_spectrum";
  check_measure(system, mu, kOp);
  if (rank == 0) throw InvalidArgument(fmt::format("{}: rank must be at least 1", kOp));
  if (!(bin_width > 0.0)) throw InvalidArgument(fmt::format("{}: bin width {} not positive", kOp, bin_width));
  const std::size_t n = alphabet_of(system);
  const auto total = checked_word_count(n, rank, budget, kOp);

  auto diameter = [&](const CylinderWord& word) {
    return std::visit(
        [&](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SpongeSystem>) {
            return pillar(s, word).box.diameter();
          } else if constexpr (std::is_same_v<T, SimilarIFS>) {
            double r = std::sqrt(static_cast<double>(s.dimension()));
            for (auto letter : word.letters) r *= s.maps()[letter].ratio;
            return r;
          } else {
            return s.cylinder_diameter(word.rank());
          }
        },
        system);
  };

  SpectrumEstimate out;
  out.rank = rank;
  out.bin_width = bin_width;
  out.total = total;
  std::map<std::int64_t, std::uint64_t> bins;
  for (std::uint64_t i = 0; i < total; ++i) {
    const auto word = word_from_index(i, rank, n);
    const double diam = diameter(word);
    if (!(diam > 0.0 && diam < 1.0)) {
      throw InvalidArgument(fmt::format("{}: cylinder diameter {} outside (0,1) at rank {}", kOp, diam, rank));
    }
    out.delta = std::max(out.delta, diam);
    const double alpha = std::log(measure_of_word(mu, word)) / std::log(diam);
    // The small offset keeps values that sit on a bin edge up to round-off
    // in the upper bin.
    ++bins[static_cast<std::int64_t>(std::floor(alpha / bin_width + 1e-9))];
  }
  for (const auto& [index, count] : bins) out.histogram.push_back({index, static_cast<double>(index) * bin_width, count});
  return out;
}

DoublingReport doubling_measure_check(const System& system, const BernoulliMeasure& mu,
                                      std::span<const double> scales, std::size_t sample_budget,
                                      std::uint64_t budget) {
  constexpr const char* kOp = "doubling_measure_check";
  check_measure(system, mu, kOp);
  const auto radii = checked_schedule(scales, kOp, "scale");
  if (sample_budget == 0) throw InvalidArgument(fmt::format("{}: sample budget must be positive", kOp));
  auto instance = make_instance(system, {}, budget);
  const std::size_t n = instance->alphabet();
  const std::size_t depth = instance->depth_for(radii.back());
  instance->prepare(depth);
  const auto words = checked_word_count(n, depth, budget, kOp);

  std::vector<double> weights(words);
  for (std::uint64_t j = 0; j < words; ++j) weights[j] = measure_of_word(mu, word_from_index(j, depth, n));
  const std::uint64_t stride = (words + sample_budget - 1) / sample_budget;

  DoublingReport report;
  report.depth = depth;
  for (double r : radii) report.rows.push_back({r, 0, 0.0, 0});
  std::vector<double> dist(words);
  for (std::uint64_t i = 0; i < words; i += stride) {
    for (std::uint64_t j = 0; j < words; ++j) dist[j] = instance->distance(i, j);
    for (auto& row : report.rows) {
      double inner = 0.0, outer = 0.0;
      for (std::uint64_t j = 0; j < words; ++j) {
        if (dist[j] <= row.radius) inner += weights[j];
        if (dist[j] <= 2.0 * row.radius) outer += weights[j];
      }
      const double ratio = outer / inner;
      ++row.centers;
      if (ratio > row.max_ratio) {
        row.max_ratio = ratio;
        row.worst_center = i;
      }
    }
  }
  for (const auto& row : report.rows) report.max_ratio = std::max(report.max_ratio, row.max_ratio);
  return report;
}

std::string format_real(double value) { return fmt::format("{}", value); }

void write_ratio_csv(std::ostream& out, const RatioReport& report) {
  out << "component_id,epsilon,delta,packing_count,measure,ratio\n";
  for (const auto& row : report.rows) {
    out << row.component_id << ',' << format_real(row.epsilon) << ',' << format_real(row.delta) << ','
        << row.packing_count << ',' << format_real(row.measure) << ',' << format_real(row.ratio) << '\n';
  }
  out << "# beta: " << format_real(report.beta) << '\n';
  out << "# M_hat: " << format_real(report.m_hat) << '\n';
  for (const auto& e : report.per_epsilon) {
    out << "# M_hat[epsilon=" << format_real(e.epsilon) << "]: " << format_real(e.m_hat) << " (" << e.components
        << " components at depth " << e.component_depth << ")\n";
  }
  out << "# running_M_hat:";
  for (std::size_t t = 0; t < report.deltas.size(); ++t) {
    out << ' ' << format_real(report.deltas[t]) << '=' << format_real(report.running_m_hat[t]);
  }
  out << '\n';
  out << "# tail_growth: " << format_real(report.tail_growth) << '\n';
  out << "# divergent_flag: " << (report.divergent ? "true" : "false") << '\n';
}

void write_partition_csv(std::ostream& out, const PartitionReport& report) {
  out << "rank,cell_id,delta,packing_count,measure,ratio\n";
  for (const auto& group : report.ranks) {
    for (const auto& row : group.rows) {
      out << group.rank << ',' << row.component_id << ',' << format_real(row.delta) << ',' << row.packing_count << ','
          << format_real(row.measure) << ',' << format_real(row.ratio) << '\n';
    }
  }
  out << "# beta: " << format_real(report.beta) << '\n';
  for (const auto& group : report.ranks) {
    out << "# M_hat[rank=" << group.rank << "]: " << format_real(group.m_hat) << '\n';
  }
  out << "# M_hat: " << format_real(report.m_hat) << '\n';
}

void write_transport_csv(std::ostream& out, const TransportReport& report) {
  out << "side,component_id,epsilon,delta,packing_count,measure,ratio\n";
  for (const auto* side : {&report.source, &report.target}) {
    const char* name = side == &report.source ? "source" : "target";
    for (const auto& row : side->rows) {
      out << name << ',' << row.component_id << ',' << format_real(row.epsilon) << ',' << format_real(row.delta) << ','
          << row.packing_count << ',' << format_real(row.measure) << ',' << format_real(row.ratio) << '\n';
    }
  }
  out << "# beta: " << format_real(report.source.beta) << '\n';
  out << "# source_M_hat: " << format_real(report.source.m_hat) << '\n';
  out << "# target_M_hat: " << format_real(report.target.m_hat) << '\n';
  out << "# M_hat_ratio: " << format_real(report.m_hat_ratio) << '\n';
  out << "# lipschitz: " << format_real(report.lipschitz) << '\n';
  out << "# source_slope: " << format_real(report.source_fit.slope) << '\n';
  out << "# target_slope: " << format_real(report.target_fit.slope) << '\n';
  out << "# slopes_agree: " << (report.slopes_agree ? "true" : "false") << '\n';
}

void write_spectrum_csv(std::ostream& out, const SpectrumEstimate& spectrum) {
  out << "alpha_lo,alpha_hi,count\n";
  for (const auto& bin : spectrum.histogram) {
    out << format_real(bin.lo) << ',' << format_real(bin.lo + spectrum.bin_width) << ',' << bin.count << '\n';
  }
  out << "# rank: " << spectrum.rank << '\n';
  out << "# delta: " << format_real(spectrum.delta) << '\n';
  out << "# total: " << spectrum.total << '\n';
  out << "# occupied_bins: " << spectrum.occupied_bins() << '\n';
}

void write_doubling_csv(std::ostream& out, const DoublingReport& report) {
  out << "radius,centers,max_ratio,worst_center\n";
  for (const auto& row : report.rows) {
    out << format_real(row.radius) << ',' << row.centers << ',' << format_real(row.max_ratio) << ','
        << row.worst_center << '\n';
  }
  out << "# depth: " << report.depth << '\n';
  out << "# max_ratio: " << format_real(report.max_ratio) << '\n';
}

}  // namespace minkowski
