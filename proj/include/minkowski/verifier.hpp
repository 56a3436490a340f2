#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "minkowski/dimension.hpp"
#include "minkowski/measures.hpp"
#include "minkowski/model.hpp"

namespace minkowski {

/// Number of schedule steps the trend detector looks back over.
inline constexpr std::size_t kTrendWindow = 3;
/// Growth of log M_hat over the trend window below which a report is stable.
inline constexpr double kStableGrowth = 0.1;

struct ReportOptions {
  std::uint64_t budget = kDefaultBudget;
  /// Multiplies every component measure (for rescaling checks).
  double measure_scale = 1.0;
};

struct RatioRow {
  std::uint32_t component_id = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t depth = 0;
  std::size_t packing_count = 0;
  double measure = 0.0;
  /// packing_count * delta^beta / measure.
  double ratio = 0.0;
};

struct EpsilonSummary {
  double epsilon = 0.0;
  std::size_t component_depth = 0;
  std::size_t components = 0;
  double m_hat = 1.0;
};

struct RatioReport {
  double beta = 0.0;
  std::vector<RatioRow> rows;
  double m_hat = 1.0;
  std::vector<EpsilonSummary> per_epsilon;
  /// Schedule steps that produced rows, decreasing.
  std::vector<double> deltas;
  /// max(r, 1/r) over the rows at deltas[t].
  std::vector<double> step_m;
  /// M_hat over the rows with delta >= deltas[t].
  std::vector<double> running_m_hat;
  /// (delta, packing count of the whole space) at every step.
  std::vector<std::pair<double, double>> total_counts;
  /// log M_hat growth over the last kTrendWindow steps (0 with too few steps).
  double tail_growth = 0.0;
  bool divergent = false;
};

struct Trend {
  double growth = 0.0;
  /// True when enough steps exist to judge.
  bool conclusive = false;
  bool stable = false;
  bool divergent = false;
};

/// Judges a running M_hat series: stable when log M_hat grew by less than
/// kStableGrowth over the last kTrendWindow steps; divergent when each of
/// those steps increased it and the total growth is at least kStableGrowth.
Trend tail_trend(std::span<const double> running_m_hat);

/// delta_k = base^-k for k = k_min..k_max.
std::vector<double> geometric_schedule(double base, int k_min, int k_max);

/// 1/r_upper for sponges, 1/(max ratio) for similar systems, n for symbolic spaces.
double natural_base(const System& system);

/// Candidate measure when the model gives no weights: sponge weights from
/// the solved exponents, r_i^s for similar systems, uniform for symbolic spaces.
BernoulliMeasure default_measure(const System& system);

/// Sum of the solved exponents, the similarity dimension, or the symbolic
/// closed form.
double default_beta(const System& system);

/// N_delta(R) delta^beta / mu(R) for every epsilon-component R and every
/// delta in the schedule with delta <= epsilon/4.
RatioReport minkowski_ratio_report(const System& system, const BernoulliMeasure& mu, double beta,
                                   std::span<const double> epsilons, std::span<const double> deltas,
                                   const ReportOptions& options = {});

struct PartitionRank {
  std::size_t rank = 0;
  std::size_t cells = 0;
  double m_hat = 1.0;
  /// component_id is the lexicographic index of the cell; epsilon is 0.
  std::vector<RatioRow> rows;
};

struct PartitionReport {
  double beta = 0.0;
  std::vector<PartitionRank> ranks;
  double m_hat = 1.0;
};

/// Ratio rows with the components replaced by the rank-k cylinders, for each
/// k in `ranks` (strictly increasing). A delta is used at rank k when it is at
/// most a quarter of the smallest rank-k cell size.
PartitionReport partition_criterion_check(const System& system, const BernoulliMeasure& mu, double beta,
                                          std::span<const std::size_t> ranks, std::span<const double> deltas,
                                          const ReportOptions& options = {});

/// x -> scale * x + shift, coordinatewise.
struct AffineScaling {
  std::vector<double> scale;
  std::vector<double> shift;
};

/// Letterwise digit relabelling a -> permutation[a] of a symbolic space.
struct DigitPermutation {
  std::vector<std::uint32_t> permutation;
};

using TransportMap = std::variant<AffineScaling, DigitPermutation>;

/// Largest slope gap accepted between source and target dimension fits.
inline constexpr double kSlopeAgreement = 0.05;

struct TransportReport {
  RatioReport source;
  RatioReport target;
  DimensionFit source_fit;
  DimensionFit target_fit;
  /// Bi-Lipschitz constant of a scaling; 1 for an isometric permutation,
  /// 0 when a permutation is not an isometry.
  double lipschitz = 1.0;
  double m_hat_ratio = 1.0;
  bool slopes_agree = false;
};

/// Runs the ratio report on the image of the source under `map`, with the
/// pushed-forward measure and the source's beta. Scalings apply to sponges
/// and similar systems, permutations to symbolic spaces.
TransportReport bilipschitz_transport_check(const System& source, const BernoulliMeasure& mu, const TransportMap& map,
                                            double beta, std::span<const double> epsilons,
                                            std::span<const double> deltas, const ReportOptions& options = {});

struct SpectrumBin {
  std::int64_t index = 0;
  double lo = 0.0;
  std::uint64_t count = 0;
};

/// Coarse local-dimension histogram; a surrogate for the multifractal
/// spectrum, not the spectrum itself.
struct SpectrumEstimate {
  std::size_t rank = 0;
  /// Largest rank-k cylinder diameter.
  double delta = 0.0;
  double bin_width = 0.05;
  std::vector<SpectrumBin> histogram;
  std::uint64_t total = 0;

  std::size_t occupied_bins() const { return histogram.size(); }
};

/// Histogram of log mu(C) / log diam(C) over the rank-k cylinders.
SpectrumEstimate coarse_multifractal_spectrum(const System& system, const BernoulliMeasure& mu, std::size_t rank,
                                              std::uint64_t budget = kDefaultBudget, double bin_width = 0.05);

struct DoublingRow {
  double radius = 0.0;
  std::size_t centers = 0;
  double max_ratio = 0.0;
  /// Lexicographic index of the depth-K word attaining max_ratio.
  std::size_t worst_center = 0;
};

struct DoublingReport {
  std::size_t depth = 0;
  std::vector<DoublingRow> rows;
  double max_ratio = 0.0;
};

/// max mu(B(x,2r)) / mu(B(x,r)) over sampled cylinder representatives x,
/// with balls approximated by the depth-K cylinders within distance r of x.
DoublingReport doubling_measure_check(const System& system, const BernoulliMeasure& mu,
                                      std::span<const double> scales, std::size_t sample_budget,
                                      std::uint64_t budget = kDefaultBudget);

/// Shortest round-trippable decimal form, used by every CSV writer.
std::string format_real(double value);

void write_ratio_csv(std::ostream& out, const RatioReport& report);
void write_partition_csv(std::ostream& out, const PartitionReport& report);
void write_transport_csv(std::ostream& out, const TransportReport& report);
void write_spectrum_csv(std::ostream& out, const SpectrumEstimate& spectrum);
void write_doubling_csv(std::ostream& out, const DoublingReport& report);

}  // namespace minkowski
