#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minkowski/dimension.hpp"
#include "minkowski/ifs.hpp"

namespace minkowski {

/// Product measure on digit sequences from a probability weight on digits.
class BernoulliMeasure {
 public:
  /// Weights must lie in (0,1] and sum to 1 within 1e-10.
  explicit BernoulliMeasure(std::vector<double> weights, std::string context = {});

  static BernoulliMeasure uniform(std::size_t alphabet, std::string context = "uniform");

  std::size_t alphabet() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t digit) const { return weights_.at(digit); }
  const std::string& context() const { return context_; }

 private:
  std::vector<double> weights_;
  std::string context_;
};

/// Finite union of cylinders, no word a prefix of another.
class MeasurableSet {
 public:
  MeasurableSet() = default;
  /// Throws InvalidArgument if one word is a prefix of another.
  explicit MeasurableSet(std::vector<CylinderWord> words);

  /// Every word of the given rank.
  static MeasurableSet full(std::size_t alphabet, std::size_t rank);

  const std::vector<CylinderWord>& words() const { return words_; }
  bool empty() const { return words_.empty(); }
  std::size_t max_rank() const;

  /// Same set written with every word extended to `rank` (rank >= max_rank()).
  std::vector<CylinderWord> refine_to(std::size_t rank, std::size_t alphabet) const;

 private:
  std::vector<CylinderWord> words_;
};

/// Set function evaluated on cylinder unions.
using SetFunction = std::function<double(const MeasurableSet&)>;

/// p_a = prod_j (ratio_{a,j})^{beta_j}.
BernoulliMeasure bernoulli_weights(const SpongeSystem& sponge, const BetaSequence& betas);

/// Weights r_i^s for a self-similar system with similarity dimension s.
BernoulliMeasure natural_weights(const SimilarIFS& ifs);

double measure_of_word(const BernoulliMeasure& mu, const CylinderWord& word);

/// Measure of a word over the projected alphabet Phi_{1..j} (letters index
/// into project_ifs(sponge, j)).
double projected_measure(const SpongeSystem& sponge, const BetaSequence& betas, std::size_t j,
                         const CylinderWord& prefix_word);

double measure_of_set(const BernoulliMeasure& mu, const MeasurableSet& set);

/// Rank-preserving bijection on words of a fixed rank K, acting on infinite
/// sequences by rewriting the first K letters.
class CodeMap {
 public:
  /// `table[i]` is the index of the image of the word with lexicographic
  /// index i. Throws InvalidArgument unless it is a bijection.
  CodeMap(std::size_t alphabet, std::size_t rank, std::vector<std::uint64_t> table);

  static CodeMap identity(std::size_t alphabet, std::size_t rank);
  /// Letterwise digit permutation applied at every position.
  static CodeMap from_digit_permutation(std::span<const std::uint32_t> permutation, std::size_t rank);

  std::size_t alphabet() const { return alphabet_; }
  std::size_t rank() const { return rank_; }
  CylinderWord apply(const CylinderWord& word) const;
  /// Words u of rank K with apply(u) starting with `word` (rank(word) <= K).
  std::vector<CylinderWord> preimage(const CylinderWord& word) const;

 private:
  std::size_t alphabet_;
  std::size_t rank_;
  std::vector<std::uint64_t> table_;
  std::vector<std::uint64_t> inverse_;
};

/// mu(f^{-1}(set)).
double pushforward_measure(const CodeMap& code_map, const BernoulliMeasure& mu, const MeasurableSet& set);

/// Pushforward of a Bernoulli measure under a letterwise digit permutation;
/// the result is again Bernoulli with weight'[perm[a]] = weight[a].
BernoulliMeasure pushforward_bernoulli(std::span<const std::uint32_t> permutation, const BernoulliMeasure& mu);

/// (min, max) over the family of nu(S)/mu(S).
std::pair<double, double> equivalence_test(const SetFunction& mu, const SetFunction& nu,
                                           std::span<const MeasurableSet> family);
std::pair<double, double> equivalence_test(const BernoulliMeasure& mu, const BernoulliMeasure& nu,
                                           std::span<const MeasurableSet> family);

}  // namespace minkowski
