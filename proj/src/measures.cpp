#include "minkowski/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "minkowski/errors.hpp"

namespace minkowski {

BernoulliMeasure::BernoulliMeasure(std::vector<double> weights, std::string context)
    : weights_(std::move(weights)), context_(std::move(context)) {
  if (weights_.empty()) throw InvalidArgument("bernoulli measure: weight list is empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0 && w <= 1.0)) {
      throw InvalidArgument(fmt::format("bernoulli measure: weight {} not in (0,1]", w));
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw InvalidArgument(fmt::format("bernoulli measure: weights sum to {:.17g}, not 1", sum));
  }
}

BernoulliMeasure BernoulliMeasure::uniform(std::size_t alphabet, std::string context) {
  if (alphabet == 0) throw InvalidArgument("bernoulli measure: empty alphabet");
  return BernoulliMeasure(std::vector<double>(alphabet, 1.0 / static_cast<double>(alphabet)), std::move(context));
}

MeasurableSet::MeasurableSet(std::vector<CylinderWord> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  // After sorting, a prefix relation can only occur between neighbours.
  for (std::size_t i = 1; i < words_.size(); ++i) {
    if (words_[i - 1].is_prefix_of(words_[i])) {
      throw InvalidArgument("measurable set: nested or repeated cylinder words");
    }
  }
}

MeasurableSet MeasurableSet::full(std::size_t alphabet, std::size_t rank) {
  const auto count = checked_word_count(alphabet, rank, kDefaultBudget, "measurable set");
  std::vector<CylinderWord> words;
  words.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) words.push_back(word_from_index(i, rank, alphabet));
  return MeasurableSet(std::move(words));
}

std::size_t MeasurableSet::max_rank() const {
  std::size_t rank = 0;
  for (const auto& word : words_) rank = std::max(rank, word.rank());
  return rank;
}

std::vector<CylinderWord> MeasurableSet::refine_to(std::size_t rank, std::size_t alphabet) const {
  std::vector<CylinderWord> out;
  for (const auto& word : words_) {
    if (word.rank() > rank) throw InvalidArgument("measurable set: cannot refine to a lower rank");
    const std::size_t extra = rank - word.rank();
    const auto count = checked_word_count(alphabet, extra, kDefaultBudget, "measurable set refine");
    for (std::uint64_t i = 0; i < count; ++i) {
      CylinderWord child = word;
      const auto tail = word_from_index(i, extra, alphabet);
      child.letters.insert(child.letters.end(), tail.letters.begin(), tail.letters.end());
      out.push_back(std::move(child));
    }
  }
  return out;
}

BernoulliMeasure bernoulli_weights(const SpongeSystem& sponge, const BetaSequence& betas) {
  if (betas.betas.size() != sponge.dimension()) {
    throw InvalidArgument(fmt::format("bernoulli_weights: {} exponents for a {}-dimensional sponge",
                                      betas.betas.size(), sponge.dimension()));
  }
  std::vector<double> weights;
  weights.reserve(sponge.size());
  for (const auto& digit : sponge.digits()) {
    double p = 1.0;
    for (std::size_t j = 0; j < sponge.dimension(); ++j) {
      p *= std::pow(digit.components[j].ratio.value(), betas.betas[j]);
    }
    weights.push_back(p);
  }
  return BernoulliMeasure(std::move(weights), "sponge");
}

BernoulliMeasure natural_weights(const SimilarIFS& ifs) {
  const auto ratios = ifs.ratios();
  const double s = solve_similarity_dimension(ratios);
  std::vector<double> weights;
  for (double r : ratios) weights.push_back(std::pow(r, s));
  return BernoulliMeasure(std::move(weights), "similar");
}

double measure_of_word(const BernoulliMeasure& mu, const CylinderWord& word) {
  validate_word(word, mu.alphabet(), "measure_of_word");
  double p = 1.0;
  for (auto letter : word.letters) p *= mu.weight(letter);
  return p;
}

double projected_measure(const SpongeSystem& sponge, const BetaSequence& betas, std::size_t j,
                         const CylinderWord& prefix_word) {
  if (j < 1 || j > sponge.dimension()) {
    throw InvalidArgument(fmt::format("projected_measure: j = {} outside 1..{}", j, sponge.dimension()));
  }
  if (betas.betas.size() < j) throw InvalidArgument("projected_measure: not enough exponents");
  const auto prefixes = project_ifs(sponge, j);
  validate_word(prefix_word, prefixes.size(), "projected_measure");
  std::vector<double> weights;
  for (const auto& prefix : prefixes) {
    double p = 1.0;
    for (std::size_t k = 0; k < j; ++k) p *= std::pow(prefix[k].ratio.value(), betas.betas[k]);
    weights.push_back(p);
  }
  double p = 1.0;
  for (auto letter : prefix_word.letters) p *= weights[letter];
  return p;
}

double measure_of_set(const BernoulliMeasure& mu, const MeasurableSet& set) {
  double sum = 0.0;
  for (const auto& word : set.words()) sum += measure_of_word(mu, word);
  return sum;
}

CodeMap::CodeMap(std::size_t alphabet, std::size_t rank, std::vector<std::uint64_t> table)
    : alphabet_(alphabet), rank_(rank), table_(std::move(table)) {
  const auto count = checked_word_count(alphabet_, rank_, kDefaultBudget, "code map");
  if (table_.size() != count) {
    throw InvalidArgument(fmt::format("code map: table has {} entries, expected {}", table_.size(), count));
  }
  inverse_.assign(count, count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto image = table_[i];
    if (image >= count || inverse_[image] != count) {
      throw InvalidArgument("code map: table is not a bijection on rank-K words");
    }
    inverse_[image] = i;
  }
}

CodeMap CodeMap::identity(std::size_t alphabet, std::size_t rank) {
  const auto count = checked_word_count(alphabet, rank, kDefaultBudget, "code map");
  std::vector<std::uint64_t> table(count);
  std::iota(table.begin(), table.end(), 0);
  return CodeMap(alphabet, rank, std::move(table));
}

CodeMap CodeMap::from_digit_permutation(std::span<const std::uint32_t> permutation, std::size_t rank) {
  const std::size_t alphabet = permutation.size();
  const auto count = checked_word_count(alphabet, rank, kDefaultBudget, "code map");
  std::vector<std::uint64_t> table(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto word = word_from_index(i, rank, alphabet);
    for (auto& letter : word.letters) {
      if (letter >= permutation.size() || permutation[letter] >= alphabet) {
        throw InvalidArgument("code map: permutation entry out of range");
      }
      letter = permutation[letter];
    }
    table[i] = word_index(word, alphabet);
  }
  return CodeMap(alphabet, rank, std::move(table));
}

CylinderWord CodeMap::apply(const CylinderWord& word) const {
  if (word.rank() != rank_) {
    throw InvalidArgument(fmt::format("code map: word of rank {} but the map acts on rank {}", word.rank(), rank_));
  }
  validate_word(word, alphabet_, "code map");
  return word_from_index(table_[word_index(word, alphabet_)], rank_, alphabet_);
}

std::vector<CylinderWord> CodeMap::preimage(const CylinderWord& word) const {
  if (word.rank() > rank_) {
    throw InvalidArgument(fmt::format("pushforward_measure: set rank {} exceeds the map rank {}", word.rank(), rank_));
  }
  validate_word(word, alphabet_, "pushforward_measure");
  std::vector<CylinderWord> out;
  for (const auto& image : MeasurableSet({word}).refine_to(rank_, alphabet_)) {
    out.push_back(word_from_index(inverse_[word_index(image, alphabet_)], rank_, alphabet_));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double pushforward_measure(const CodeMap& code_map, const BernoulliMeasure& mu, const MeasurableSet& set) {
  if (mu.alphabet() != code_map.alphabet()) throw InvalidArgument("pushforward_measure: alphabet mismatch");
  std::vector<CylinderWord> preimage;
  for (const auto& word : set.words()) {
    auto part = code_map.preimage(word);
    preimage.insert(preimage.end(), part.begin(), part.end());
  }
  return measure_of_set(mu, MeasurableSet(std::move(preimage)));
}

BernoulliMeasure pushforward_bernoulli(std::span<const std::uint32_t> permutation, const BernoulliMeasure& mu) {
  if (permutation.size() != mu.alphabet()) throw InvalidArgument("pushforward_bernoulli: alphabet mismatch");
  std::vector<double> weights(mu.alphabet(), -1.0);
  for (std::size_t a = 0; a < permutation.size(); ++a) {
    if (permutation[a] >= weights.size() || weights[permutation[a]] >= 0.0) {
      throw InvalidArgument("pushforward_bernoulli: not a permutation");
    }
    weights[permutation[a]] = mu.weight(a);
  }
  return BernoulliMeasure(std::move(weights), mu.context());
}

std::pair<double, double> equivalence_test(const SetFunction& mu, const SetFunction& nu,
                                           std::span<const MeasurableSet> family) {
  if (family.empty()) throw InvalidArgument("equivalence_test: family is empty");
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double a = mu(family[i]);
    const double b = nu(family[i]);
    if (!(a > 0.0) || !(b > 0.0)) {
      throw InvalidArgument(fmt::format("equivalence_test: family member {} has zero measure", i));
    }
    const double ratio = b / a;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

std::pair<double, double> equivalence_test(const BernoulliMeasure& mu, const BernoulliMeasure& nu,
                                           std::span<const MeasurableSet> family) {
  return equivalence_test([&](const MeasurableSet& s) { return measure_of_set(mu, s); },
                          [&](const MeasurableSet& s) { return measure_of_set(nu, s); }, family);
}

}  // namespace minkowski
