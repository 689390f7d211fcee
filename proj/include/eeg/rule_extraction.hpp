#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eeg/core_model.hpp"
#include "eeg/corpus.hpp"
#include "eeg/resources.hpp"

namespace eeg {

/// Argument term vocabulary T and predicate set P of a corpus.
struct Vocabulary {
  std::vector<std::string> terms;                                ///< sorted, unique
  std::vector<std::pair<Predicate, std::uint64_t>> predicates;  ///< sorted, summed frequency

  bool has_term(std::string_view t) const;
  bool has_predicate(std::string_view surface) const;
  std::uint64_t predicate_frequency(std::string_view surface) const;
  const Predicate* predicate(std::string_view surface) const;
};

Vocabulary collect_vocabulary(const Corpus& corpus);

/// t_i => t_j with L^t = P(t_j | t_i).
struct ArgumentRule {
  std::string from;
  std::string to;
  double score = 0.0;

  friend bool operator==(const ArgumentRule&, const ArgumentRule&) = default;
};

/// For every term in T, its top-k concepts that are also in T with score > tau.
/// Identity rules are implicit. Output is sorted by (from, to).
std::vector<ArgumentRule> build_argument_rules(const TaxonomyStore& store,
                                               std::span<const std::string> terms, std::size_t k,
                                               double tau, unsigned workers = 1);

/// Lookup of TR by premise term.
class ArgumentRuleIndex {
 public:
  struct Target {
    std::string to;
    double score;
  };

  ArgumentRuleIndex() = default;
  explicit ArgumentRuleIndex(std::span<const ArgumentRule> rules);

  /// Targets of `from`, sorted by term.
  std::span<const Target> targets(std::string_view from) const;
  std::optional<double> score(std::string_view from, std::string_view to) const;
  std::size_t size() const noexcept { return size_; }

 private:
  std::unordered_map<std::string, std::vector<Target>> by_from_;
  std::size_t size_ = 0;
};

/// p_i => p_j; the score L^p is filled in by local inference.
struct PredicateRule {
  Predicate from;
  Predicate to;
  std::optional<double> score;

  friend bool operator==(const PredicateRule&, const PredicateRule&) = default;
};

/// Hierarchy edges whose endpoints are both in P with frequency >=
/// `min_pred_freq` and neither is a light verb. A verb-prep compound without
/// its own hierarchy entry inherits the generalizations of its (non-light)
/// base verb. Output is sorted by (from, to).
std::vector<PredicateRule> build_predicate_rules(const VerbHierarchyStore& hierarchy,
                                                 const Vocabulary& vocabulary,
                                                 std::uint64_t min_pred_freq);

/// Verbs usable as the premise of s-v-a => s-be-a: hierarchy edge to "be",
/// not light, frequency >= `min_pred_freq`. Sorted.
std::vector<std::string> linking_verbs(const VerbHierarchyStore& hierarchy,
                                       const Vocabulary& vocabulary, std::uint64_t min_pred_freq);

void write_argument_rules(const std::filesystem::path& path, std::span<const ArgumentRule> rules);
std::vector<ArgumentRule> read_argument_rules(const std::filesystem::path& path);
void write_predicate_rules(const std::filesystem::path& path, std::span<const PredicateRule> rules);
std::size_t count_rule_lines(const std::filesystem::path& path);

}  // namespace eeg
