#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace eeg {

struct ConceptEntry {
  std::string concept_name;
  std::uint64_t frequency = 0;
};

/// Is-a taxonomy of (concept, instance, frequency) triples, frozen after load.
class TaxonomyStore {
 public:
  TaxonomyStore() = default;

  /// Adds `frequency` to the (concept, instance) entry. Frequency must be > 0.
  void add(std::string_view concept_name, std::string_view instance, std::uint64_t frequency);

  /// Concepts of `instance`, sorted by concept name. Empty when unknown.
  std::span<const ConceptEntry> concepts(std::string_view instance) const;
  std::uint64_t total(std::string_view instance) const;
  /// Frequency of `concept_name` for `instance`, 0 when absent.
  std::uint64_t frequency(std::string_view instance, std::string_view concept_name) const;

  std::size_t instance_count() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  struct Instance {
    std::vector<ConceptEntry> entries;
    std::uint64_t total = 0;
  };
  std::unordered_map<std::string, Instance> entries_;
};

/// Reads concept<TAB>instance<TAB>frequency lines; duplicates are summed.
/// Throws LoadError with the line number on malformed or non-positive input.
TaxonomyStore load_taxonomy(const std::filesystem::path& path);

/// Top-k concepts of `term` by P(concept | term) descending, ties by concept
/// name ascending. Unknown terms yield an empty list.
std::vector<std::pair<std::string, double>> conceptualize(const TaxonomyStore& store,
                                                          std::string_view term, std::size_t k);

/// L^t: 1 for identical terms, else P(t_j as concept | t_i), else 0.
double term_entailment_prob(const TaxonomyStore& store, std::string_view t_i, std::string_view t_j);

// ---------------------------------------------------------------------------

enum class VerbRelation : std::uint8_t { Entail, Hypernym };

/// Verb entailment / hypernymy edges (specific -> general) plus light verbs.
class VerbHierarchyStore {
 public:
  VerbHierarchyStore() = default;

  /// Throws LoadError on a self-loop.
  void add_edge(std::string_view specific, std::string_view general, VerbRelation relation);
  void add_light_verb(std::string_view lemma);

  /// General verbs reachable by one edge, sorted.
  std::span<const std::string> generalizations(std::string_view specific) const;
  bool has_edge(std::string_view specific, std::string_view general) const;
  bool is_light(std::string_view lemma) const;
  std::optional<VerbRelation> relation(std::string_view specific, std::string_view general) const;

  const std::set<std::string>& light_verbs() const noexcept { return light_verbs_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return edge_count_ == 0; }

 private:
  struct Target {
    std::vector<std::string> general;
    std::vector<VerbRelation> relation;
  };
  std::unordered_map<std::string, Target> edges_;
  std::set<std::string> light_verbs_;
  std::size_t edge_count_ = 0;
};

/// do, give, have, make, take.
std::span<const std::string_view> default_light_verbs();

/// Reads specific<TAB>general<TAB>{entail|hypernym} lines. When
/// `light_verb_path` is empty the default light-verb list is installed,
/// otherwise the file (one lemma per line) replaces it.
VerbHierarchyStore load_verb_hierarchy(const std::filesystem::path& path,
                                       const std::filesystem::path& light_verb_path = {});

}  // namespace eeg
