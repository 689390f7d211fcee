#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eeg/core_model.hpp"
#include "eeg/corpus.hpp"
#include "eeg/local_inference.hpp"
#include "eeg/rule_extraction.hpp"

namespace eeg {

/// PR arranged as a DAG oriented specific -> general.
struct PredicateForest {
  struct Edge {
    std::string general;
    double score = 0.0;
  };

  std::vector<std::string> nodes;                    ///< sorted
  std::map<std::string, std::vector<Edge>> out;      ///< specific -> generals, sorted
  std::vector<std::pair<std::string, std::string>> removed;  ///< dropped to break cycles
  std::vector<std::string> roots;                    ///< nodes without a generalization
  std::size_t tree_count = 0;                        ///< weakly connected components

  std::size_t edge_count() const;
  bool has_edge(std::string_view specific, std::string_view general) const;
  std::span<const Edge> generals(std::string_view specific) const;
};

/// Builds the forest from scored rules, removing the lowest-scored edge of
/// each cycle (ties: lexicographically smallest edge) until acyclic.
PredicateForest build_forest(std::span<const PredicateRule> scored_rules);

/// p_1 => p_2 => ... => p_l, specific first.
struct PredicatePath {
  std::vector<std::string> predicates;

  friend auto operator<=>(const PredicatePath&, const PredicatePath&) = default;
  friend bool operator==(const PredicatePath&, const PredicatePath&) = default;
};

/// change, act, move.
std::vector<std::string> default_general_roots();

/// All maximal leaf-to-root chains, with edges touching a listed general
/// root removed; the remaining segments of length >= 2, sorted and unique.
std::vector<PredicatePath> extract_paths(const PredicateForest& forest,
                                         std::span<const std::string> general_roots);

struct BipartiteEdge {
  ScoredEdge edge;
  bool identical_args = false;
};

/// G(p_i, p_next): left = eventualities of p_i, right = of p_next, edges =
/// pairs with same or TR-entailed aligned arguments, weighted by L^e.
struct BipartiteCandidate {
  std::vector<EventualityId> left;
  std::vector<EventualityId> right;
  std::vector<BipartiteEdge> candidates;  ///< sorted by (from, to)
  std::uint64_t checks = 0;
};

BipartiteCandidate build_bipartite(const Corpus& corpus, std::string_view p_i,
                                   std::string_view p_next, const ArgumentRuleIndex& rules,
                                   double pred_score);

/// a_l == a_r, or (L^a > tau_a and L^e > tau_e).
bool accepts(const BipartiteEdge& candidate, double tau_a, double tau_e);

/// Scores of PR edges keyed by (from, to).
using PredicateScores = std::map<std::pair<std::string, std::string>, double, std::less<>>;
PredicateScores predicate_scores(std::span<const PredicateRule> scored_rules);

struct Algorithm1Result {
  std::vector<ScoredEdge> edges;  ///< provenance global, sorted by (from, to)
  std::vector<std::vector<EventualityId>> chains;
  std::uint64_t candidate_checks = 0;
};

/// Generalizes a predicate path to eventuality edges: for each consecutive
/// pair, accepted bipartite candidates enter the edge set; maximal chains are
/// then read off the edge set when `collect_chains` is set.
Algorithm1Result algorithm1(const PredicatePath& path, const ArgumentRuleIndex& rules,
                            const PredicateScores& scores, double tau_a, double tau_e,
                            const Corpus& corpus, bool collect_chains = true);

/// Maximal chains by forward walks from in-degree-0 nodes.
std::vector<std::vector<EventualityId>> chains_from_edges(std::span<const ScoredEdge> edges);
/// Number of maximal chains, without materializing them.
std::uint64_t count_chains(std::span<const ScoredEdge> edges);

/// Same-predicate edges (p, a') => (p, a) into every chain node, where a'
/// generalizes to a through TR and L^e > tau_e. Provenance local.
std::vector<ScoredEdge> expand_with_argument_rules(std::span<const EventualityId> chain_nodes,
                                                   const Corpus& corpus,
                                                   const ArgumentRuleIndex& rules, double tau_e);

struct GlobalParams {
  double tau_a = 0.3;
  double tau_e = 0.2;
  unsigned workers = 1;
};

struct GlobalResult {
  std::vector<ScoredEdge> path_edges;       ///< union of algorithm1 edge sets
  std::vector<ScoredEdge> expansion_edges;  ///< argument-rule expansion
  std::uint64_t candidate_checks = 0;
  std::uint64_t chain_count = 0;
};

/// Runs algorithm1 over every path (in parallel) and expands the chain nodes.
/// Output does not depend on worker count.
GlobalResult infer_global_edges(const Corpus& corpus, const ArgumentRuleIndex& rules,
                                const PredicateScores& scores,
                                std::span<const PredicatePath> paths, const GlobalParams& params);

/// Sorts by (from, to) and keeps one edge per pair: the highest L^e, earlier
/// position winning ties.
void dedupe_edges(std::vector<ScoredEdge>& edges);

}  // namespace eeg
