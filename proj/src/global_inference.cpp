#include "eeg/global_inference.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "eeg/error.hpp"
#include "eeg/parallel.hpp"

namespace eeg {

// ---------------------------------------------------------------------------
// Forest
// ---------------------------------------------------------------------------

std::size_t PredicateForest::edge_count() const {
  std::size_t n = 0;
  for (const auto& [from, targets] : out) n += targets.size();
  return n;
}

std::span<const PredicateForest::Edge> PredicateForest::generals(std::string_view specific) const {
  auto it = out.find(std::string(specific));
  if (it == out.end()) return {};
  return it->second;
}

bool PredicateForest::has_edge(std::string_view specific, std::string_view general) const {
  for (const auto& e : generals(specific)) {
    if (e.general == general) return true;
  }
  return false;
}

namespace {

struct IndexedEdge {
  std::size_t to;
  double score;
  bool alive = true;
};

/// Returns the edges (from, slot) of one cycle, or empty when acyclic.
std::vector<std::pair<std::size_t, std::size_t>> find_cycle(
    const std::vector<std::vector<IndexedEdge>>& adj) {
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> color(adj.size(), White);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, next slot)

  for (std::size_t start = 0; start < adj.size(); ++start) {
    if (color[start] != White) continue;
    stack.emplace_back(start, 0);
    color[start] = Grey;
    while (!stack.empty()) {
      auto& [node, slot] = stack.back();
      if (slot == adj[node].size()) {
        color[node] = Black;
        stack.pop_back();
        continue;
      }
      const auto cur = slot++;
      const auto& e = adj[node][cur];
      if (!e.alive) continue;
      if (color[e.to] == Grey) {
        // Back edge: the cycle runs from e.to down the stack to node.
        std::vector<std::pair<std::size_t, std::size_t>> cycle;
        auto it = std::find_if(stack.begin(), stack.end(),
                               [&](const auto& frame) { return frame.first == e.to; });
        for (; it != stack.end(); ++it) cycle.emplace_back(it->first, it->second - 1);
        return cycle;
      }
      if (color[e.to] == White) {
        color[e.to] = Grey;
        stack.emplace_back(e.to, 0);
      }
    }
  }
  return {};
}

}  // namespace

PredicateForest build_forest(std::span<const PredicateRule> scored_rules) {
  PredicateForest forest;
  std::set<std::string> names;
  for (const auto& r : scored_rules) {
    if (!r.score) {
      throw ScoringError("predicate rule " + r.from.surface() + " => " + r.to.surface() +
                         " has no score");
    }
    names.insert(r.from.surface());
    names.insert(r.to.surface());
  }
  forest.nodes.assign(names.begin(), names.end());
  auto index_of = [&](const std::string& s) {
    return static_cast<std::size_t>(
        std::lower_bound(forest.nodes.begin(), forest.nodes.end(), s) - forest.nodes.begin());
  };

  std::vector<std::vector<IndexedEdge>> adj(forest.nodes.size());
  for (const auto& r : scored_rules) {
    auto from = index_of(r.from.surface());
    auto to = index_of(r.to.surface());
    if (from == to) continue;
    auto& list = adj[from];
    auto dup = std::find_if(list.begin(), list.end(), [&](const auto& e) { return e.to == to; });
    if (dup != list.end()) {
      dup->score = std::max(dup->score, *r.score);
    } else {
      list.push_back({to, *r.score});
    }
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.to < b.to; });
  }

  while (true) {
    auto cycle = find_cycle(adj);
    if (cycle.empty()) break;
    auto weakest = *std::min_element(cycle.begin(), cycle.end(), [&](const auto& a, const auto& b) {
      const auto& ea = adj[a.first][a.second];
      const auto& eb = adj[b.first][b.second];
      return std::tie(ea.score, forest.nodes[a.first], forest.nodes[ea.to]) <
             std::tie(eb.score, forest.nodes[b.first], forest.nodes[eb.to]);
    });
    auto& e = adj[weakest.first][weakest.second];
    e.alive = false;
    forest.removed.emplace_back(forest.nodes[weakest.first], forest.nodes[e.to]);
  }
  std::sort(forest.removed.begin(), forest.removed.end());

  std::vector<std::size_t> parent(forest.nodes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (std::size_t i = 0; i < adj.size(); ++i) {
    std::vector<PredicateForest::Edge> generals;
    for (const auto& e : adj[i]) {
      if (!e.alive) continue;
      generals.push_back({forest.nodes[e.to], e.score});
      parent[find(i)] = find(e.to);
    }
    if (generals.empty()) {
      forest.roots.push_back(forest.nodes[i]);
    } else {
      forest.out.emplace(forest.nodes[i], std::move(generals));
    }
  }
  for (std::size_t i = 0; i < parent.size(); ++i) {
    if (find(i) == i) ++forest.tree_count;
  }
  return forest;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

std::vector<std::string> default_general_roots() { return {"change", "act", "move"}; }

std::vector<PredicatePath> extract_paths(const PredicateForest& forest,
                                         std::span<const std::string> general_roots) {
  std::set<std::string, std::less<>> general(general_roots.begin(), general_roots.end());
  std::set<std::string, std::less<>> has_specific;
  for (const auto& [from, targets] : forest.out) {
    for (const auto& e : targets) has_specific.insert(e.general);
  }

  std::set<PredicatePath> paths;
  auto emit_segments = [&](const std::vector<const std::string*>& chain) {
    std::vector<std::string> segment{*chain.front()};
    auto flush = [&] {
      if (segment.size() >= 2) paths.insert(PredicatePath{segment});
    };
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if (general.count(*chain[i]) || general.count(*chain[i + 1])) {
        flush();
        segment.assign(1, *chain[i + 1]);
      } else {
        segment.push_back(*chain[i + 1]);
      }
    }
    flush();
  };

  // Depth-first enumeration of maximal specific-to-general chains.
  for (const auto& leaf : forest.nodes) {
    if (has_specific.count(leaf) || forest.generals(leaf).empty()) continue;
    std::vector<const std::string*> chain{&leaf};
    std::vector<std::size_t> next{0};
    while (!chain.empty()) {
      auto generals = forest.generals(*chain.back());
      if (generals.empty()) {
        emit_segments(chain);
        chain.pop_back();
        next.pop_back();
        continue;
      }
      if (next.back() == generals.size()) {
        chain.pop_back();
        next.pop_back();
        continue;
      }
      chain.push_back(&generals[next.back()++].general);
      next.push_back(0);
    }
  }
  return {paths.begin(), paths.end()};
}

// ---------------------------------------------------------------------------
// Bipartite candidates and Algorithm 1
// ---------------------------------------------------------------------------

BipartiteCandidate build_bipartite(const Corpus& corpus, std::string_view p_i,
                                   std::string_view p_next, const ArgumentRuleIndex& rules,
                                   double pred_score) {
  BipartiteCandidate g;
  auto left = corpus.with_predicate(p_i);
  auto right = corpus.with_predicate(p_next);
  g.left.assign(left.begin(), left.end());
  g.right.assign(right.begin(), right.end());
  if (g.left.empty() || g.right.empty()) return g;

  CandidateGenerator generator(corpus, rules);
  for (auto l : g.left) {
    g.checks += generator.for_each(l, p_next, [&](const Candidate& c) {
      auto edge = score_candidate(corpus, c, pred_score);
      edge.provenance = Provenance::Global;
      g.candidates.push_back({edge, c.identical_args});
    });
  }
  std::sort(g.candidates.begin(), g.candidates.end(), [](const auto& a, const auto& b) {
    return std::tie(a.edge.from, a.edge.to) < std::tie(b.edge.from, b.edge.to);
  });
  return g;
}

bool accepts(const BipartiteEdge& candidate, double tau_a, double tau_e) {
  return candidate.identical_args ||
         (candidate.edge.arg_score > tau_a && candidate.edge.local_score > tau_e);
}

PredicateScores predicate_scores(std::span<const PredicateRule> scored_rules) {
  PredicateScores scores;
  for (const auto& r : scored_rules) {
    if (!r.score) {
      throw ScoringError("predicate rule " + r.from.surface() + " => " + r.to.surface() +
                         " has no score");
    }
    auto [it, inserted] = scores.try_emplace({r.from.surface(), r.to.surface()}, *r.score);
    if (!inserted) it->second = std::max(it->second, *r.score);
  }
  return scores;
}

namespace {

double path_edge_score(const PredicateScores& scores, const std::string& from,
                       const std::string& to) {
  auto it = scores.find(std::make_pair(from, to));
  if (it == scores.end()) {
    throw ScoringError("path edge " + from + " => " + to + " is not a scored predicate rule");
  }
  return it->second;
}

std::vector<ScoredEdge> accepted_edges(const Corpus& corpus, const std::string& p_i,
                                       const std::string& p_next, const ArgumentRuleIndex& rules,
                                       double pred_score, double tau_a, double tau_e,
                                       std::uint64_t& checks) {
  auto g = build_bipartite(corpus, p_i, p_next, rules, pred_score);
  checks += g.checks;
  std::vector<ScoredEdge> edges;
  for (const auto& c : g.candidates) {
    if (accepts(c, tau_a, tau_e)) edges.push_back(c.edge);
  }
  return edges;
}

struct Adjacency {
  std::unordered_map<EventualityId, std::vector<EventualityId>> out;
  std::vector<EventualityId> sources;  ///< in-degree 0, ascending
};

Adjacency adjacency(std::span<const ScoredEdge> edges) {
  Adjacency a;
  std::unordered_set<EventualityId> has_incoming;
  std::set<EventualityId> nodes;
  for (const auto& e : edges) {
    a.out[e.from].push_back(e.to);
    has_incoming.insert(e.to);
    nodes.insert(e.from);
  }
  for (auto& [from, targets] : a.out) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  }
  for (auto n : nodes) {
    if (!has_incoming.count(n)) a.sources.push_back(n);
  }
  return a;
}

}  // namespace

std::vector<std::vector<EventualityId>> chains_from_edges(std::span<const ScoredEdge> edges) {
  auto a = adjacency(edges);
  std::vector<std::vector<EventualityId>> chains;
  for (auto source : a.sources) {
    std::vector<EventualityId> chain{source};
    std::vector<std::size_t> next{0};
    std::unordered_set<EventualityId> on_chain{source};
    while (!chain.empty()) {
      auto it = a.out.find(chain.back());
      const bool terminal = it == a.out.end();
      if (terminal && next.back() == 0) {
        chains.push_back(chain);
        next.back() = 1;
      }
      if (terminal || next.back() == it->second.size()) {
        on_chain.erase(chain.back());
        chain.pop_back();
        next.pop_back();
        continue;
      }
      auto to = it->second[next.back()++];
      if (on_chain.count(to)) continue;
      chain.push_back(to);
      next.push_back(0);
      on_chain.insert(to);
    }
  }
  return chains;
}

std::uint64_t count_chains(std::span<const ScoredEdge> edges) {
  auto a = adjacency(edges);
  std::unordered_map<EventualityId, std::uint64_t> memo;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();

  // Post-order over the DAG: paths(v) = 1 at sinks, else the sum over children.
  auto paths_from = [&](EventualityId root) {
    std::vector<std::pair<EventualityId, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [v, expanded] = stack.back();
      stack.pop_back();
      if (memo.count(v)) continue;
      auto it = a.out.find(v);
      if (it == a.out.end()) {
        memo[v] = 1;
        continue;
      }
      if (!expanded) {
        stack.emplace_back(v, true);
        for (auto to : it->second) {
          if (!memo.count(to)) stack.emplace_back(to, false);
        }
        continue;
      }
      std::uint64_t sum = 0;
      for (auto to : it->second) {
        auto m = memo.count(to) ? memo[to] : 0;
        sum = (kMax - sum < m) ? kMax : sum + m;
      }
      memo[v] = sum;
    }
    return memo[root];
  };

  std::uint64_t total = 0;
  for (auto s : a.sources) {
    auto m = paths_from(s);
    total = (kMax - total < m) ? kMax : total + m;
  }
  return total;
}

Algorithm1Result algorithm1(const PredicatePath& path, const ArgumentRuleIndex& rules,
                            const PredicateScores& scores, double tau_a, double tau_e,
                            const Corpus& corpus, bool collect_chains) {
  if (tau_a < 0.0 || tau_a > 1.0 || tau_e < 0.0 || tau_e > 1.0) {
    throw ScoringError("thresholds must lie in [0, 1]");
  }
  Algorithm1Result result;
  const auto& preds = path.predicates;
  for (std::size_t i = 0; i + 1 < preds.size(); ++i) {
    auto score = path_edge_score(scores, preds[i], preds[i + 1]);
    auto edges = accepted_edges(corpus, preds[i], preds[i + 1], rules, score, tau_a, tau_e,
                                result.candidate_checks);
    result.edges.insert(result.edges.end(), edges.begin(), edges.end());
  }
  dedupe_edges(result.edges);
  if (collect_chains) result.chains = chains_from_edges(result.edges);
  return result;
}

// ---------------------------------------------------------------------------
// Expansion and the global stage
// ---------------------------------------------------------------------------

std::vector<ScoredEdge> expand_with_argument_rules(std::span<const EventualityId> chain_nodes,
                                                   const Corpus& corpus,
                                                   const ArgumentRuleIndex& rules, double tau_e) {
  std::unordered_set<EventualityId> targets(chain_nodes.begin(), chain_nodes.end());
  std::set<std::string> predicates;
  for (auto id : targets) predicates.insert(corpus.decomposed(id).predicate.surface());

  CandidateGenerator generator(corpus, rules);
  std::vector<ScoredEdge> edges;
  for (const auto& p : predicates) {
    for (auto member : corpus.with_predicate(p)) {
      generator.for_each(member, p, [&](const Candidate& c) {
        if (!targets.count(c.hypothesis)) return;
        auto edge = score_candidate(corpus, c, 1.0);
        if (edge.local_score > tau_e) edges.push_back(edge);
      });
    }
  }
  dedupe_edges(edges);
  return edges;
}

GlobalResult infer_global_edges(const Corpus& corpus, const ArgumentRuleIndex& rules,
                                const PredicateScores& scores,
                                std::span<const PredicatePath> paths, const GlobalParams& params) {
  // Consecutive pairs shared by several paths are scored once.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& path : paths) {
    for (std::size_t i = 0; i + 1 < path.predicates.size(); ++i) {
      pairs.emplace_back(path.predicates[i], path.predicates[i + 1]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::atomic<std::uint64_t> checks{0};
  auto per_pair = parallel_collect<std::vector<ScoredEdge>>(
      pairs.size(), params.workers, [&](std::size_t i, std::vector<std::vector<ScoredEdge>>& out) {
        const auto& [from, to] = pairs[i];
        std::uint64_t local_checks = 0;
        out.push_back(accepted_edges(corpus, from, to, rules, path_edge_score(scores, from, to),
                                     params.tau_a, params.tau_e, local_checks));
        checks += local_checks;
      });

  GlobalResult result;
  for (const auto& edges : per_pair) {
    result.path_edges.insert(result.path_edges.end(), edges.begin(), edges.end());
  }
  dedupe_edges(result.path_edges);

  auto pair_slot = [&](const std::string& a, const std::string& b) {
    auto key = std::make_pair(a, b);
    return static_cast<std::size_t>(std::lower_bound(pairs.begin(), pairs.end(), key) -
                                    pairs.begin());
  };
  auto chain_counts = parallel_collect<std::uint64_t>(
      paths.size(), params.workers, [&](std::size_t i, std::vector<std::uint64_t>& out) {
        const auto& preds = paths[i].predicates;
        std::vector<ScoredEdge> edges;
        for (std::size_t j = 0; j + 1 < preds.size(); ++j) {
          const auto& part = per_pair[pair_slot(preds[j], preds[j + 1])];
          edges.insert(edges.end(), part.begin(), part.end());
        }
        out.push_back(count_chains(edges));
      });
  for (auto c : chain_counts) {
    result.chain_count = std::numeric_limits<std::uint64_t>::max() - result.chain_count < c
                             ? std::numeric_limits<std::uint64_t>::max()
                             : result.chain_count + c;
  }

  std::vector<EventualityId> nodes;
  for (const auto& e : result.path_edges) {
    nodes.push_back(e.from);
    nodes.push_back(e.to);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  result.expansion_edges = expand_with_argument_rules(nodes, corpus, rules, params.tau_e);
  result.candidate_checks = checks.load();
  return result;
}

void dedupe_edges(std::vector<ScoredEdge>& edges) {
  std::stable_sort(edges.begin(), edges.end(), [](const ScoredEdge& a, const ScoredEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    return a.local_score > b.local_score;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const ScoredEdge& a, const ScoredEdge& b) {
                            return a.from == b.from && a.to == b.to;
                          }),
              edges.end());
}

}  // namespace eeg
