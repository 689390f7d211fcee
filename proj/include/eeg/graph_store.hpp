#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eeg/core_model.hpp"
#include "eeg/global_inference.hpp"

namespace eeg {

/// The eventuality entailment graph. Immutable once constructed; safe for
/// concurrent reads.
class EntailmentGraph {
 public:
  EntailmentGraph() = default;

  /// `nodes[i].id` must equal i and every edge endpoint must be a node.
  /// Edges are brought to canonical form (see `canonicalize_edges`).
  EntailmentGraph(std::vector<Eventuality> nodes, std::vector<ScoredEdge> edges,
                  std::vector<PredicatePath> paths = {});

  std::span<const Eventuality> nodes() const { return nodes_; }
  /// Sorted by (from, to), one edge per pair.
  std::span<const ScoredEdge> edges() const { return edges_; }
  std::span<const PredicatePath> paths() const { return paths_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const Eventuality& node(EventualityId id) const { return nodes_.at(id); }
  const std::string& predicate_of(EventualityId id) const { return node_predicates_.at(id); }

  std::span<const ScoredEdge> outgoing(EventualityId from) const;
  /// Positions into edges().
  std::span<const std::size_t> with_type(EntailmentType t) const;
  std::span<const std::size_t> with_provenance(Provenance p) const;

  const ScoredEdge* edge(EventualityId from, EventualityId to) const;
  std::optional<EventualityId> find(const Eventuality& e) const;

  friend bool operator==(const EntailmentGraph& a, const EntailmentGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.paths_ == b.paths_;
  }

 private:
  std::vector<Eventuality> nodes_;
  std::vector<ScoredEdge> edges_;
  std::vector<PredicatePath> paths_;

  std::vector<std::string> node_predicates_;
  std::vector<std::size_t> out_offsets_;  ///< size node_count + 1
  std::array<std::vector<std::size_t>, 10> by_type_;
  std::array<std::vector<std::size_t>, 2> by_provenance_;
  std::unordered_map<std::string, EventualityId> by_content_;
};

/// Sorts by (from, to) and keeps, per pair, the highest L^e; ties prefer
/// local provenance, then the smaller remaining fields. Independent of input
/// order.
void canonicalize_edges(std::vector<ScoredEdge>& edges);

/// Collects edge batches from concurrent producers, then seals into a graph.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::vector<Eventuality> nodes) : nodes_(std::move(nodes)) {}

  void add_batch(std::vector<ScoredEdge> batch);
  void set_paths(std::vector<PredicatePath> paths);
  EntailmentGraph seal();

 private:
  std::mutex mutex_;
  std::vector<Eventuality> nodes_;
  std::vector<ScoredEdge> edges_;
  std::vector<PredicatePath> paths_;
};

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

inline constexpr const char* kNodesFile = "nodes.tsv";
inline constexpr const char* kEdgesFile = "edges.tsv";
inline constexpr const char* kPathsFile = "paths.tsv";

/// Writes nodes.tsv, edges.tsv and paths.tsv into `dir` (created if needed).
void write_graph(const EntailmentGraph& graph, const std::filesystem::path& dir);
/// Throws LookupError when the files are missing and FormatError (with line
/// numbers) when they are malformed or truncated.
EntailmentGraph read_graph(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct StatsRow {
  std::string label;
  std::uint64_t eventualities = 0;  ///< distinct nodes touched by edges of the row
  std::uint64_t local_edges = 0;    ///< provenance local
  std::uint64_t global_edges = 0;   ///< all edges after the global stage
  std::uint64_t global_only = 0;    ///< provenance global
};

struct GraphStats {
  std::vector<StatsRow> rows;  ///< ten types in table order, then "Overall"

  const StatsRow& overall() const { return rows.back(); }
  const StatsRow* row(std::string_view label) const;
  std::string to_table() const;
};

GraphStats stats(const EntailmentGraph& graph);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct SampleRecord {
  std::string premise;
  std::string hypothesis;
  std::string type_label;
  double local_score = 0.0;
};

struct Sample {
  std::vector<SampleRecord> records;
  std::vector<std::string> warnings;  ///< types with fewer edges than requested
};

/// Uniform sample without replacement of `n_per_type` edges per type,
/// deterministic under `seed`.
Sample sample_for_annotation(const EntailmentGraph& graph, std::size_t n_per_type,
                             std::uint64_t seed);

/// premise<TAB>hypothesis<TAB>type_label<TAB>L^e per record, warnings as
/// leading "# warning:" lines.
std::string format_sample(const Sample& sample);

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

enum class QueryKind : std::uint8_t { None, Direct, Chain };

std::string_view query_kind_name(QueryKind k);

struct QueryResult {
  QueryKind kind = QueryKind::None;
  std::vector<ScoredEdge> trail;  ///< the witnessing edges, in order
};

/// Direct edge, else the shortest chain whose hops stay within one predicate
/// path (each hop keeps the predicate or advances one step), else none.
/// Throws LookupError when either eventuality is not a node.
QueryResult query_entails(const EntailmentGraph& graph, const Eventuality& a,
                          const Eventuality& b);
QueryResult query_entails(const EntailmentGraph& graph, EventualityId a, EventualityId b);

std::string format_query(const EntailmentGraph& graph, const QueryResult& result);

}  // namespace eeg
