#include "eeg/graph_store.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "eeg/corpus.hpp"
#include "eeg/error.hpp"
#include "eeg/number_format.hpp"

namespace eeg {

namespace {

std::string content_key(const Eventuality& e) {
  std::string key(pattern_code(e.pattern));
  key.push_back('\t');
  key += e.serialize_tokens();
  return key;
}

auto edge_rank(const ScoredEdge& e) {
  return std::make_tuple(e.from, e.to, -e.local_score, e.provenance, e.type, -e.arg_score,
                         -e.pred_score, -e.penalty);
}

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find('\t', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void canonicalize_edges(std::vector<ScoredEdge>& edges) {
  std::sort(edges.begin(), edges.end(),
            [](const ScoredEdge& a, const ScoredEdge& b) { return edge_rank(a) < edge_rank(b); });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const ScoredEdge& a, const ScoredEdge& b) {
                            return a.from == b.from && a.to == b.to;
                          }),
              edges.end());
}

EntailmentGraph::EntailmentGraph(std::vector<Eventuality> nodes, std::vector<ScoredEdge> edges,
                                 std::vector<PredicatePath> paths)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), paths_(std::move(paths)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != i) {
      throw Error("node at position " + std::to_string(i) + " has id " +
                  std::to_string(nodes_[i].id));
    }
    validate(nodes_[i]);
    if (!by_content_.emplace(content_key(nodes_[i]), nodes_[i].id).second) {
      throw Error("duplicate node " + nodes_[i].text());
    }
    node_predicates_.push_back(decompose(nodes_[i]).predicate.surface());
  }
  for (const auto& e : edges_) {
    if (e.from >= nodes_.size() || e.to >= nodes_.size()) {
      throw Error("edge endpoint outside the node range");
    }
  }
  canonicalize_edges(edges_);
  std::sort(paths_.begin(), paths_.end());
  paths_.erase(std::unique(paths_.begin(), paths_.end()), paths_.end());

  out_offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) ++out_offsets_[e.from + 1];
  for (std::size_t i = 1; i < out_offsets_.size(); ++i) out_offsets_[i] += out_offsets_[i - 1];
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    by_type_[static_cast<std::size_t>(edges_[i].type)].push_back(i);
    by_provenance_[static_cast<std::size_t>(edges_[i].provenance)].push_back(i);
  }
}

std::span<const ScoredEdge> EntailmentGraph::outgoing(EventualityId from) const {
  if (from >= nodes_.size()) return {};
  return std::span<const ScoredEdge>(edges_).subspan(out_offsets_[from],
                                                     out_offsets_[from + 1] - out_offsets_[from]);
}

std::span<const std::size_t> EntailmentGraph::with_type(EntailmentType t) const {
  return by_type_[static_cast<std::size_t>(t)];
}

std::span<const std::size_t> EntailmentGraph::with_provenance(Provenance p) const {
  return by_provenance_[static_cast<std::size_t>(p)];
}

const ScoredEdge* EntailmentGraph::edge(EventualityId from, EventualityId to) const {
  auto out = outgoing(from);
  auto it = std::lower_bound(out.begin(), out.end(), to,
                             [](const ScoredEdge& e, EventualityId id) { return e.to < id; });
  return it != out.end() && it->to == to ? &*it : nullptr;
}

std::optional<EventualityId> EntailmentGraph::find(const Eventuality& e) const {
  auto it = by_content_.find(content_key(e));
  if (it == by_content_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

void GraphBuilder::add_batch(std::vector<ScoredEdge> batch) {
  std::lock_guard lock(mutex_);
  edges_.insert(edges_.end(), std::make_move_iterator(batch.begin()),
                std::make_move_iterator(batch.end()));
}

void GraphBuilder::set_paths(std::vector<PredicatePath> paths) {
  std::lock_guard lock(mutex_);
  paths_ = std::move(paths);
}

EntailmentGraph GraphBuilder::seal() {
  std::lock_guard lock(mutex_);
  return EntailmentGraph(std::move(nodes_), std::move(edges_), std::move(paths_));
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

void write_file(const std::filesystem::path& path, const std::string& header, std::size_t count,
                const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << '#' << header << '\t' << count << '\n' << body;
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

template <class Int>
bool parse_uint(std::string_view text, Int& value) {
  if (text.empty()) return false;
  Int v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    v = static_cast<Int>(v * 10 + static_cast<Int>(c - '0'));
  }
  value = v;
  return true;
}

/// Reads a file written by `write_file`; returns its body lines.
std::vector<std::string> read_file(const std::filesystem::path& path, const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("missing graph file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string(), 1, "empty file");
  auto fields = split_tabs(line);
  std::size_t expected = 0;
  if (fields.size() != 2 || fields[0] != "#" + header || !parse_uint(fields[1], expected)) {
    throw FormatError(path.string(), 1, "bad header, expected '#" + header + "<TAB>count'");
  }

  std::vector<std::string> lines;
  lines.reserve(expected);
  bool last_terminated = true;
  while (std::getline(in, line)) {
    lines.push_back(line);
    last_terminated = !in.eof();
  }
  if (lines.size() != expected || !last_terminated) {
    throw FormatError(path.string(), lines.size() + 1,
                      "truncated: header announces " + std::to_string(expected) +
                          " records, found " + std::to_string(lines.size()) +
                          (last_terminated ? "" : " (last line unterminated)"));
  }
  return lines;
}

}  // namespace

void write_graph(const EntailmentGraph& graph, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::string body;
  for (const auto& n : graph.nodes()) {
    body += std::to_string(n.id);
    body += '\t';
    body += pattern_code(n.pattern);
    body += '\t';
    body += n.serialize_tokens();
    body += '\t';
    body += std::to_string(n.frequency);
    body += '\n';
  }
  write_file(dir / kNodesFile, "nodes", graph.node_count(), body);

  body.clear();
  for (const auto& e : graph.edges()) {
    body += std::to_string(e.from);
    body += '\t';
    body += std::to_string(e.to);
    body += '\t';
    body += type_label(e.type);
    body += '\t';
    body += provenance_name(e.provenance);
    for (double v : {e.arg_score, e.pred_score, e.penalty, e.local_score}) {
      body += '\t';
      body += format_double(v);
    }
    body += '\n';
  }
  write_file(dir / kEdgesFile, "edges", graph.edge_count(), body);

  body.clear();
  for (const auto& p : graph.paths()) {
    for (std::size_t i = 0; i < p.predicates.size(); ++i) {
      if (i) body += '\t';
      body += p.predicates[i];
    }
    body += '\n';
  }
  write_file(dir / kPathsFile, "paths", graph.paths().size(), body);
}

EntailmentGraph read_graph(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw LookupError("no graph at " + dir.string());

  const auto nodes_path = (dir / kNodesFile).string();
  std::vector<Eventuality> nodes;
  {
    auto lines = read_file(dir / kNodesFile, "nodes");
    nodes.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto lineno = i + 2;
      auto fields = split_tabs(lines[i]);
      EventualityId id = 0;
      if (fields.size() != 4 || !parse_uint(fields[0], id) || id != i) {
        throw FormatError(nodes_path, lineno, "expected id<TAB>pattern<TAB>tokens<TAB>frequency");
      }
      std::string record(fields[1]);
      record.append("\t").append(fields[2]).append("\t").append(fields[3]);
      try {
        auto e = parse_corpus_line(record);
        e.id = id;
        nodes.push_back(std::move(e));
      } catch (const LoadError& err) {
        throw FormatError(nodes_path, lineno, err.what());
      }
    }
  }

  const auto edges_path = (dir / kEdgesFile).string();
  std::vector<ScoredEdge> edges;
  {
    auto lines = read_file(dir / kEdgesFile, "edges");
    edges.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto lineno = i + 2;
      auto fields = split_tabs(lines[i]);
      if (fields.size() != 8) throw FormatError(edges_path, lineno, "expected 8 fields");
      ScoredEdge e;
      if (!parse_uint(fields[0], e.from) || !parse_uint(fields[1], e.to)) {
        throw FormatError(edges_path, lineno, "bad node id");
      }
      if (e.from >= nodes.size() || e.to >= nodes.size()) {
        throw FormatError(edges_path, lineno, "node id out of range");
      }
      auto type = parse_type_label(fields[2]);
      if (!type) throw FormatError(edges_path, lineno, "unknown type label");
      e.type = *type;
      auto prov = parse_provenance(fields[3]);
      if (!prov) throw FormatError(edges_path, lineno, "unknown provenance");
      e.provenance = *prov;
      double* slots[] = {&e.arg_score, &e.pred_score, &e.penalty, &e.local_score};
      for (std::size_t k = 0; k < 4; ++k) {
        if (!parse_double(fields[4 + k], *slots[k])) {
          throw FormatError(edges_path, lineno, "bad score '" + std::string(fields[4 + k]) + "'");
        }
      }
      if (!edges.empty() && std::tie(edges.back().from, edges.back().to) >= std::tie(e.from, e.to)) {
        throw FormatError(edges_path, lineno, "edges not strictly ordered by (from, to)");
      }
      edges.push_back(e);
    }
  }

  std::vector<PredicatePath> paths;
  {
    auto lines = read_file(dir / kPathsFile, "paths");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      auto fields = split_tabs(lines[i]);
      if (fields.size() < 2 || std::any_of(fields.begin(), fields.end(),
                                           [](auto f) { return f.empty(); })) {
        throw FormatError((dir / kPathsFile).string(), i + 2, "a path needs at least 2 predicates");
      }
      PredicatePath p;
      for (auto f : fields) p.predicates.emplace_back(f);
      paths.push_back(std::move(p));
    }
  }

  try {
    return EntailmentGraph(std::move(nodes), std::move(edges), std::move(paths));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& err) {
    throw FormatError(dir.string(), 0, err.what());
  }
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

const StatsRow* GraphStats::row(std::string_view label) const {
  for (const auto& r : rows) {
    if (r.label == label) return &r;
  }
  return nullptr;
}

std::string GraphStats::to_table() const {
  std::ostringstream out;
  out << "type\t#Eventuality\t#ER(local)\t#ER(global)\t#ER(global-only)\n";
  for (const auto& r : rows) {
    out << r.label << '\t' << r.eventualities << '\t' << r.local_edges << '\t' << r.global_edges
        << '\t' << r.global_only << '\n';
  }
  return out.str();
}

GraphStats stats(const EntailmentGraph& graph) {
  GraphStats s;
  std::set<EventualityId> all_nodes;
  StatsRow overall{"Overall"};
  for (auto t : all_entailment_types()) {
    StatsRow row{std::string(type_label(t))};
    std::set<EventualityId> nodes;
    for (auto i : graph.with_type(t)) {
      const auto& e = graph.edges()[i];
      nodes.insert(e.from);
      nodes.insert(e.to);
      ++(e.provenance == Provenance::Local ? row.local_edges : row.global_only);
    }
    row.global_edges = row.local_edges + row.global_only;
    row.eventualities = nodes.size();
    all_nodes.insert(nodes.begin(), nodes.end());
    overall.local_edges += row.local_edges;
    overall.global_edges += row.global_edges;
    overall.global_only += row.global_only;
    s.rows.push_back(std::move(row));
  }
  overall.eventualities = all_nodes.size();
  s.rows.push_back(std::move(overall));
  return s;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

Sample sample_for_annotation(const EntailmentGraph& graph, std::size_t n_per_type,
                             std::uint64_t seed) {
  Sample sample;
  std::mt19937_64 rng(seed);
  for (auto t : all_entailment_types()) {
    auto pool = graph.with_type(t);
    std::vector<std::size_t> picked(pool.begin(), pool.end());
    if (picked.size() < n_per_type) {
      sample.warnings.push_back("type " + std::string(type_label(t)) + " has " +
                                std::to_string(picked.size()) + " edges, fewer than " +
                                std::to_string(n_per_type) + " requested");
    } else {
      // Partial Fisher-Yates: the first n positions become a uniform sample.
      for (std::size_t i = 0; i < n_per_type; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, picked.size() - 1);
        std::swap(picked[i], picked[pick(rng)]);
      }
      picked.resize(n_per_type);
      std::sort(picked.begin(), picked.end());
    }
    for (auto i : picked) {
      const auto& e = graph.edges()[i];
      sample.records.push_back({graph.node(e.from).text(), graph.node(e.to).text(),
                                std::string(type_label(t)), e.local_score});
    }
  }
  return sample;
}

std::string format_sample(const Sample& sample) {
  std::string out;
  for (const auto& w : sample.warnings) out += "# warning: " + w + "\n";
  for (const auto& r : sample.records) {
    out += r.premise + '\t' + r.hypothesis + '\t' + r.type_label + '\t' +
           format_double(r.local_score) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

std::string_view query_kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::Direct: return "direct";
    case QueryKind::Chain: return "chain";
    case QueryKind::None: break;
  }
  return "none";
}

namespace {

/// Shortest walk a -> b whose hops keep the predicate position or advance it
/// by one along `order`.
std::vector<ScoredEdge> chain_within(const EntailmentGraph& graph, EventualityId a,
                                     EventualityId b, const std::map<std::string, std::size_t,
                                                                     std::less<>>& order) {
  std::map<EventualityId, const ScoredEdge*> via;
  std::deque<EventualityId> queue{a};
  via[a] = nullptr;
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    if (cur == b) break;
    const auto from_pos = order.find(graph.predicate_of(cur))->second;
    for (const auto& e : graph.outgoing(cur)) {
      auto it = order.find(graph.predicate_of(e.to));
      if (it == order.end() || (it->second != from_pos && it->second != from_pos + 1)) continue;
      if (via.count(e.to)) continue;
      via[e.to] = &e;
      queue.push_back(e.to);
    }
  }
  if (!via.count(b)) return {};
  std::vector<ScoredEdge> trail;
  for (auto at = b; at != a;) {
    const auto* e = via[at];
    trail.push_back(*e);
    at = e->from;
  }
  std::reverse(trail.begin(), trail.end());
  return trail;
}

}  // namespace

QueryResult query_entails(const EntailmentGraph& graph, EventualityId a, EventualityId b) {
  if (a >= graph.node_count() || b >= graph.node_count()) {
    throw LookupError("unknown eventuality id");
  }
  QueryResult result;
  if (a == b) return result;
  if (const auto* e = graph.edge(a, b)) {
    result.kind = QueryKind::Direct;
    result.trail.push_back(*e);
    return result;
  }

  const auto& pa = graph.predicate_of(a);
  const auto& pb = graph.predicate_of(b);
  std::vector<std::map<std::string, std::size_t, std::less<>>> scopes;
  if (pa == pb) scopes.push_back({{pa, 0}});
  for (const auto& path : graph.paths()) {
    const auto& preds = path.predicates;
    auto ia = std::find(preds.begin(), preds.end(), pa);
    auto ib = std::find(preds.begin(), preds.end(), pb);
    if (ia == preds.end() || ib == preds.end() || ib < ia) continue;
    std::map<std::string, std::size_t, std::less<>> order;
    for (std::size_t i = 0; i < preds.size(); ++i) order.emplace(preds[i], i);
    scopes.push_back(std::move(order));
  }
  for (const auto& scope : scopes) {
    auto trail = chain_within(graph, a, b, scope);
    if (!trail.empty() && (result.trail.empty() || trail.size() < result.trail.size())) {
      result.trail = std::move(trail);
    }
  }
  if (!result.trail.empty()) result.kind = QueryKind::Chain;
  return result;
}

QueryResult query_entails(const EntailmentGraph& graph, const Eventuality& a,
                          const Eventuality& b) {
  auto ia = graph.find(a);
  if (!ia) throw LookupError("unknown eventuality '" + a.text() + "'");
  auto ib = graph.find(b);
  if (!ib) throw LookupError("unknown eventuality '" + b.text() + "'");
  return query_entails(graph, *ia, *ib);
}

std::string format_query(const EntailmentGraph& graph, const QueryResult& result) {
  std::string out(query_kind_name(result.kind));
  out += '\n';
  for (const auto& e : result.trail) {
    out += graph.node(e.from).text() + " => " + graph.node(e.to).text() + '\t' +
           std::string(type_label(e.type)) + '\t' + std::string(provenance_name(e.provenance)) +
           "\tLe=" + format_double(e.local_score) + '\n';
  }
  return out;
}

}  // namespace eeg
