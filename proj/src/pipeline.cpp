#include "eeg/pipeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <chrono>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "eeg/local_inference.hpp"
#include "eeg/number_format.hpp"

namespace eeg {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void PipelineConfig::validate() const {
  auto unit = [](std::string_view name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error("config: " + std::string(name) + " must lie in [0, 1], got " + format_double(v));
    }
  };
  unit("tau", tau);
  unit("lambda", lambda);
  unit("tau_a", tau_a);
  unit("tau_e", tau_e);
  if (min_pred_freq < 1) throw Error("config: min_pred_freq must be >= 1");
  if (workers < 1) throw Error("config: workers must be >= 1");
}

std::span<const std::string_view> config_keys() {
  static constexpr std::array<std::string_view, 14> keys = {
      "corpus", "taxonomy",      "verb_hierarchy", "light_verbs", "k",       "tau",     "lambda",
      "tau_a",  "tau_e",         "min_pred_freq",  "general_roots", "seed",  "workers", "output"};
  return keys;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("config: " + std::string(key) + " expects a non-negative integer, got '" +
                std::string(text) + "'");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  if (!parse_double(text, v)) {
    throw Error("config: " + std::string(key) + " expects a number, got '" + std::string(text) +
                "'");
  }
  return v;
}

bool is_path_key(std::string_view key) {
  return key == "corpus" || key == "taxonomy" || key == "verb_hierarchy" ||
         key == "light_verbs" || key == "output";
}

}  // namespace

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view raw) {
  auto value = trim(raw);
  if (key == "corpus") c.corpus = std::string(value);
  else if (key == "taxonomy") c.taxonomy = std::string(value);
  else if (key == "verb_hierarchy") c.verb_hierarchy = std::string(value);
  else if (key == "light_verbs") c.light_verbs = std::string(value);
  else if (key == "output") c.output = std::string(value);
  else if (key == "k") c.k = parse_integer<std::size_t>(key, value);
  else if (key == "tau") c.tau = parse_real(key, value);
  else if (key == "lambda") c.lambda = parse_real(key, value);
  else if (key == "tau_a") c.tau_a = parse_real(key, value);
  else if (key == "tau_e") c.tau_e = parse_real(key, value);
  else if (key == "min_pred_freq") c.min_pred_freq = parse_integer<std::uint64_t>(key, value);
  else if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "workers") c.workers = parse_integer<unsigned>(key, value);
  else if (key == "general_roots") {
    c.general_roots.clear();
    std::size_t start = 0;
    while (start <= value.size()) {
      auto pos = value.find(',', start);
      auto item = normalize_text(value.substr(start, pos == value.npos ? value.npos : pos - start));
      if (!item.empty()) c.general_roots.push_back(std::move(item));
      if (pos == value.npos) break;
      start = pos + 1;
    }
  } else {
    throw Error("config: unknown key '" + std::string(key) + "'");
  }
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open config file");
  PipelineConfig config;
  const auto base = path.parent_path();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto eq = view.find('=');
    if (eq == view.npos) throw LoadError(path.string(), lineno, "expected key=value");
    auto key = trim(view.substr(0, eq));
    auto value = trim(view.substr(eq + 1));
    try {
      apply_setting(config, key, value);
    } catch (const Error& e) {
      throw LoadError(path.string(), lineno, e.what());
    }
    if (is_path_key(key) && !value.empty()) {
      fs::path p(std::string{value});
      if (p.is_relative()) p = base / p;
      apply_setting(config, key, p.string());
    }
  }
  return config;
}

// ---------------------------------------------------------------------------
// Build
// ---------------------------------------------------------------------------

namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

class StageClock {
 public:
  explicit StageClock(std::ostream* out) : out_(out), last_(std::chrono::steady_clock::now()) {}

  void done(std::string_view what, std::string_view detail = {}) {
    auto now = std::chrono::steady_clock::now();
    if (out_) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - last_).count();
      *out_ << what << " (" << ms << " ms)";
      if (!detail.empty()) *out_ << ": " << detail;
      *out_ << '\n';
    }
    last_ = now;
  }

 private:
  std::ostream* out_;
  std::chrono::steady_clock::time_point last_;
};

}  // namespace

PipelineInputs load_inputs(const PipelineConfig& config) {
  return stage("ingest", [&] {
    PipelineInputs in;
    in.corpus = load_corpus(config.corpus);
    in.taxonomy = load_taxonomy(config.taxonomy);
    in.hierarchy = load_verb_hierarchy(config.verb_hierarchy, config.light_verbs);
    return in;
  });
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "[counts]\n"
      << "eventualities\t" << eventualities << '\n'
      << "terms\t" << terms << '\n'
      << "predicates\t" << predicates << '\n'
      << "argument_rules\t" << argument_rules << '\n'
      << "predicate_rules\t" << predicate_rules << '\n'
      << "predicate_rules_removed\t" << removed_rules << '\n'
      << "linking_verbs\t" << linking_verbs << '\n'
      << "predicate_trees\t" << trees << '\n'
      << "predicate_paths\t" << paths << '\n'
      << "eventuality_chains\t" << chains << '\n'
      << "local_candidate_checks\t" << local_checks << '\n'
      << "global_candidate_checks\t" << global_checks << '\n'
      << "local_stage_edges\t" << local_edges << '\n'
      << "path_edges\t" << path_edges << '\n'
      << "expansion_edges\t" << expansion_edges << '\n'
      << "graph_nodes\t" << eventualities << '\n'
      << "graph_edges\t" << stats.overall().global_edges << '\n'
      << "\n[parameters]\n"
      << "k\t" << config.k << '\n'
      << "tau\t" << format_double(config.tau) << '\n'
      << "lambda\t" << format_double(config.lambda) << '\n'
      << "tau_a\t" << format_double(config.tau_a) << '\n'
      << "tau_e\t" << format_double(config.tau_e) << '\n'
      << "min_pred_freq\t" << config.min_pred_freq << '\n'
      << "general_roots\t";
  for (std::size_t i = 0; i < config.general_roots.size(); ++i) {
    out << (i ? "," : "") << config.general_roots[i];
  }
  out << "\nseed\t" << config.seed << '\n' << "\n[types]\n" << stats.to_table();
  return out.str();
}

namespace {

BuildResult run_pipeline_impl(const PipelineInputs& inputs, const PipelineConfig& config,
                              StageClock& clock) {
  stage("config", [&] { config.validate(); });
  const auto& corpus = inputs.corpus;
  BuildResult result;
  RunReport& report = result.report;
  report.config = config;
  report.eventualities = corpus.size();

  auto vocab = collect_vocabulary(corpus);
  std::vector<std::string> links;
  stage("rules", [&] {
    result.argument_rules =
        build_argument_rules(inputs.taxonomy, vocab.terms, config.k, config.tau, config.workers);
    result.predicate_rules =
        build_predicate_rules(inputs.hierarchy, vocab, config.min_pred_freq);
    links = linking_verbs(inputs.hierarchy, vocab, config.min_pred_freq);
  });
  report.terms = vocab.terms.size();
  report.predicates = vocab.predicates.size();
  report.argument_rules = result.argument_rules.size();
  report.predicate_rules = result.predicate_rules.size();
  report.linking_verbs = links.size();
  clock.done("rules", "TR=" + std::to_string(report.argument_rules) +
                          " PR=" + std::to_string(report.predicate_rules));

  ArgumentRuleIndex tr(result.argument_rules);
  auto local = stage("local", [&] {
    score_predicate_rules(result.predicate_rules, corpus, config.lambda, inputs.taxonomy,
                          config.workers);
    LocalParams params{config.lambda, config.tau_e, config.workers};
    return infer_local_edges(corpus, tr, result.predicate_rules, links, inputs.taxonomy, params);
  });
  report.local_edges = local.edges.size();
  report.local_checks = local.candidate_checks;
  clock.done("local", std::to_string(report.local_edges) + " edges");

  auto global = stage("global", [&] {
    auto forest = build_forest(result.predicate_rules);
    auto paths = extract_paths(forest, config.general_roots);
    report.trees = forest.tree_count;
    report.removed_rules = forest.removed.size();
    report.paths = paths.size();
    GlobalParams params{config.tau_a, config.tau_e, config.workers};
    auto g = infer_global_edges(corpus, tr, predicate_scores(result.predicate_rules), paths,
                                params);
    return std::make_pair(std::move(paths), std::move(g));
  });
  auto& paths = global.first;
  auto& global_result = global.second;
  report.chains = global_result.chain_count;
  report.global_checks = global_result.candidate_checks;
  report.path_edges = global_result.path_edges.size();
  report.expansion_edges = global_result.expansion_edges.size();
  clock.done("global", std::to_string(report.paths) + " paths, " +
                           std::to_string(report.path_edges) + " path edges");

  result.graph = stage("merge", [&] {
    GraphBuilder builder({corpus.eventualities().begin(), corpus.eventualities().end()});
    builder.add_batch(std::move(local.edges));
    builder.add_batch(std::move(global_result.expansion_edges));
    builder.add_batch(std::move(global_result.path_edges));
    builder.set_paths(std::move(paths));
    return builder.seal();
  });
  report.stats = stats(result.graph);
  return result;
}

fs::path normalized_output(const fs::path& output) {
  fs::path out = output.lexically_normal();
  if (!out.has_filename()) out = out.parent_path();
  if (out.empty()) throw Error("output directory is empty");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

BuildResult run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config) {
  StageClock clock(nullptr);
  return run_pipeline_impl(inputs, config, clock);
}

BuildResult cmd_build(const PipelineConfig& config, std::ostream* progress) {
  stage("config", [&] { config.validate(); });
  StageClock clock(progress);
  auto inputs = load_inputs(config);
  clock.done("ingest", std::to_string(inputs.corpus.size()) + " eventualities");
  auto result = run_pipeline_impl(inputs, config, clock);

  stage("persist", [&] {
    const auto out = normalized_output(config.output);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::random_device rd;
    std::ostringstream suffix;
    suffix << std::hex << rd() << rd();
    const auto tmp = out.parent_path() / ("." + out.filename().string() + ".partial-" + suffix.str());
    try {
      write_graph(result.graph, tmp);
      write_argument_rules(tmp / "argument_rules.tsv", result.argument_rules);
      write_predicate_rules(tmp / "predicate_rules.tsv", result.predicate_rules);
      write_text(tmp / "stats.tsv", result.report.stats.to_table());
      write_text(tmp / "report.txt", result.report.to_text());
      if (fs::exists(out)) fs::remove_all(out);
      fs::rename(tmp, out);
    } catch (...) {
      std::error_code ec;
      fs::remove_all(tmp, ec);
      throw;
    }
  });
  clock.done("persist", normalized_output(config.output).string());
  return result;
}

// ---------------------------------------------------------------------------
// Read-side commands
// ---------------------------------------------------------------------------

std::string cmd_stats(const PipelineConfig& config) {
  return stage("stats", [&] { return stats(read_graph(config.output)).to_table(); });
}

std::size_t cmd_sample(const PipelineConfig& config, std::size_t n_per_type,
                       const fs::path& out_path) {
  return stage("sample", [&] {
    auto graph = read_graph(config.output);
    auto sample = sample_for_annotation(graph, n_per_type, config.seed);
    write_text(out_path, format_sample(sample));
    return sample.records.size();
  });
}

Eventuality parse_eventuality_spec(std::string_view spec) {
  spec = trim(spec);
  auto space = spec.find_first_of(" \t");
  if (space == spec.npos) {
    throw Error("eventuality spec '" + std::string(spec) +
                "' must be 'pattern role=token;role=token...'");
  }
  std::string line(spec.substr(0, space));
  line.append("\t").append(trim(spec.substr(space))).append("\t1");
  return parse_corpus_line(line);
}

std::string cmd_query(const PipelineConfig& config, std::string_view premise,
                      std::string_view hypothesis) {
  return stage("query", [&] {
    auto graph = read_graph(config.output);
    auto result = query_entails(graph, parse_eventuality_spec(premise),
                                parse_eventuality_spec(hypothesis));
    return format_query(graph, result);
  });
}

}  // namespace eeg
