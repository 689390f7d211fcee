#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eeg/corpus.hpp"
#include "eeg/error.hpp"
#include "eeg/global_inference.hpp"
#include "eeg/graph_store.hpp"
#include "eeg/resources.hpp"
#include "eeg/rule_extraction.hpp"

namespace eeg {

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path taxonomy;
  std::filesystem::path verb_hierarchy;
  std::filesystem::path light_verbs;  ///< empty: built-in list
  std::size_t k = 5;
  double tau = 0.05;
  double lambda = 0.5;
  double tau_a = 0.3;
  double tau_e = 0.2;
  std::uint64_t min_pred_freq = 5;
  std::vector<std::string> general_roots = default_general_roots();
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::filesystem::path output = "eeg_out";

  /// Throws Error unless thresholds lie in [0,1], min_pred_freq >= 1 and
  /// workers >= 1.
  void validate() const;
};

/// Keys accepted by `apply_setting` and config files, in report order.
std::span<const std::string_view> config_keys();

/// Sets one key from its text form. Throws Error on unknown keys or bad values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

/// key=value lines; '#' starts a comment. Relative paths resolve against the
/// file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// A failure tagged with the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct PipelineInputs {
  Corpus corpus;
  TaxonomyStore taxonomy;
  VerbHierarchyStore hierarchy;
};

/// Loads the three resources named by the config ("ingest" stage).
PipelineInputs load_inputs(const PipelineConfig& config);

struct RunReport {
  std::size_t eventualities = 0;
  std::size_t terms = 0;            ///< |T|
  std::size_t predicates = 0;       ///< |P|
  std::size_t argument_rules = 0;   ///< |TR|
  std::size_t predicate_rules = 0;  ///< |PR|
  std::size_t removed_rules = 0;    ///< PR edges dropped to break cycles
  std::size_t linking_verbs = 0;
  std::size_t trees = 0;
  std::size_t paths = 0;
  std::uint64_t chains = 0;
  std::uint64_t local_checks = 0;
  std::uint64_t global_checks = 0;
  std::size_t local_edges = 0;      ///< pairwise stage, before merging
  std::size_t path_edges = 0;       ///< algorithm 1, before merging
  std::size_t expansion_edges = 0;  ///< argument-rule expansion, before merging
  GraphStats stats;
  PipelineConfig config;

  /// Deterministic text: counts, per-type table and thresholds.
  std::string to_text() const;
};

struct BuildResult {
  EntailmentGraph graph;
  RunReport report;
  std::vector<ArgumentRule> argument_rules;
  std::vector<PredicateRule> predicate_rules;  ///< scored
};

/// Rule extraction, local scoring and global inference in memory. Throws
/// StageError.
BuildResult run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config);

/// Full build: ingest, run, then persist into config.output (graph files,
/// rules, stats, report). The directory is replaced only on success.
BuildResult cmd_build(const PipelineConfig& config, std::ostream* progress = nullptr);

/// Table-shaped statistics of the graph at config.output.
std::string cmd_stats(const PipelineConfig& config);

/// Writes the annotation sample to `out_path`; returns the record count.
std::size_t cmd_sample(const PipelineConfig& config, std::size_t n_per_type,
                       const std::filesystem::path& out_path);

/// Parses "pattern role=token;role=token..." (e.g. "s-v-o n1=boy;v1=eat;n2=food").
Eventuality parse_eventuality_spec(std::string_view spec);

std::string cmd_query(const PipelineConfig& config, std::string_view premise,
                      std::string_view hypothesis);

}  // namespace eeg
