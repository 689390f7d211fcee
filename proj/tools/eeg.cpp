// Command-line front end: build, stats, sample, query.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "eeg/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Eventuality entailment graph builder"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file");
  std::map<std::string, std::optional<std::string>> overrides;
  for (auto key : eeg::config_keys()) {
    std::string name(key);
    app.add_option("--" + name, overrides[name], "override config key '" + name + "'");
  }

  auto* build = app.add_subcommand("build", "Build the graph into the output directory");
  bool quiet = false;
  build->add_flag("-q,--quiet", quiet, "suppress stage progress");

  app.add_subcommand("stats", "Per-type counts of a built graph");

  auto* sample = app.add_subcommand("sample", "Sample edges per type for annotation");
  std::size_t n_per_type = 100;
  std::string sample_out = "sample.tsv";
  sample->add_option("-n,--per-type", n_per_type, "edges per type")->capture_default_str();
  sample->add_option("--out", sample_out, "sample file")->capture_default_str();

  auto* query = app.add_subcommand("query", "Does the premise entail the hypothesis?");
  std::string premise, hypothesis;
  query->add_option("premise", premise, "e.g. \"s-v-o n1=boy;v1=crunch;n2=food\"")->required();
  query->add_option("hypothesis", hypothesis)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    eeg::PipelineConfig config;
    if (!config_path.empty()) config = eeg::load_config(config_path);
    for (const auto& [key, value] : overrides) {
      if (value) eeg::apply_setting(config, key, *value);
    }

    if (build->parsed()) {
      auto result = eeg::cmd_build(config, quiet ? nullptr : &std::cerr);
      std::cout << result.report.to_text();
    } else if (app.got_subcommand("stats")) {
      std::cout << eeg::cmd_stats(config);
    } else if (sample->parsed()) {
      auto n = eeg::cmd_sample(config, n_per_type, sample_out);
      std::cout << n << " pairs written to " << sample_out << '\n';
    } else if (query->parsed()) {
      std::cout << eeg::cmd_query(config, premise, hypothesis);
    }
  } catch (const eeg::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: [config] " << e.what() << '\n';
    return 2;
  }
  return 0;
}
