#include "toy.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

namespace eeg::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return EEG_TEST_DATA; }

Eventuality sv(const std::string& s, const std::string& v, std::uint64_t freq) {
  return make_eventuality(Pattern::SV, {{TokenRole::N1, s}, {TokenRole::V1, v}}, freq);
}

Eventuality svo(const std::string& s, const std::string& v, const std::string& o,
                std::uint64_t freq) {
  return make_eventuality(Pattern::SVO, {{TokenRole::N1, s}, {TokenRole::V1, v}, {TokenRole::N2, o}},
                          freq);
}

PipelineInputs figure2_inputs() {
  PipelineInputs in;
  in.corpus = load_corpus(data_dir() / "figure2" / "corpus.tsv");
  in.taxonomy = load_taxonomy(data_dir() / "figure2" / "taxonomy.tsv");
  in.hierarchy = load_verb_hierarchy(data_dir() / "figure2" / "verbs.tsv");
  return in;
}

PipelineConfig figure2_config(const fs::path& output) {
  auto config = load_config(data_dir() / "figure2" / "build.conf");
  config.output = output;
  return config;
}

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = fs::temp_directory_path() /
          ("eeg-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

PipelineInputs random_toy(std::uint64_t seed, std::size_t max_events, std::size_t max_predicates) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  static const std::vector<std::string> verbs = {"crunch", "chew", "eat", "consume", "use"};
  static const std::vector<std::string> subjects = {"boy", "girl", "child", "person"};
  static const std::vector<std::string> objects = {"apple", "nut", "food", "fruit", "snack"};

  PipelineInputs in;
  // Taxonomy: instance -> concepts, with frequencies drawn per seed.
  for (const auto& [concept_name, instance] : std::vector<std::pair<std::string, std::string>>{
           {"fruit", "apple"}, {"food", "apple"}, {"snack", "nut"}, {"food", "nut"},
           {"food", "fruit"}, {"food", "snack"}, {"person", "boy"}, {"person", "girl"},
           {"person", "child"}, {"company", "apple"}}) {
    in.taxonomy.add(concept_name, instance, 1 + pick(9));
  }

  const auto n_preds = 2 + pick(max_predicates - 1);
  std::vector<std::string> used(verbs.begin(), verbs.begin() + static_cast<long>(n_preds));
  for (std::size_t i = 0; i + 1 < used.size(); ++i) {
    in.hierarchy.add_edge(used[i], used[i + 1], VerbRelation::Entail);
    if (i + 2 < used.size() && pick(3) == 0) {
      in.hierarchy.add_edge(used[i], used[i + 2], VerbRelation::Hypernym);
    }
  }
  for (auto lv : default_light_verbs()) in.hierarchy.add_light_verb(lv);

  std::vector<Eventuality> records;
  const auto n_events = 5 + pick(max_events - 4);
  for (std::size_t i = 0; i < n_events; ++i) {
    const auto& s = subjects[pick(subjects.size())];
    const auto& v = used[pick(used.size())];
    const auto& o = objects[pick(objects.size())];
    const auto freq = 1 + pick(6);
    switch (pick(4)) {
      case 0: records.push_back(sv(s, v, freq)); break;
      case 1:
        records.push_back(make_eventuality(Pattern::SVOPO,
                                           {{TokenRole::N1, s}, {TokenRole::V1, v},
                                            {TokenRole::N2, o}, {TokenRole::P1, "with"},
                                            {TokenRole::N3, objects[pick(objects.size())]}},
                                           freq));
        break;
      default: records.push_back(svo(s, v, o, freq)); break;
    }
  }
  in.corpus = Corpus::from_records(std::move(records));
  return in;
}

PipelineConfig write_synthetic(const fs::path& dir, const SyntheticSpec& spec,
                               const fs::path& output) {
  fs::create_directories(dir);
  std::mt19937_64 rng(spec.seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  constexpr std::size_t kSubjects = 40;
  constexpr std::size_t kLeaves = 400;
  constexpr std::size_t kConcepts = 40;

  {
    std::ofstream tax(dir / "taxonomy.tsv");
    for (std::size_t j = 0; j < kLeaves; ++j) {
      tax << "c" << j % kConcepts << "\to" << j << "\t" << 3 + pick(5) << '\n';
      tax << "c" << (j * 7 + 3) % kConcepts << "\to" << j << "\t" << 1 + pick(2) << '\n';
    }
    for (std::size_t s = 0; s < kSubjects; ++s) {
      tax << "g" << s % 4 << "\ts" << s << "\t" << 2 << '\n';
    }
  }

  auto verb = [](std::size_t path, std::size_t level) {
    return "v" + std::to_string(path) + "l" + std::to_string(level);
  };
  {
    std::ofstream verbs(dir / "verbs.tsv");
    for (std::size_t p = 0; p < spec.paths; ++p) {
      for (std::size_t l = 0; l + 1 < spec.path_length; ++l) {
        verbs << verb(p, l) << '\t' << verb(p, l + 1) << "\tentail\n";
      }
    }
  }

  {
    std::ofstream corpus(dir / "corpus.tsv");
    const std::size_t n_verbs = spec.paths * spec.path_length;
    const std::size_t per_verb = std::max<std::size_t>(1, spec.eventualities / n_verbs);
    const std::size_t pool_size = per_verb + per_verb / 2 + 1;
    auto object = [&](std::size_t k) {
      // Mostly leaves, some concepts so that TR targets occur as arguments.
      return k % 5 == 0 ? "c" + std::to_string(k % kConcepts) : "o" + std::to_string(k % kLeaves);
    };
    for (std::size_t p = 0; p < spec.paths; ++p) {
      // Argument pairs shared along the path.
      std::vector<std::pair<std::size_t, std::size_t>> pool;
      std::set<std::pair<std::size_t, std::size_t>> seen;
      while (pool.size() < pool_size) {
        std::pair<std::size_t, std::size_t> a{pick(kSubjects), pick(kLeaves * 2)};
        if (seen.insert(a).second) pool.push_back(a);
      }
      for (std::size_t l = 0; l < spec.path_length; ++l) {
        std::vector<std::size_t> order(pool.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i = 0; i < per_verb; ++i) {
          const auto& [s, o] = pool[order[i]];
          const auto freq = 1 + pick(20);
          const auto v = verb(p, l);
          switch (order[i] % 8) {
            case 0:
              corpus << "s-v\tn1=s" << s << ";v1=" << v << '\t' << freq << '\n';
              break;
            case 1:
              corpus << "s-v-o-p-o\tn1=s" << s << ";v1=" << v << ";n2=" << object(o)
                     << ";p1=on;n3=" << object(o + 1) << '\t' << freq << '\n';
              break;
            default:
              corpus << "s-v-o\tn1=s" << s << ";v1=" << v << ";n2=" << object(o) << '\t' << freq
                     << '\n';
          }
        }
      }
    }
  }

  PipelineConfig config;
  config.corpus = dir / "corpus.tsv";
  config.taxonomy = dir / "taxonomy.tsv";
  config.verb_hierarchy = dir / "verbs.tsv";
  config.output = output;
  return config;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files.emplace_back(fs::relative(entry.path(), dir).string(), read_text(entry.path()));
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace eeg::testing
