#include "eeg/rule_extraction.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "eeg/error.hpp"
#include "eeg/number_format.hpp"
#include "eeg/parallel.hpp"

namespace eeg {

namespace {

auto find_predicate(const std::vector<std::pair<Predicate, std::uint64_t>>& predicates,
                    std::string_view surface) {
  auto it = std::lower_bound(predicates.begin(), predicates.end(), surface,
                             [](const auto& entry, std::string_view s) {
                               return std::string_view(entry.first.surface()) < s;
                             });
  if (it != predicates.end() && it->first.surface() != surface) return predicates.end();
  return it;
}

}  // namespace

bool Vocabulary::has_term(std::string_view t) const {
  return std::binary_search(terms.begin(), terms.end(), t,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

bool Vocabulary::has_predicate(std::string_view surface) const {
  return find_predicate(predicates, surface) != predicates.end();
}

std::uint64_t Vocabulary::predicate_frequency(std::string_view surface) const {
  auto it = find_predicate(predicates, surface);
  return it == predicates.end() ? 0 : it->second;
}

const Predicate* Vocabulary::predicate(std::string_view surface) const {
  auto it = find_predicate(predicates, surface);
  return it == predicates.end() ? nullptr : &it->first;
}

Vocabulary collect_vocabulary(const Corpus& corpus) {
  Vocabulary v;
  for (const auto& d : corpus.decomposed()) {
    for (const auto& t : d.args.terms) v.terms.push_back(t.surface);
  }
  std::sort(v.terms.begin(), v.terms.end());
  v.terms.erase(std::unique(v.terms.begin(), v.terms.end()), v.terms.end());
  v.predicates = corpus.predicates();
  return v;
}

std::vector<ArgumentRule> build_argument_rules(const TaxonomyStore& store,
                                               std::span<const std::string> terms, std::size_t k,
                                               double tau, unsigned workers) {
  auto in_terms = [&terms](std::string_view t) {
    return std::binary_search(terms.begin(), terms.end(), t,
                              [](std::string_view a, std::string_view b) { return a < b; });
  };
  auto rules = parallel_collect<ArgumentRule>(
      terms.size(), workers, [&](std::size_t i, std::vector<ArgumentRule>& out) {
        const auto& t = terms[i];
        for (auto& [concept_name, prob] : conceptualize(store, t, k)) {
          if (concept_name == t || prob <= tau || !in_terms(concept_name)) continue;
          out.push_back({t, concept_name, prob});
        }
      });
  std::sort(rules.begin(), rules.end(), [](const ArgumentRule& a, const ArgumentRule& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  return rules;
}

ArgumentRuleIndex::ArgumentRuleIndex(std::span<const ArgumentRule> rules) {
  for (const auto& r : rules) {
    by_from_[r.from].push_back({r.to, r.score});
    ++size_;
  }
  for (auto& [from, targets] : by_from_) {
    std::sort(targets.begin(), targets.end(),
              [](const Target& a, const Target& b) { return a.to < b.to; });
  }
}

std::span<const ArgumentRuleIndex::Target> ArgumentRuleIndex::targets(std::string_view from) const {
  auto it = by_from_.find(std::string(from));
  if (it == by_from_.end()) return {};
  return it->second;
}

std::optional<double> ArgumentRuleIndex::score(std::string_view from, std::string_view to) const {
  auto ts = targets(from);
  auto it = std::lower_bound(ts.begin(), ts.end(), to,
                             [](const Target& t, std::string_view s) { return t.to < s; });
  if (it == ts.end() || it->to != to) return std::nullopt;
  return it->score;
}

std::vector<PredicateRule> build_predicate_rules(const VerbHierarchyStore& hierarchy,
                                                 const Vocabulary& vocabulary,
                                                 std::uint64_t min_pred_freq) {
  auto eligible = [&](std::string_view surface) {
    return vocabulary.predicate_frequency(surface) >= min_pred_freq && !hierarchy.is_light(surface);
  };

  std::vector<PredicateRule> rules;
  for (const auto& [pred, freq] : vocabulary.predicates) {
    if (freq < min_pred_freq || hierarchy.is_light(pred.surface())) continue;
    auto targets = hierarchy.generalizations(pred.surface());
    if (targets.empty() && pred.kind() == PredicateKind::VerbPrep &&
        !hierarchy.is_light(pred.head())) {
      targets = hierarchy.generalizations(pred.head());
    }
    for (const auto& general : targets) {
      if (general == pred.surface() || !eligible(general)) continue;
      rules.push_back({pred, *vocabulary.predicate(general), std::nullopt});
    }
  }
  std::sort(rules.begin(), rules.end(), [](const PredicateRule& a, const PredicateRule& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
  return rules;
}

std::vector<std::string> linking_verbs(const VerbHierarchyStore& hierarchy,
                                       const Vocabulary& vocabulary, std::uint64_t min_pred_freq) {
  std::vector<std::string> out;
  for (const auto& [pred, freq] : vocabulary.predicates) {
    if (pred.kind() != PredicateKind::Verb || freq < min_pred_freq) continue;
    if (hierarchy.is_light(pred.surface())) continue;
    if (hierarchy.has_edge(pred.surface(), "be")) out.push_back(pred.surface());
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_argument_rules(const std::filesystem::path& path, std::span<const ArgumentRule> rules) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : rules) out << r.from << '\t' << r.to << '\t' << format_double(r.score) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<ArgumentRule> read_argument_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open rule file");
  std::vector<ArgumentRule> rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    double score = 0;
    if (t2 == std::string::npos || !parse_double(std::string_view(line).substr(t2 + 1), score)) {
      throw LoadError(path.string(), lineno, "expected from<TAB>to<TAB>score");
    }
    rules.push_back({line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), score});
  }
  return rules;
}

void write_predicate_rules(const std::filesystem::path& path,
                           std::span<const PredicateRule> rules) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : rules) {
    out << r.from.surface() << '\t' << r.to.surface() << '\t'
        << (r.score ? format_double(*r.score) : std::string("nan")) << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

std::size_t count_rule_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open rule file");
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++n;
  }
  return n;
}

}  // namespace eeg
