#include "eeg/resources.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>

#include "eeg/core_model.hpp"
#include "eeg/error.hpp"

namespace eeg {

namespace {

constexpr std::array<std::string_view, 5> kDefaultLightVerbs = {"do", "give", "have", "make",
                                                                "take"};

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

std::string_view strip_cr(std::string_view s) {
  while (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

}  // namespace

void TaxonomyStore::add(std::string_view concept_name, std::string_view instance,
                        std::uint64_t frequency) {
  if (frequency == 0) throw Error("taxonomy frequency must be positive");
  auto& inst = entries_[std::string(instance)];
  auto it = std::lower_bound(
      inst.entries.begin(), inst.entries.end(), concept_name,
      [](const ConceptEntry& e, std::string_view name) { return e.concept_name < name; });
  if (it != inst.entries.end() && it->concept_name == concept_name) {
    it->frequency += frequency;
  } else {
    inst.entries.insert(it, ConceptEntry{std::string(concept_name), frequency});
  }
  inst.total += frequency;
}

std::span<const ConceptEntry> TaxonomyStore::concepts(std::string_view instance) const {
  auto it = entries_.find(std::string(instance));
  if (it == entries_.end()) return {};
  return it->second.entries;
}

std::uint64_t TaxonomyStore::total(std::string_view instance) const {
  auto it = entries_.find(std::string(instance));
  return it == entries_.end() ? 0 : it->second.total;
}

std::uint64_t TaxonomyStore::frequency(std::string_view instance,
                                       std::string_view concept_name) const {
  auto entries = concepts(instance);
  auto it = std::lower_bound(
      entries.begin(), entries.end(), concept_name,
      [](const ConceptEntry& e, std::string_view name) { return e.concept_name < name; });
  return (it != entries.end() && it->concept_name == concept_name) ? it->frequency : 0;
}

TaxonomyStore load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open taxonomy file");
  TaxonomyStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = strip_cr(line);
    if (blank(view)) continue;
    auto fields = split_tabs(view);
    if (fields.size() != 3) {
      throw LoadError(path.string(), lineno, "expected concept<TAB>instance<TAB>frequency");
    }
    auto concept_name = normalize_text(fields[0]);
    auto instance = normalize_text(fields[1]);
    if (concept_name.empty() || instance.empty()) {
      throw LoadError(path.string(), lineno, "empty concept or instance");
    }
    std::int64_t freq = 0;
    auto f = fields[2];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), freq);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw LoadError(path.string(), lineno, "bad frequency '" + std::string(f) + "'");
    }
    if (freq <= 0) throw LoadError(path.string(), lineno, "frequency must be positive");
    store.add(concept_name, instance, static_cast<std::uint64_t>(freq));
  }
  return store;
}

std::vector<std::pair<std::string, double>> conceptualize(const TaxonomyStore& store,
                                                          std::string_view term, std::size_t k) {
  auto entries = store.concepts(term);
  std::vector<const ConceptEntry*> order;
  order.reserve(entries.size());
  for (const auto& e : entries) order.push_back(&e);
  // Entries are already sorted by name, so a stable sort on frequency keeps
  // ties in lexicographic order.
  std::stable_sort(order.begin(), order.end(), [](const ConceptEntry* a, const ConceptEntry* b) {
    return a->frequency > b->frequency;
  });
  const auto total = static_cast<double>(store.total(term));
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) {
    out.emplace_back(order[i]->concept_name, static_cast<double>(order[i]->frequency) / total);
  }
  return out;
}

double term_entailment_prob(const TaxonomyStore& store, std::string_view t_i,
                            std::string_view t_j) {
  if (t_i == t_j) return 1.0;
  auto freq = store.frequency(t_i, t_j);
  if (freq == 0) return 0.0;
  return static_cast<double>(freq) / static_cast<double>(store.total(t_i));
}

// ---------------------------------------------------------------------------

void VerbHierarchyStore::add_edge(std::string_view specific, std::string_view general,
                                  VerbRelation relation) {
  if (specific == general) {
    throw LoadError("verb hierarchy", 0, "self-loop on '" + std::string(specific) + "'");
  }
  auto& target = edges_[std::string(specific)];
  auto it = std::lower_bound(target.general.begin(), target.general.end(), general);
  if (it != target.general.end() && *it == general) return;
  auto pos = it - target.general.begin();
  target.general.insert(it, std::string(general));
  target.relation.insert(target.relation.begin() + pos, relation);
  ++edge_count_;
}

void VerbHierarchyStore::add_light_verb(std::string_view lemma) {
  light_verbs_.insert(std::string(lemma));
}

std::span<const std::string> VerbHierarchyStore::generalizations(std::string_view specific) const {
  auto it = edges_.find(std::string(specific));
  if (it == edges_.end()) return {};
  return it->second.general;
}

bool VerbHierarchyStore::has_edge(std::string_view specific, std::string_view general) const {
  return relation(specific, general).has_value();
}

std::optional<VerbRelation> VerbHierarchyStore::relation(std::string_view specific,
                                                         std::string_view general) const {
  auto it = edges_.find(std::string(specific));
  if (it == edges_.end()) return std::nullopt;
  const auto& g = it->second.general;
  auto pos = std::lower_bound(g.begin(), g.end(), general);
  if (pos == g.end() || *pos != general) return std::nullopt;
  return it->second.relation[static_cast<std::size_t>(pos - g.begin())];
}

bool VerbHierarchyStore::is_light(std::string_view lemma) const {
  return light_verbs_.find(std::string(lemma)) != light_verbs_.end();
}

std::span<const std::string_view> default_light_verbs() { return kDefaultLightVerbs; }

VerbHierarchyStore load_verb_hierarchy(const std::filesystem::path& path,
                                       const std::filesystem::path& light_verb_path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open verb hierarchy file");
  VerbHierarchyStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = strip_cr(line);
    if (blank(view)) continue;
    auto fields = split_tabs(view);
    if (fields.size() != 3) {
      throw LoadError(path.string(), lineno, "expected specific<TAB>general<TAB>kind");
    }
    auto specific = normalize_text(fields[0]);
    auto general = normalize_text(fields[1]);
    auto kind = normalize_text(fields[2]);
    if (specific.empty() || general.empty()) {
      throw LoadError(path.string(), lineno, "empty verb");
    }
    VerbRelation relation;
    if (kind == "entail") {
      relation = VerbRelation::Entail;
    } else if (kind == "hypernym") {
      relation = VerbRelation::Hypernym;
    } else {
      throw LoadError(path.string(), lineno, "unknown relation '" + std::string(fields[2]) + "'");
    }
    if (specific == general) {
      throw LoadError(path.string(), lineno, "self-loop on '" + specific + "'");
    }
    store.add_edge(specific, general, relation);
  }

  if (light_verb_path.empty()) {
    for (auto v : kDefaultLightVerbs) store.add_light_verb(v);
  } else {
    std::ifstream lin(light_verb_path);
    if (!lin) throw LoadError(light_verb_path.string(), 0, "cannot open light-verb file");
    while (std::getline(lin, line)) {
      auto lemma = normalize_text(line);
      if (!lemma.empty()) store.add_light_verb(lemma);
    }
  }
  return store;
}

}  // namespace eeg
