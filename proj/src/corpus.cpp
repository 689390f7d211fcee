#include "eeg/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "eeg/error.hpp"

namespace eeg {

namespace {

std::string index_key(std::string_view predicate, Pattern pattern, std::string_view signature) {
  std::string key;
  key.reserve(predicate.size() + signature.size() + 16);
  key.append(predicate).push_back('\t');
  key.append(pattern_code(pattern)).push_back('\t');
  key.append(signature);
  return key;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string linking_context_key(std::string_view verb, std::string_view adjective) {
  std::string key(verb);
  key.push_back('\x1f');
  key.append(adjective);
  return key;
}

Corpus Corpus::from_records(std::vector<Eventuality> records) {
  for (const auto& r : records) validate(r);
  std::stable_sort(records.begin(), records.end(), canonical_less);

  Corpus c;
  for (auto& r : records) {
    if (!c.eventualities_.empty() && same_content(c.eventualities_.back(), r)) {
      c.eventualities_.back().frequency += r.frequency;
      continue;
    }
    r.id = static_cast<EventualityId>(c.eventualities_.size());
    c.eventualities_.push_back(std::move(r));
  }

  c.decomposed_.reserve(c.eventualities_.size());
  c.signatures_.reserve(c.eventualities_.size());
  std::unordered_map<std::string, std::size_t> predicate_slot;
  std::vector<std::pair<Predicate, std::uint64_t>> predicates;

  for (const auto& e : c.eventualities_) {
    auto d = decompose(e);
    auto sig = d.args.signature();
    const auto& pred = d.predicate.surface();

    c.total_mass_ += e.frequency;
    c.signature_mass_[sig] += e.frequency;
    c.context_total_mass_ += e.frequency;
    c.context_signature_mass_[sig] += e.frequency;
    c.index_.emplace(index_key(pred, e.pattern, sig), e.id);

    auto [slot, inserted] = predicate_slot.try_emplace(pred, predicates.size());
    if (inserted) predicates.emplace_back(d.predicate, 0);
    predicates[slot->second].second += e.frequency;

    auto& ctx = c.contexts_[pred];
    ctx.mass += e.frequency;
    ctx.members.push_back(e.id);
    ctx.signature_mass[sig] += e.frequency;

    if (e.pattern == Pattern::SVA) {
      auto& link = c.contexts_[linking_context_key(e.token(TokenRole::V1), e.token(TokenRole::A1))];
      link.subject_only = true;
      link.mass += e.frequency;
      link.members.push_back(e.id);
      link.signature_mass[d.args[0].surface] += e.frequency;
      c.context_total_mass_ += e.frequency;
      c.context_signature_mass_[d.args[0].surface] += e.frequency;
    }

    c.signatures_.push_back(std::move(sig));
    c.decomposed_.push_back(std::move(d));
  }

  std::sort(predicates.begin(), predicates.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  c.predicates_ = std::move(predicates);
  return c;
}

std::string_view Corpus::context_signature(EventualityId id, const PredicateContext& ctx) const {
  if (ctx.subject_only) return decomposed_.at(id).args[0].surface;
  return signatures_.at(id);
}

std::uint64_t Corpus::predicate_frequency(std::string_view predicate) const {
  auto it = contexts_.find(std::string(predicate));
  return it == contexts_.end() ? 0 : it->second.mass;
}

std::uint64_t Corpus::signature_frequency(std::string_view signature) const {
  auto it = signature_mass_.find(std::string(signature));
  return it == signature_mass_.end() ? 0 : it->second;
}

std::uint64_t Corpus::context_signature_frequency(std::string_view signature) const {
  auto it = context_signature_mass_.find(std::string(signature));
  return it == context_signature_mass_.end() ? 0 : it->second;
}

std::uint64_t Corpus::cooccurrence(std::string_view predicate, std::string_view signature) const {
  const auto* ctx = context(predicate);
  if (!ctx) return 0;
  auto it = ctx->signature_mass.find(std::string(signature));
  return it == ctx->signature_mass.end() ? 0 : it->second;
}

std::span<const EventualityId> Corpus::with_predicate(std::string_view predicate) const {
  const auto* ctx = context(predicate);
  if (!ctx || ctx->subject_only) return {};
  return ctx->members;
}

const PredicateContext* Corpus::context(std::string_view key) const {
  auto it = contexts_.find(std::string(key));
  return it == contexts_.end() ? nullptr : &it->second;
}

std::optional<EventualityId> Corpus::find(std::string_view predicate, Pattern pattern,
                                          std::string_view signature) const {
  auto it = index_.find(index_key(predicate, pattern, signature));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EventualityId> Corpus::find(const Eventuality& e) const {
  auto d = decompose(e);
  return find(d.predicate.surface(), e.pattern, d.args.signature());
}

// ---------------------------------------------------------------------------

Eventuality parse_corpus_line(std::string_view line) {
  auto fields = split(line, '\t');
  if (fields.size() != 3) {
    throw LoadError("corpus", 0, "expected 3 tab-separated fields, got " +
                                     std::to_string(fields.size()));
  }
  auto pattern = parse_pattern(normalize_text(fields[0]));
  if (!pattern) throw LoadError("corpus", 0, "unknown pattern '" + std::string(fields[0]) + "'");

  std::vector<std::pair<TokenRole, std::string>> roles;
  for (auto item : split(fields[1], ';')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw LoadError("corpus", 0, "role item '" + std::string(item) + "' lacks '='");
    }
    auto role = parse_token_role(normalize_text(item.substr(0, eq)));
    if (!role) {
      throw LoadError("corpus", 0, "unknown role '" + std::string(item.substr(0, eq)) + "'");
    }
    roles.emplace_back(*role, std::string(item.substr(eq + 1)));
  }

  auto freq_text = fields[2];
  while (!freq_text.empty() && (freq_text.back() == '\r' || freq_text.back() == ' ')) {
    freq_text.remove_suffix(1);
  }
  std::int64_t freq = 0;
  auto [ptr, ec] = std::from_chars(freq_text.data(), freq_text.data() + freq_text.size(), freq);
  if (ec != std::errc() || ptr != freq_text.data() + freq_text.size()) {
    throw LoadError("corpus", 0, "bad frequency '" + std::string(fields[2]) + "'");
  }
  if (freq < 1) throw LoadError("corpus", 0, "frequency must be >= 1");

  try {
    return make_eventuality(*pattern, roles, static_cast<std::uint64_t>(freq));
  } catch (const DecompositionError& e) {
    throw LoadError("corpus", 0, e.what());
  }
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open corpus file");
  std::vector<Eventuality> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (view.find_first_not_of(" \t\r") == std::string_view::npos || view.front() == '#') continue;
    try {
      records.push_back(parse_corpus_line(view));
    } catch (const LoadError& e) {
      std::string msg = e.what();
      throw LoadError(path.string(), lineno, msg.substr(msg.find(": ") + 2));
    }
  }
  return Corpus::from_records(std::move(records));
}

std::string format_corpus_line(const Eventuality& e) {
  std::string out(pattern_code(e.pattern));
  out.push_back('\t');
  out += e.serialize_tokens();
  out.push_back('\t');
  out += std::to_string(e.frequency);
  return out;
}

}  // namespace eeg
