#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eeg/core_model.hpp"

namespace eeg {

/// A predicate-like context used for distributional features: the
/// eventualities it occurs with and the mass of each argument signature.
struct PredicateContext {
  std::uint64_t mass = 0;
  /// Member eventualities, ascending by id.
  std::vector<EventualityId> members;
  std::unordered_map<std::string, std::uint64_t> signature_mass;
  /// Members contribute only their subject term as signature (linking contexts).
  bool subject_only = false;
};

/// Frozen, decomposed corpus with the co-occurrence statistics every scoring
/// stage reads. Eventualities are deduplicated (frequencies summed), sorted
/// canonically and numbered 0..n-1, so ids do not depend on input order.
class Corpus {
 public:
  Corpus() = default;

  /// Throws DecompositionError for malformed records.
  static Corpus from_records(std::vector<Eventuality> records);

  std::size_t size() const noexcept { return eventualities_.size(); }
  bool empty() const noexcept { return eventualities_.empty(); }

  std::span<const Eventuality> eventualities() const { return eventualities_; }
  std::span<const DecomposedEventuality> decomposed() const { return decomposed_; }
  const Eventuality& eventuality(EventualityId id) const { return eventualities_.at(id); }
  const DecomposedEventuality& decomposed(EventualityId id) const { return decomposed_.at(id); }
  const std::string& signature(EventualityId id) const { return signatures_.at(id); }

  /// Signature under which `id` is counted in its context (subject only for
  /// linking contexts).
  std::string_view context_signature(EventualityId id, const PredicateContext& ctx) const;

  /// Total frequency mass N.
  std::uint64_t total_mass() const noexcept { return total_mass_; }
  std::uint64_t predicate_frequency(std::string_view predicate) const;
  std::uint64_t signature_frequency(std::string_view signature) const;
  std::uint64_t cooccurrence(std::string_view predicate, std::string_view signature) const;

  /// Marginals over all (context, signature) observations, linking contexts
  /// included. Equal to total_mass / signature_frequency when the corpus has
  /// no s-v-a records.
  std::uint64_t context_total_mass() const noexcept { return context_total_mass_; }
  std::uint64_t context_signature_frequency(std::string_view signature) const;

  /// Eventualities whose predicate surface is `predicate`, ascending by id.
  std::span<const EventualityId> with_predicate(std::string_view predicate) const;

  /// Context of a predicate surface, or of a linking phrase (see
  /// `linking_context_key`). nullptr when absent.
  const PredicateContext* context(std::string_view key) const;

  /// Exact lookup by (predicate, pattern, signature).
  std::optional<EventualityId> find(std::string_view predicate, Pattern pattern,
                                    std::string_view signature) const;

  /// Lookup by content; nullopt when the eventuality is not in the corpus.
  std::optional<EventualityId> find(const Eventuality& e) const;

  /// Predicates with their summed frequencies, sorted by surface.
  const std::vector<std::pair<Predicate, std::uint64_t>>& predicates() const { return predicates_; }

 private:
  std::vector<Eventuality> eventualities_;
  std::vector<DecomposedEventuality> decomposed_;
  std::vector<std::string> signatures_;
  std::vector<std::pair<Predicate, std::uint64_t>> predicates_;
  std::unordered_map<std::string, PredicateContext> contexts_;
  std::unordered_map<std::string, std::uint64_t> signature_mass_;
  std::unordered_map<std::string, EventualityId> index_;
  std::unordered_map<std::string, std::uint64_t> context_signature_mass_;
  std::uint64_t total_mass_ = 0;
  std::uint64_t context_total_mass_ = 0;
};

/// Context key of the predicative phrase "v1 a1" of an s-v-a eventuality,
/// compared against the be-a1 context for the s-v-a => s-be-a type.
std::string linking_context_key(std::string_view verb, std::string_view adjective);

/// Parses one corpus line: pattern<TAB>role=token;role=token...<TAB>frequency.
/// Throws LoadError (line 0) on malformed content.
Eventuality parse_corpus_line(std::string_view line);

/// Reads a corpus file; blank lines and lines starting with '#' are skipped.
/// Errors carry the line number.
Corpus load_corpus(const std::filesystem::path& path);

/// Serializes one record in the corpus line format.
std::string format_corpus_line(const Eventuality& e);

}  // namespace eeg
