#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eeg {

// ---------------------------------------------------------------------------
// Patterns and role-labeled tokens
// ---------------------------------------------------------------------------

/// The seven eventuality patterns, in the order of the decomposition table.
enum class Pattern : std::uint8_t { SV, SVO, SVPO, SVOPO, SVA, SBeA, SBeAPO };

inline constexpr std::array<Pattern, 7> kAllPatterns = {
    Pattern::SV,  Pattern::SVO,  Pattern::SVPO,  Pattern::SVOPO,
    Pattern::SVA, Pattern::SBeA, Pattern::SBeAPO};

std::string_view pattern_code(Pattern p);
std::optional<Pattern> parse_pattern(std::string_view code);

/// Token slots of a pattern: subject n1, verb v1, object n2, preposition p1,
/// prep-object n3 (or n2 when there is no direct object), adjective a1.
enum class TokenRole : std::uint8_t { N1, V1, N2, P1, N3, A1 };
inline constexpr std::size_t kTokenRoleCount = 6;

std::string_view token_role_name(TokenRole r);
std::optional<TokenRole> parse_token_role(std::string_view name);

/// Roles populated by `p`, in surface order ("n1 v1 n2 p1 n3" for s-v-o-p-o).
std::span<const TokenRole> pattern_roles(Pattern p);

/// Lowercase, trim and collapse internal whitespace to single spaces.
std::string normalize_text(std::string_view s);

using EventualityId = std::uint32_t;

struct Eventuality {
  EventualityId id = 0;
  Pattern pattern = Pattern::SV;
  std::array<std::string, kTokenRoleCount> tokens{};
  std::uint64_t frequency = 1;

  const std::string& token(TokenRole r) const { return tokens[static_cast<std::size_t>(r)]; }

  /// Surface form, e.g. "he post it on youtube" or "food be good".
  std::string text() const;

  /// "n1=he;v1=post;n2=it;p1=on;n3=youtube", roles in surface order.
  std::string serialize_tokens() const;

  friend bool operator==(const Eventuality&, const Eventuality&) = default;
};

/// Builds a normalized, validated eventuality. Throws DecompositionError on a
/// missing, extra or duplicated role, an empty token, or frequency 0.
Eventuality make_eventuality(Pattern pattern,
                             std::span<const std::pair<TokenRole, std::string>> roles,
                             std::uint64_t frequency = 1);
Eventuality make_eventuality(Pattern pattern,
                             std::initializer_list<std::pair<TokenRole, std::string>> roles,
                             std::uint64_t frequency = 1);

/// Throws DecompositionError naming the offending role if `e` is malformed.
void validate(const Eventuality& e);

/// Ordering by (pattern, tokens); ignores id and frequency.
bool canonical_less(const Eventuality& a, const Eventuality& b);
bool same_content(const Eventuality& a, const Eventuality& b);

// ---------------------------------------------------------------------------
// Decomposed form
// ---------------------------------------------------------------------------

enum class PredicateKind : std::uint8_t { Verb, VerbPrep, BeAdj };

inline constexpr char kCompoundSeparator = '-';

/// A verb lemma, or a two-lemma compound ("take-over", "be-red").
class Predicate {
 public:
  Predicate() = default;

  static Predicate verb(std::string_view lemma);
  static Predicate verb_prep(std::string_view verb, std::string_view prep);
  static Predicate be_adj(std::string_view adjective);

  const std::string& surface() const noexcept { return surface_; }
  PredicateKind kind() const noexcept { return kind_; }

  /// The verb lemma ("take" for "take-over", "be" for "be-red").
  std::string_view head() const;
  /// Preposition or adjective; empty for a plain verb.
  std::string_view tail() const;

  friend auto operator<=>(const Predicate&, const Predicate&) = default;
  friend bool operator==(const Predicate&, const Predicate&) = default;

 private:
  Predicate(std::string surface, PredicateKind kind, std::size_t split)
      : surface_(std::move(surface)), kind_(kind), split_(split) {}

  std::string surface_;
  PredicateKind kind_ = PredicateKind::Verb;
  std::size_t split_ = std::string::npos;
};

enum class ArgumentRole : std::uint8_t { Subject, Object, PrepObject, Adjective };

struct ArgumentTerm {
  std::string surface;
  ArgumentRole role = ArgumentRole::Subject;

  friend auto operator<=>(const ArgumentTerm&, const ArgumentTerm&) = default;
  friend bool operator==(const ArgumentTerm&, const ArgumentTerm&) = default;
};

inline constexpr char kSignatureSeparator = '|';

/// Role-ordered argument terms, 1 to 3 of them.
struct ArgumentSet {
  std::vector<ArgumentTerm> terms;

  std::size_t size() const noexcept { return terms.size(); }
  const ArgumentTerm& operator[](std::size_t i) const { return terms[i]; }

  /// Surfaces joined by '|', e.g. "boy|food".
  std::string signature() const;

  friend bool operator==(const ArgumentSet&, const ArgumentSet&) = default;
};

struct DecomposedEventuality {
  Predicate predicate;
  ArgumentSet args;
  EventualityId source = 0;
  std::uint64_t frequency = 0;
  Pattern pattern = Pattern::SV;

  friend bool operator==(const DecomposedEventuality&, const DecomposedEventuality&) = default;
};

/// Splits an eventuality into (predicate, argument set) following its
/// pattern's row: v-p compound for s-v-p-o, be-a compound for the two
/// copular patterns, p-n compound as the third term of s-v-o-p-o.
DecomposedEventuality decompose(const Eventuality& e);

/// Number of argument terms a pattern decomposes into.
std::size_t argument_count(Pattern p);

// ---------------------------------------------------------------------------
// Entailment types and alignment
// ---------------------------------------------------------------------------

/// The ten admissible (premise pattern, hypothesis pattern) pairs, in the
/// row order of the statistics table.
enum class EntailmentType : std::uint8_t {
  SV_SV,
  SVO_SVO,
  SVPO_SVPO,
  SVOPO_SVO,
  SVPO_SVO,
  SVO_SVPO,
  SVOPO_SVOPO,
  SVA_SBeA,
  SBeAPO_SBeA,
  SBeAPO_SBeAPO,
};
inline constexpr std::size_t kEntailmentTypeCount = 10;

std::span<const EntailmentType> all_entailment_types();
std::string_view type_label(EntailmentType t);
std::optional<EntailmentType> parse_type_label(std::string_view label);
std::optional<EntailmentType> entailment_type(Pattern premise, Pattern hypothesis);
Pattern premise_pattern(EntailmentType t);
Pattern hypothesis_pattern(EntailmentType t);

/// For each hypothesis argument position, the premise position it pairs with.
struct AlignmentPlan {
  std::array<std::uint8_t, 3> premise_index{};
  std::uint8_t size = 0;
};

/// Role-wise pairing for an admissible pattern pair; premise-side terms with
/// no counterpart (the p-o term in the size-mismatched types) are dropped.
/// Throws AlignmentError for a pair outside the ten types.
const AlignmentPlan& alignment_plan(Pattern premise, Pattern hypothesis);

struct AlignedPair {
  ArgumentTerm premise;
  ArgumentTerm hypothesis;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

std::vector<AlignedPair> align(const ArgumentSet& premise_args, Pattern premise,
                               const ArgumentSet& hypothesis_args, Pattern hypothesis);

// ---------------------------------------------------------------------------
// Scored edges
// ---------------------------------------------------------------------------

enum class Provenance : std::uint8_t { Local, Global };

std::string_view provenance_name(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view name);

struct ScoredEdge {
  EventualityId from = 0;
  EventualityId to = 0;
  double arg_score = 0.0;    // L^a
  double pred_score = 0.0;   // L^p
  double penalty = 0.0;      // f, clamped to [0, 1]
  double local_score = 0.0;  // L^e = sqrt(L^p * f * L^a)
  Provenance provenance = Provenance::Local;
  EntailmentType type = EntailmentType::SV_SV;

  friend bool operator==(const ScoredEdge&, const ScoredEdge&) = default;
};

}  // namespace eeg
