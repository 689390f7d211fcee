#include "eeg/core_model.hpp"

#include <algorithm>
#include <cctype>

#include "eeg/error.hpp"

namespace eeg {

namespace {

constexpr std::array<std::string_view, 7> kPatternCodes = {
    "s-v", "s-v-o", "s-v-p-o", "s-v-o-p-o", "s-v-a", "s-be-a", "s-be-a-p-o"};

constexpr std::array<std::string_view, kTokenRoleCount> kRoleNames = {"n1", "v1", "n2",
                                                                      "p1", "n3", "a1"};

using R = TokenRole;
constexpr std::array<R, 2> kRolesSV = {R::N1, R::V1};
constexpr std::array<R, 3> kRolesSVO = {R::N1, R::V1, R::N2};
constexpr std::array<R, 4> kRolesSVPO = {R::N1, R::V1, R::P1, R::N2};
constexpr std::array<R, 5> kRolesSVOPO = {R::N1, R::V1, R::N2, R::P1, R::N3};
constexpr std::array<R, 3> kRolesSVA = {R::N1, R::V1, R::A1};
constexpr std::array<R, 2> kRolesSBeA = {R::N1, R::A1};
constexpr std::array<R, 4> kRolesSBeAPO = {R::N1, R::A1, R::P1, R::N2};

constexpr std::size_t idx(TokenRole r) { return static_cast<std::size_t>(r); }

bool has_role(Pattern p, TokenRole r) {
  auto roles = pattern_roles(p);
  return std::find(roles.begin(), roles.end(), r) != roles.end();
}

bool reserved_char(char c) {
  return c == '\t' || c == '\n' || c == '\r' || c == ';' || c == '=' || c == kSignatureSeparator ||
         c == '\x1f';
}

struct TypeRow {
  EntailmentType type;
  Pattern premise;
  Pattern hypothesis;
  std::string_view label;
};

constexpr std::array<TypeRow, kEntailmentTypeCount> kTypeRows = {{
    {EntailmentType::SV_SV, Pattern::SV, Pattern::SV, "s-v \xE2\x8A\xA8 s-v"},
    {EntailmentType::SVO_SVO, Pattern::SVO, Pattern::SVO, "s-v-o \xE2\x8A\xA8 s-v-o"},
    {EntailmentType::SVPO_SVPO, Pattern::SVPO, Pattern::SVPO, "s-v-p-o \xE2\x8A\xA8 s-v-p-o"},
    {EntailmentType::SVOPO_SVO, Pattern::SVOPO, Pattern::SVO, "s-v-o-p-o \xE2\x8A\xA8 s-v-o"},
    {EntailmentType::SVPO_SVO, Pattern::SVPO, Pattern::SVO, "s-v-p-o \xE2\x8A\xA8 s-v-o"},
    {EntailmentType::SVO_SVPO, Pattern::SVO, Pattern::SVPO, "s-v-o \xE2\x8A\xA8 s-v-p-o"},
    {EntailmentType::SVOPO_SVOPO, Pattern::SVOPO, Pattern::SVOPO,
     "s-v-o-p-o \xE2\x8A\xA8 s-v-o-p-o"},
    {EntailmentType::SVA_SBeA, Pattern::SVA, Pattern::SBeA, "s-v-a \xE2\x8A\xA8 s-be-a"},
    {EntailmentType::SBeAPO_SBeA, Pattern::SBeAPO, Pattern::SBeA,
     "s-be-a-p-o \xE2\x8A\xA8 s-be-a"},
    {EntailmentType::SBeAPO_SBeAPO, Pattern::SBeAPO, Pattern::SBeAPO,
     "s-be-a-p-o \xE2\x8A\xA8 s-be-a-p-o"},
}};

constexpr std::array<EntailmentType, kEntailmentTypeCount> kAllTypes = {
    EntailmentType::SV_SV,       EntailmentType::SVO_SVO,     EntailmentType::SVPO_SVPO,
    EntailmentType::SVOPO_SVO,   EntailmentType::SVPO_SVO,    EntailmentType::SVO_SVPO,
    EntailmentType::SVOPO_SVOPO, EntailmentType::SVA_SBeA,    EntailmentType::SBeAPO_SBeA,
    EntailmentType::SBeAPO_SBeAPO};

std::vector<ArgumentRole> argument_roles(Pattern p) {
  using A = ArgumentRole;
  switch (p) {
    case Pattern::SV:
    case Pattern::SBeA:
      return {A::Subject};
    case Pattern::SVO:
    case Pattern::SVPO:
      return {A::Subject, A::Object};
    case Pattern::SVOPO:
      return {A::Subject, A::Object, A::PrepObject};
    case Pattern::SVA:
      return {A::Subject, A::Adjective};
    case Pattern::SBeAPO:
      return {A::Subject, A::PrepObject};
  }
  return {};
}

std::array<std::array<std::optional<AlignmentPlan>, 7>, 7> build_plans() {
  std::array<std::array<std::optional<AlignmentPlan>, 7>, 7> plans{};
  for (const auto& row : kTypeRows) {
    auto premise_roles = argument_roles(row.premise);
    auto hypothesis_roles = argument_roles(row.hypothesis);
    AlignmentPlan plan;
    for (auto role : hypothesis_roles) {
      auto it = std::find(premise_roles.begin(), premise_roles.end(), role);
      plan.premise_index[plan.size++] = static_cast<std::uint8_t>(it - premise_roles.begin());
    }
    plans[static_cast<std::size_t>(row.premise)][static_cast<std::size_t>(row.hypothesis)] = plan;
  }
  return plans;
}

}  // namespace

std::string_view pattern_code(Pattern p) { return kPatternCodes[static_cast<std::size_t>(p)]; }

std::optional<Pattern> parse_pattern(std::string_view code) {
  for (std::size_t i = 0; i < kPatternCodes.size(); ++i) {
    if (kPatternCodes[i] == code) return static_cast<Pattern>(i);
  }
  return std::nullopt;
}

std::string_view token_role_name(TokenRole r) { return kRoleNames[idx(r)]; }

std::optional<TokenRole> parse_token_role(std::string_view name) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == name) return static_cast<TokenRole>(i);
  }
  return std::nullopt;
}

std::span<const TokenRole> pattern_roles(Pattern p) {
  switch (p) {
    case Pattern::SV: return kRolesSV;
    case Pattern::SVO: return kRolesSVO;
    case Pattern::SVPO: return kRolesSVPO;
    case Pattern::SVOPO: return kRolesSVOPO;
    case Pattern::SVA: return kRolesSVA;
    case Pattern::SBeA: return kRolesSBeA;
    case Pattern::SBeAPO: return kRolesSBeAPO;
  }
  return {};
}

std::string normalize_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

std::string Eventuality::text() const {
  std::string out;
  auto append = [&out](std::string_view w) {
    if (!out.empty()) out.push_back(' ');
    out.append(w);
  };
  for (auto role : pattern_roles(pattern)) {
    append(token(role));
    // Copular patterns carry "be" implicitly between subject and adjective.
    if (role == TokenRole::N1 && (pattern == Pattern::SBeA || pattern == Pattern::SBeAPO)) {
      append("be");
    }
  }
  return out;
}

std::string Eventuality::serialize_tokens() const {
  std::string out;
  for (auto role : pattern_roles(pattern)) {
    if (!out.empty()) out.push_back(';');
    out.append(token_role_name(role));
    out.push_back('=');
    out.append(token(role));
  }
  return out;
}

void validate(const Eventuality& e) {
  for (std::size_t i = 0; i < kTokenRoleCount; ++i) {
    auto role = static_cast<TokenRole>(i);
    bool expected = has_role(e.pattern, role);
    bool present = !e.tokens[i].empty();
    if (expected && !present) {
      throw DecompositionError("missing role '" + std::string(token_role_name(role)) +
                               "' for pattern " + std::string(pattern_code(e.pattern)));
    }
    if (!expected && present) {
      throw DecompositionError("extra role '" + std::string(token_role_name(role)) +
                               "' for pattern " + std::string(pattern_code(e.pattern)));
    }
    if (present && std::any_of(e.tokens[i].begin(), e.tokens[i].end(), reserved_char)) {
      throw DecompositionError("role '" + std::string(token_role_name(role)) +
                               "' contains a reserved character");
    }
  }
  if (e.frequency < 1) throw DecompositionError("frequency must be >= 1");
}

Eventuality make_eventuality(Pattern pattern,
                             std::span<const std::pair<TokenRole, std::string>> roles,
                             std::uint64_t frequency) {
  Eventuality e;
  e.pattern = pattern;
  e.frequency = frequency;
  for (const auto& [role, token] : roles) {
    auto& slot = e.tokens[idx(role)];
    if (!slot.empty()) {
      throw DecompositionError("duplicate role '" + std::string(token_role_name(role)) + "'");
    }
    slot = normalize_text(token);
    if (slot.empty()) {
      throw DecompositionError("empty token for role '" + std::string(token_role_name(role)) +
                               "'");
    }
  }
  validate(e);
  return e;
}

Eventuality make_eventuality(Pattern pattern,
                             std::initializer_list<std::pair<TokenRole, std::string>> roles,
                             std::uint64_t frequency) {
  return make_eventuality(pattern, std::span(roles.begin(), roles.size()), frequency);
}

bool canonical_less(const Eventuality& a, const Eventuality& b) {
  if (a.pattern != b.pattern) return a.pattern < b.pattern;
  return a.tokens < b.tokens;
}

bool same_content(const Eventuality& a, const Eventuality& b) {
  return a.pattern == b.pattern && a.tokens == b.tokens;
}

// ---------------------------------------------------------------------------

Predicate Predicate::verb(std::string_view lemma) {
  return Predicate(std::string(lemma), PredicateKind::Verb, std::string::npos);
}

Predicate Predicate::verb_prep(std::string_view verb, std::string_view prep) {
  std::string s;
  s.reserve(verb.size() + prep.size() + 1);
  s.append(verb).push_back(kCompoundSeparator);
  s.append(prep);
  return Predicate(std::move(s), PredicateKind::VerbPrep, verb.size());
}

Predicate Predicate::be_adj(std::string_view adjective) {
  std::string s = "be";
  s.push_back(kCompoundSeparator);
  s.append(adjective);
  return Predicate(std::move(s), PredicateKind::BeAdj, 2);
}

std::string_view Predicate::head() const {
  std::string_view s = surface_;
  return split_ == std::string::npos ? s : s.substr(0, split_);
}

std::string_view Predicate::tail() const {
  std::string_view s = surface_;
  return split_ == std::string::npos ? std::string_view() : s.substr(split_ + 1);
}

std::string ArgumentSet::signature() const {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out.push_back(kSignatureSeparator);
    out.append(t.surface);
  }
  return out;
}

std::size_t argument_count(Pattern p) { return argument_roles(p).size(); }

DecomposedEventuality decompose(const Eventuality& e) {
  validate(e);
  using A = ArgumentRole;
  auto tok = [&e](TokenRole r) -> const std::string& { return e.token(r); };
  auto compound = [](std::string_view a, std::string_view b) {
    std::string s(a);
    s.push_back(kCompoundSeparator);
    s.append(b);
    return s;
  };

  DecomposedEventuality d;
  d.source = e.id;
  d.frequency = e.frequency;
  d.pattern = e.pattern;
  auto& terms = d.args.terms;
  switch (e.pattern) {
    case Pattern::SV:
      d.predicate = Predicate::verb(tok(R::V1));
      terms = {{tok(R::N1), A::Subject}};
      break;
    case Pattern::SVO:
      d.predicate = Predicate::verb(tok(R::V1));
      terms = {{tok(R::N1), A::Subject}, {tok(R::N2), A::Object}};
      break;
    case Pattern::SVPO:
      // The preposition moves into the predicate; its noun fills the object slot.
      d.predicate = Predicate::verb_prep(tok(R::V1), tok(R::P1));
      terms = {{tok(R::N1), A::Subject}, {tok(R::N2), A::Object}};
      break;
    case Pattern::SVOPO:
      d.predicate = Predicate::verb(tok(R::V1));
      terms = {{tok(R::N1), A::Subject},
               {tok(R::N2), A::Object},
               {compound(tok(R::P1), tok(R::N3)), A::PrepObject}};
      break;
    case Pattern::SVA:
      d.predicate = Predicate::verb(tok(R::V1));
      terms = {{tok(R::N1), A::Subject}, {tok(R::A1), A::Adjective}};
      break;
    case Pattern::SBeA:
      d.predicate = Predicate::be_adj(tok(R::A1));
      terms = {{tok(R::N1), A::Subject}};
      break;
    case Pattern::SBeAPO:
      d.predicate = Predicate::be_adj(tok(R::A1));
      terms = {{tok(R::N1), A::Subject}, {compound(tok(R::P1), tok(R::N2)), A::PrepObject}};
      break;
  }
  return d;
}

// ---------------------------------------------------------------------------

std::span<const EntailmentType> all_entailment_types() { return kAllTypes; }

std::string_view type_label(EntailmentType t) {
  return kTypeRows[static_cast<std::size_t>(t)].label;
}

std::optional<EntailmentType> parse_type_label(std::string_view label) {
  for (const auto& row : kTypeRows) {
    if (row.label == label) return row.type;
  }
  return std::nullopt;
}

std::optional<EntailmentType> entailment_type(Pattern premise, Pattern hypothesis) {
  for (const auto& row : kTypeRows) {
    if (row.premise == premise && row.hypothesis == hypothesis) return row.type;
  }
  return std::nullopt;
}

Pattern premise_pattern(EntailmentType t) { return kTypeRows[static_cast<std::size_t>(t)].premise; }

Pattern hypothesis_pattern(EntailmentType t) {
  return kTypeRows[static_cast<std::size_t>(t)].hypothesis;
}

const AlignmentPlan& alignment_plan(Pattern premise, Pattern hypothesis) {
  static const auto plans = build_plans();
  const auto& plan = plans[static_cast<std::size_t>(premise)][static_cast<std::size_t>(hypothesis)];
  if (!plan) {
    throw AlignmentError("pattern pair " + std::string(pattern_code(premise)) + " => " +
                         std::string(pattern_code(hypothesis)) +
                         " is not an admissible entailment type");
  }
  return *plan;
}

std::vector<AlignedPair> align(const ArgumentSet& premise_args, Pattern premise,
                               const ArgumentSet& hypothesis_args, Pattern hypothesis) {
  const auto& plan = alignment_plan(premise, hypothesis);
  if (premise_args.size() != argument_count(premise) ||
      hypothesis_args.size() != argument_count(hypothesis)) {
    throw AlignmentError("argument set size does not match its pattern");
  }
  std::vector<AlignedPair> out;
  out.reserve(plan.size);
  for (std::uint8_t h = 0; h < plan.size; ++h) {
    out.push_back({premise_args[plan.premise_index[h]], hypothesis_args[h]});
  }
  return out;
}

std::string_view provenance_name(Provenance p) {
  return p == Provenance::Local ? "local" : "global";
}

std::optional<Provenance> parse_provenance(std::string_view name) {
  if (name == "local") return Provenance::Local;
  if (name == "global") return Provenance::Global;
  return std::nullopt;
}

}  // namespace eeg
