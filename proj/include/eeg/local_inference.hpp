#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eeg/core_model.hpp"
#include "eeg/corpus.hpp"
#include "eeg/resources.hpp"
#include "eeg/rule_extraction.hpp"

namespace eeg {

// ---------------------------------------------------------------------------
// Argument sets
// ---------------------------------------------------------------------------

/// 1 - prod(1 - p_l): probability that at least one of independent events holds.
double noisy_or(std::span<const double> probabilities);

/// L^a over aligned term pairs, each scored by term_entailment_prob.
/// Throws ScoringError on an empty alignment.
double argument_set_score(const ArgumentSet& premise, const ArgumentSet& hypothesis,
                          std::span<const AlignedPair> aligned, const TaxonomyStore& store);

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

/// max(0, ln(N * c(p,a) / (c(p) * c(a)))); 0 when any count is 0.
double pmi(std::uint64_t joint, std::uint64_t predicate_count, std::uint64_t signature_count,
           std::uint64_t total);

/// PMI of a context key (predicate surface or linking key) and a signature.
double pmi(const Corpus& corpus, std::string_view context_key, std::string_view signature);

/// Sparse nonnegative weights keyed by argument signature. Ordered so that
/// sums are accumulated in a fixed order.
using FeatureVector = std::map<std::string, double, std::less<>>;

/// Features of `p_i` in the context of the pair (p_i, p_j): signatures shared
/// with p_j, plus every signature a_k of p_i with L^a(a_i => a_k) > lambda for
/// some shared a_i (one augmentation pass). Weighted by PMI.
FeatureVector build_feature_vector(const Corpus& corpus, std::string_view p_i,
                                   std::string_view p_j, double lambda,
                                   const TaxonomyStore& store);

double lin_similarity(const FeatureVector& u, const FeatureVector& v);
/// Share of u's weight that is covered by v's features.
double cover(const FeatureVector& u, const FeatureVector& v);
/// Balanced inclusion sqrt(Lin(u,v) * Cover(u->v)); 0 if either side has no weight.
double binc(const FeatureVector& u, const FeatureVector& v);

/// L^p: 1 for identical predicates, else BInc of the two pair-contextual vectors.
double predicate_score(const Corpus& corpus, std::string_view p_i, std::string_view p_j,
                       double lambda, const TaxonomyStore& store);

/// Fills in the score of every rule. Order of `rules` is preserved.
void score_predicate_rules(std::vector<PredicateRule>& rules, const Corpus& corpus, double lambda,
                           const TaxonomyStore& store, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Eventualities
// ---------------------------------------------------------------------------

/// P(a_i|p_i) / P(a_j|p_j), unclamped. Throws ScoringError on zero frequency.
double penalty_raw(std::uint64_t freq_e_i, std::uint64_t freq_p_i, std::uint64_t freq_e_j,
                   std::uint64_t freq_p_j);
double penalty_raw(const Corpus& corpus, EventualityId e_i, EventualityId e_j);
/// min(1, penalty_raw).
double penalty(const Corpus& corpus, EventualityId e_i, EventualityId e_j);

/// L^e = sqrt(L^p * f * L^a). Throws ScoringError for factors outside [0,1].
double local_score(double pred_score, double penalty, double arg_score);

// ---------------------------------------------------------------------------
// Candidate generation
// ---------------------------------------------------------------------------

/// A hypothesis eventuality whose aligned terms are each identical to, or a
/// TR generalization of, the premise's terms.
struct Candidate {
  EventualityId premise = 0;
  EventualityId hypothesis = 0;
  EntailmentType type = EntailmentType::SV_SV;
  std::array<double, 3> term_scores{};
  std::uint8_t size = 0;
  /// Every aligned pair is identical (a_l == a_r).
  bool identical_args = false;

  std::span<const double> scores() const { return {term_scores.data(), size}; }
};

/// Enumerates candidates by substituting TR targets into the premise's
/// aligned terms and probing the corpus index. Linking (s-v-a => s-be-a)
/// candidates are produced by `for_each_linking` only.
class CandidateGenerator {
 public:
  CandidateGenerator(const Corpus& corpus, const ArgumentRuleIndex& rules)
      : corpus_(corpus), rules_(rules) {}

  /// Calls `sink(const Candidate&)` for each hypothesis with predicate
  /// `target`. Returns the number of index probes (candidate checks).
  template <class Sink>
  std::uint64_t for_each(EventualityId premise, std::string_view target, Sink&& sink) const;

  /// Same, for the s-v-a premise against "be-<adjective>".
  template <class Sink>
  std::uint64_t for_each_linking(EventualityId premise, Sink&& sink) const;

 private:
  template <class Sink>
  std::uint64_t expand(EventualityId premise, std::string_view target, Pattern hypothesis,
                       EntailmentType type, Sink& sink) const;

  const Corpus& corpus_;
  const ArgumentRuleIndex& rules_;
};

struct LocalParams {
  double lambda = 0.5;
  double tau_e = 0.2;
  unsigned workers = 1;
};

struct LocalResult {
  /// Sorted by (from, to); provenance local.
  std::vector<ScoredEdge> edges;
  std::uint64_t candidate_checks = 0;
};

/// Scores an accepted candidate into an edge (provenance left as local).
ScoredEdge score_candidate(const Corpus& corpus, const Candidate& c, double pred_score);

/// Pairwise local inference: every same-predicate pair, every scored PR rule,
/// and every linking-verb pair; candidates with L^e > tau_e become edges.
LocalResult infer_local_edges(const Corpus& corpus, const ArgumentRuleIndex& argument_rules,
                              std::span<const PredicateRule> predicate_rules,
                              std::span<const std::string> linking_verbs,
                              const TaxonomyStore& store, const LocalParams& params);

// ---------------------------------------------------------------------------

namespace detail {

inline bool kind_fits(Pattern hypothesis, PredicateKind kind) {
  switch (hypothesis) {
    case Pattern::SVPO: return kind == PredicateKind::VerbPrep;
    case Pattern::SBeA:
    case Pattern::SBeAPO: return kind == PredicateKind::BeAdj;
    default: return kind == PredicateKind::Verb;
  }
}

}  // namespace detail

template <class Sink>
std::uint64_t CandidateGenerator::for_each(EventualityId premise, std::string_view target,
                                           Sink&& sink) const {
  const auto& d = corpus_.decomposed(premise);
  const auto* ctx = corpus_.context(target);
  if (!ctx || ctx->subject_only || ctx->members.empty()) return 0;
  const auto target_kind = corpus_.decomposed(ctx->members.front()).predicate.kind();
  std::uint64_t probes = 0;
  for (auto type : all_entailment_types()) {
    if (type == EntailmentType::SVA_SBeA || premise_pattern(type) != d.pattern) continue;
    auto hypothesis = hypothesis_pattern(type);
    if (!detail::kind_fits(hypothesis, target_kind)) continue;
    probes += expand(premise, target, hypothesis, type, sink);
  }
  return probes;
}

template <class Sink>
std::uint64_t CandidateGenerator::for_each_linking(EventualityId premise, Sink&& sink) const {
  const auto& e = corpus_.eventuality(premise);
  if (e.pattern != Pattern::SVA) return 0;
  auto target = Predicate::be_adj(e.token(TokenRole::A1));
  return expand(premise, target.surface(), Pattern::SBeA, EntailmentType::SVA_SBeA, sink);
}

template <class Sink>
std::uint64_t CandidateGenerator::expand(EventualityId premise, std::string_view target,
                                         Pattern hypothesis, EntailmentType type,
                                         Sink& sink) const {
  const auto& d = corpus_.decomposed(premise);
  const auto& plan = alignment_plan(d.pattern, hypothesis);

  struct Option {
    std::string_view term;
    double score;
  };
  std::array<std::vector<Option>, 3> options;
  for (std::uint8_t h = 0; h < plan.size; ++h) {
    const auto& term = d.args[plan.premise_index[h]].surface;
    options[h].push_back({term, 1.0});
    for (const auto& t : rules_.targets(term)) options[h].push_back({t.to, t.score});
  }

  std::uint64_t probes = 0;
  std::array<std::size_t, 3> pick{};
  std::string signature;
  while (true) {
    signature.clear();
    Candidate c;
    c.premise = premise;
    c.type = type;
    c.size = plan.size;
    c.identical_args = true;
    for (std::uint8_t h = 0; h < plan.size; ++h) {
      const auto& opt = options[h][pick[h]];
      if (h) signature.push_back(kSignatureSeparator);
      signature.append(opt.term);
      c.term_scores[h] = opt.score;
      c.identical_args = c.identical_args && pick[h] == 0;
    }
    ++probes;
    if (auto hit = corpus_.find(target, hypothesis, signature); hit && *hit != premise) {
      c.hypothesis = *hit;
      sink(c);
    }
    // Odometer increment over the option lists.
    std::uint8_t h = 0;
    for (; h < plan.size; ++h) {
      if (++pick[h] < options[h].size()) break;
      pick[h] = 0;
    }
    if (h == plan.size) break;
  }
  return probes;
}

}  // namespace eeg
