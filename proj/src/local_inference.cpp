#include "eeg/local_inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unordered_map>

#include "eeg/error.hpp"
#include "eeg/parallel.hpp"

namespace eeg {

double noisy_or(std::span<const double> probabilities) {
  double none = 1.0;
  for (double p : probabilities) none *= (1.0 - p);
  return 1.0 - none;
}

double argument_set_score(const ArgumentSet& /*premise*/, const ArgumentSet& /*hypothesis*/,
                          std::span<const AlignedPair> aligned, const TaxonomyStore& store) {
  if (aligned.empty()) throw ScoringError("argument set score needs at least one aligned pair");
  std::vector<double> probs;
  probs.reserve(aligned.size());
  for (const auto& pair : aligned) {
    probs.push_back(term_entailment_prob(store, pair.premise.surface, pair.hypothesis.surface));
  }
  return noisy_or(probs);
}

// ---------------------------------------------------------------------------

double pmi(std::uint64_t joint, std::uint64_t predicate_count, std::uint64_t signature_count,
           std::uint64_t total) {
  if (joint == 0 || predicate_count == 0 || signature_count == 0 || total == 0) return 0.0;
  const double ratio = (static_cast<double>(total) * static_cast<double>(joint)) /
                       (static_cast<double>(predicate_count) * static_cast<double>(signature_count));
  return std::max(0.0, std::log(ratio));
}

double pmi(const Corpus& corpus, std::string_view context_key, std::string_view signature) {
  const auto* ctx = corpus.context(context_key);
  if (!ctx) return 0.0;
  auto it = ctx->signature_mass.find(std::string(signature));
  if (it == ctx->signature_mass.end()) return 0.0;
  return pmi(it->second, ctx->mass, corpus.context_signature_frequency(signature),
             corpus.context_total_mass());
}

namespace {

/// L^a between two members of the same context, or 0 when their patterns are
/// not comparable.
double member_arg_score(const Corpus& corpus, const PredicateContext& ctx, EventualityId a,
                        EventualityId b, const TaxonomyStore& store) {
  const auto& da = corpus.decomposed(a);
  const auto& db = corpus.decomposed(b);
  if (ctx.subject_only) {
    return term_entailment_prob(store, da.args[0].surface, db.args[0].surface);
  }
  std::vector<AlignedPair> aligned;
  auto type = entailment_type(da.pattern, db.pattern);
  if (type && *type != EntailmentType::SVA_SBeA) {
    aligned = align(da.args, da.pattern, db.args, db.pattern);
  } else if (da.pattern == db.pattern) {
    for (std::size_t l = 0; l < da.args.size(); ++l) aligned.push_back({da.args[l], db.args[l]});
  } else {
    return 0.0;
  }
  return argument_set_score(da.args, db.args, aligned, store);
}

}  // namespace

FeatureVector build_feature_vector(const Corpus& corpus, std::string_view p_i,
                                   std::string_view p_j, double lambda,
                                   const TaxonomyStore& store) {
  FeatureVector features;
  const auto* ctx_i = corpus.context(p_i);
  const auto* ctx_j = corpus.context(p_j);
  if (!ctx_i || !ctx_j) return features;

  for (const auto& [sig, mass] : ctx_i->signature_mass) {
    if (ctx_j->signature_mass.count(sig)) features.emplace(sig, pmi(corpus, p_i, sig));
  }
  if (features.empty()) return features;

  std::vector<EventualityId> seeds;
  for (auto m : ctx_i->members) {
    if (features.count(corpus.context_signature(m, *ctx_i))) seeds.push_back(m);
  }
  for (auto seed : seeds) {
    for (auto k : ctx_i->members) {
      auto sig = corpus.context_signature(k, *ctx_i);
      if (features.find(sig) != features.end()) continue;
      if (member_arg_score(corpus, *ctx_i, seed, k, store) > lambda) {
        features.emplace(std::string(sig), pmi(corpus, p_i, sig));
      }
    }
  }
  return features;
}

namespace {

double total_weight(const FeatureVector& u) {
  double s = 0.0;
  for (const auto& [f, w] : u) s += w;
  return s;
}

}  // namespace

double lin_similarity(const FeatureVector& u, const FeatureVector& v) {
  const double denom = total_weight(u) + total_weight(v);
  if (denom <= 0.0) return 0.0;
  double shared = 0.0;
  for (const auto& [f, w] : u) {
    if (auto it = v.find(f); it != v.end()) shared += w + it->second;
  }
  return std::min(1.0, shared / denom);
}

double cover(const FeatureVector& u, const FeatureVector& v) {
  const double denom = total_weight(u);
  if (denom <= 0.0) return 0.0;
  double shared = 0.0;
  for (const auto& [f, w] : u) {
    if (v.find(f) != v.end()) shared += w;
  }
  return std::min(1.0, shared / denom);
}

double binc(const FeatureVector& u, const FeatureVector& v) {
  if (total_weight(u) <= 0.0 || total_weight(v) <= 0.0) return 0.0;
  return std::sqrt(lin_similarity(u, v) * cover(u, v));
}

double predicate_score(const Corpus& corpus, std::string_view p_i, std::string_view p_j,
                       double lambda, const TaxonomyStore& store) {
  if (p_i == p_j) return 1.0;
  auto u = build_feature_vector(corpus, p_i, p_j, lambda, store);
  auto v = build_feature_vector(corpus, p_j, p_i, lambda, store);
  return binc(u, v);
}

void score_predicate_rules(std::vector<PredicateRule>& rules, const Corpus& corpus, double lambda,
                           const TaxonomyStore& store, unsigned workers) {
  auto scores = parallel_collect<double>(
      rules.size(), workers, [&](std::size_t i, std::vector<double>& out) {
        out.push_back(predicate_score(corpus, rules[i].from.surface(), rules[i].to.surface(),
                                      lambda, store));
      });
  for (std::size_t i = 0; i < rules.size(); ++i) rules[i].score = scores[i];
}

// ---------------------------------------------------------------------------

double penalty_raw(std::uint64_t freq_e_i, std::uint64_t freq_p_i, std::uint64_t freq_e_j,
                   std::uint64_t freq_p_j) {
  if (freq_p_i == 0 || freq_p_j == 0 || freq_e_j == 0) {
    throw ScoringError("penalty undefined: zero frequency for the pair");
  }
  const double cond_i = static_cast<double>(freq_e_i) / static_cast<double>(freq_p_i);
  const double cond_j = static_cast<double>(freq_e_j) / static_cast<double>(freq_p_j);
  return cond_i / cond_j;
}

double penalty_raw(const Corpus& corpus, EventualityId e_i, EventualityId e_j) {
  const auto& di = corpus.decomposed(e_i);
  const auto& dj = corpus.decomposed(e_j);
  return penalty_raw(di.frequency, corpus.predicate_frequency(di.predicate.surface()),
                     dj.frequency, corpus.predicate_frequency(dj.predicate.surface()));
}

double penalty(const Corpus& corpus, EventualityId e_i, EventualityId e_j) {
  return std::min(1.0, penalty_raw(corpus, e_i, e_j));
}

double local_score(double pred_score, double penalty, double arg_score) {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(pred_score) || !in_unit(penalty) || !in_unit(arg_score)) {
    throw ScoringError("local score factors must lie in [0, 1]");
  }
  return std::sqrt(pred_score * penalty * arg_score);
}

// ---------------------------------------------------------------------------

ScoredEdge score_candidate(const Corpus& corpus, const Candidate& c, double pred_score) {
  ScoredEdge e;
  e.from = c.premise;
  e.to = c.hypothesis;
  e.type = c.type;
  e.arg_score = noisy_or(c.scores());
  e.pred_score = pred_score;
  e.penalty = penalty(corpus, c.premise, c.hypothesis);
  e.local_score = local_score(e.pred_score, e.penalty, e.arg_score);
  e.provenance = Provenance::Local;
  return e;
}

LocalResult infer_local_edges(const Corpus& corpus, const ArgumentRuleIndex& argument_rules,
                              std::span<const PredicateRule> predicate_rules,
                              std::span<const std::string> linking_verbs,
                              const TaxonomyStore& store, const LocalParams& params) {
  std::unordered_map<std::string, std::vector<std::pair<std::string, double>>> by_from;
  for (const auto& r : predicate_rules) {
    if (!r.score) throw ScoringError("predicate rule " + r.from.surface() + " => " +
                                     r.to.surface() + " has no score");
    by_from[r.from.surface()].emplace_back(r.to.surface(), *r.score);
  }

  // Linking phrase scores, one per distinct (verb, adjective).
  std::unordered_map<std::string, double> linking_scores;
  {
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& e : corpus.eventualities()) {
      if (e.pattern != Pattern::SVA) continue;
      const auto& verb = e.token(TokenRole::V1);
      if (!std::binary_search(linking_verbs.begin(), linking_verbs.end(), verb)) continue;
      auto be = Predicate::be_adj(e.token(TokenRole::A1)).surface();
      if (!corpus.context(be)) continue;
      keys.emplace_back(linking_context_key(verb, e.token(TokenRole::A1)), be);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    auto scores = parallel_collect<double>(
        keys.size(), params.workers, [&](std::size_t i, std::vector<double>& out) {
          out.push_back(predicate_score(corpus, keys[i].first, keys[i].second, params.lambda, store));
        });
    for (std::size_t i = 0; i < keys.size(); ++i) linking_scores[keys[i].first] = scores[i];
  }

  CandidateGenerator generator(corpus, argument_rules);
  std::atomic<std::uint64_t> checks{0};

  auto edges = parallel_collect<ScoredEdge>(
      corpus.size(), params.workers, [&](std::size_t i, std::vector<ScoredEdge>& out) {
        const auto id = static_cast<EventualityId>(i);
        const auto& d = corpus.decomposed(id);
        std::uint64_t local_checks = 0;
        auto accept_with = [&](double pred_score) {
          return [&, pred_score](const Candidate& c) {
            auto edge = score_candidate(corpus, c, pred_score);
            if (edge.local_score > params.tau_e) out.push_back(edge);
          };
        };

        local_checks += generator.for_each(id, d.predicate.surface(), accept_with(1.0));
        if (auto it = by_from.find(d.predicate.surface()); it != by_from.end()) {
          for (const auto& [to, score] : it->second) {
            local_checks += generator.for_each(id, to, accept_with(score));
          }
        }
        if (d.pattern == Pattern::SVA) {
          const auto& e = corpus.eventuality(id);
          auto it = linking_scores.find(
              linking_context_key(e.token(TokenRole::V1), e.token(TokenRole::A1)));
          if (it != linking_scores.end()) {
            local_checks += generator.for_each_linking(id, accept_with(it->second));
          }
        }
        checks += local_checks;
      });

  std::sort(edges.begin(), edges.end(), [](const ScoredEdge& a, const ScoredEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    return a.local_score > b.local_score;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const ScoredEdge& a, const ScoredEdge& b) {
                            return a.from == b.from && a.to == b.to;
                          }),
              edges.end());
  return {std::move(edges), checks.load()};
}

}  // namespace eeg
