#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "eeg/error.hpp"
#include "eeg/local_inference.hpp"
#include "support/oracle.hpp"
#include "support/toy.hpp"

using namespace eeg;
using eeg::testing::svo;

namespace {

std::vector<AlignedPair> pairs_of(std::initializer_list<std::pair<const char*, const char*>> terms) {
  std::vector<AlignedPair> out;
  for (auto [a, b] : terms) out.push_back({{a, ArgumentRole::Subject}, {b, ArgumentRole::Subject}});
  return out;
}

TaxonomyStore apple_store() {
  TaxonomyStore store;
  store.add("fruit", "apple", 3);
  store.add("company", "apple", 1);
  return store;
}

}  // namespace

TEST_SUITE("local_inference") {

TEST_CASE("argument set score examples") {
  auto store = apple_store();
  ArgumentSet none;
  CHECK(argument_set_score(none, none, pairs_of({{"boy", "boy"}, {"apple", "apple"}}), store) == 1.0);
  CHECK(argument_set_score(none, none, pairs_of({{"apple", "fruit"}, {"boy", "girl"}}), store) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(argument_set_score(none, none, pairs_of({{"boy", "girl"}, {"pear", "fruit"}}), store) == 0.0);
  CHECK_THROWS_AS(argument_set_score(none, none, {}, store), ScoringError);
}

TEST_CASE("property: noisy-or equals Bernoulli enumeration and is monotone") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> p(1 + static_cast<std::size_t>(i % 3));
    for (auto& x : p) x = unit(rng);
    const double got = noisy_or(p);
    CHECK(std::abs(got - eeg::testing::bernoulli_any(p)) < 1e-12);
    auto bumped = p;
    bumped[0] = std::min(1.0, bumped[0] + unit(rng) * 0.5);
    CHECK(noisy_or(bumped) >= got);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("pmi examples and scale invariance") {
  CHECK(pmi(100, 100, 100, 100) == 0.0);
  CHECK(pmi(10, 20, 10, 100) == doctest::Approx(std::log(5.0)));
  CHECK(pmi(0, 20, 10, 100) == 0.0);
  CHECK(pmi(1, 50, 50, 100) == 0.0);  // negative PMI clipped

  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::uniform_int_distribution<std::uint64_t> d(1, 50);
    auto joint = d(rng);
    auto cp = joint + d(rng);
    auto ca = joint + d(rng);
    auto n = cp + ca + d(rng);
    auto k = d(rng);
    CHECK(pmi(joint * k, cp * k, ca * k, n * k) == doctest::Approx(pmi(joint, cp, ca, n)).epsilon(1e-12));
  }
}

TEST_CASE("binc examples and asymmetry") {
  FeatureVector u{{"f1", 1.0}, {"f2", 1.0}};
  FeatureVector v{{"f1", 1.0}};
  CHECK(binc(u, u) == 1.0);
  CHECK(binc(u, FeatureVector{{"f3", 2.0}}) == 0.0);
  CHECK(lin_similarity(u, v) == doctest::Approx(2.0 / 3.0));
  CHECK(cover(u, v) == 0.5);
  CHECK(std::abs(binc(u, v) - std::sqrt(1.0 / 3.0)) < 1e-9);
  CHECK(binc(v, u) != binc(u, v));
  CHECK(binc(v, u) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(binc(u, FeatureVector{}) == 0.0);
  CHECK(binc(FeatureVector{{"f1", 0.0}}, v) == 0.0);
}

TEST_CASE("feature vectors: shared signatures and one augmentation pass") {
  TaxonomyStore store;
  store.add("food", "apple", 3);
  store.add("fruit", "apple", 1);
  auto c = Corpus::from_records({svo("boy", "chew", "apple", 2), svo("boy", "chew", "food", 1),
                                 svo("boy", "eat", "apple", 1), svo("dog", "bark", "loud", 20)});
  auto fv = build_feature_vector(c, "chew", "eat", 0.5, store);
  CHECK(fv.count("boy|apple"));
  // boy|food joins through L^a((boy,apple) => (boy,food)) = 1 - (1 - 1)(1 - 0.75) = 1 > 0.5.
  CHECK(term_entailment_prob(store, "apple", "food") == 0.75);
  auto aligned = pairs_of({{"boy", "boy"}, {"apple", "food"}});
  CHECK(argument_set_score({}, {}, aligned, store) == 1.0);
  CHECK(fv.count("boy|food"));
  CHECK(fv.size() == 2);
  for (const auto& [f, w] : fv) CHECK(w >= 0.0);

  auto strict = build_feature_vector(c, "chew", "bark", 1.0, store);
  CHECK(strict.empty());
}

TEST_CASE("predicate score matches a brute-force construction") {
  TaxonomyStore store;
  store.add("food", "apple", 1);
  store.add("food", "nut", 1);
  const std::vector<Eventuality> records = {
      svo("boy", "chew", "food", 2), svo("boy", "chew", "apple", 3), svo("girl", "chew", "apple", 1),
      svo("boy", "eat", "food", 1),  svo("boy", "eat", "apple", 4),  svo("girl", "eat", "nut", 6),
      svo("boy", "eat", "nut", 2),   svo("cat", "sleep", "mat", 9)};
  auto c = Corpus::from_records(records);
  const double lambda = 0.5;

  // Oracle: raw counts, exact-match base, augmentation by noisy-or of term probabilities.
  std::map<std::string, double> cp;
  std::map<std::string, double> ca;
  std::map<std::pair<std::string, std::string>, double> joint;
  double n = 0;
  for (const auto& e : records) {
    const auto sig = e.token(TokenRole::N1) + "|" + e.token(TokenRole::N2);
    cp[e.token(TokenRole::V1)] += e.frequency;
    ca[sig] += e.frequency;
    joint[{e.token(TokenRole::V1), sig}] += e.frequency;
    n += e.frequency;
  }
  auto vec = [&](const std::string& p, const std::string& q) {
    std::map<std::string, double> out;
    std::vector<std::pair<std::string, std::string>> base;
    for (const auto& e : records) {
      if (e.token(TokenRole::V1) != p) continue;
      const auto sig = e.token(TokenRole::N1) + "|" + e.token(TokenRole::N2);
      if (joint.count({q, sig})) base.emplace_back(e.token(TokenRole::N1), e.token(TokenRole::N2));
    }
    auto weight = [&](const std::string& sig) {
      return std::max(0.0, std::log(n * joint[{p, sig}] / (cp[p] * ca[sig])));
    };
    for (const auto& [s, o] : base) out[s + "|" + o] = weight(s + "|" + o);
    for (const auto& [s, o] : base) {
      for (const auto& e : records) {
        if (e.token(TokenRole::V1) != p) continue;
        const double ls = term_entailment_prob(store, s, e.token(TokenRole::N1));
        const double lo = term_entailment_prob(store, o, e.token(TokenRole::N2));
        if (1.0 - (1.0 - ls) * (1.0 - lo) > lambda) {
          const auto sig = e.token(TokenRole::N1) + "|" + e.token(TokenRole::N2);
          out[sig] = weight(sig);
        }
      }
    }
    return out;
  };
  auto u = vec("chew", "eat");
  auto v = vec("eat", "chew");
  double su = 0, sv = 0, shared = 0, shared_u = 0;
  for (auto& [f, w] : u) su += w;
  for (auto& [f, w] : v) sv += w;
  for (auto& [f, w] : u) {
    if (v.count(f)) {
      shared += w + v[f];
      shared_u += w;
    }
  }
  const double expected = std::sqrt(std::min(1.0, shared / (su + sv)) * std::min(1.0, shared_u / su));
  const double got = predicate_score(c, "chew", "eat", lambda, store);
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK(got > 0.0);
  CHECK(got < 1.0);

  CHECK(predicate_score(c, "eat", "eat", lambda, store) == 1.0);
  CHECK(predicate_score(c, "chew", "sleep", lambda, store) == 0.0);
}

TEST_CASE("penalty examples") {
  CHECK(penalty_raw(26, 100, 4, 100) == doctest::Approx(6.5));
  CHECK(penalty_raw(4, 100, 26, 100) == doctest::Approx(0.04 / 0.26));
  CHECK(penalty_raw(1, 10, 5, 10) == doctest::Approx(0.2));
  CHECK(penalty_raw(3, 10, 3, 10) == 1.0);
  CHECK_THROWS_AS(penalty_raw(1, 10, 0, 10), ScoringError);
  CHECK_THROWS_AS(penalty_raw(1, 10, 5, 0), ScoringError);

  auto c = Corpus::from_records({svo("she", "see", "towel", 26), svo("she", "see", "x", 74),
                                 svo("she", "think", "towel", 4), svo("she", "think", "x", 96)});
  auto see = *c.find(svo("she", "see", "towel"));
  auto think = *c.find(svo("she", "think", "towel"));
  CHECK(penalty(c, see, think) == 1.0);
  CHECK(penalty(c, think, see) == doctest::Approx(0.04 / 0.26));
}

TEST_CASE("property: penalty directions are reciprocal before clamping") {
  auto in = eeg::testing::random_toy(21);
  const auto n = static_cast<EventualityId>(in.corpus.size());
  for (EventualityId i = 0; i < n; ++i) {
    for (EventualityId j = 0; j < n; ++j) {
      CHECK(penalty_raw(in.corpus, i, j) * penalty_raw(in.corpus, j, i) ==
            doctest::Approx(1.0).epsilon(1e-12));
      CHECK(penalty(in.corpus, i, j) <= 1.0);
    }
  }
}

TEST_CASE("local score examples, identity and monotonicity") {
  CHECK(local_score(0.64, 1.0, 0.25) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(local_score(0.0, 0.7, 0.9) == 0.0);
  CHECK(local_score(1.0, 1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(local_score(1.5, 1.0, 1.0), ScoringError);
  CHECK_THROWS_AS(local_score(0.5, -0.1, 1.0), ScoringError);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    double f[3] = {unit(rng), unit(rng), unit(rng)};
    const double le = local_score(f[0], f[1], f[2]);
    CHECK(std::abs(le * le - f[0] * f[1] * f[2]) < 1e-12);
    for (int k = 0; k < 3; ++k) {
      double g[3] = {f[0], f[1], f[2]};
      g[k] = g[k] + (1.0 - g[k]) * unit(rng);
      CHECK(local_score(g[0], g[1], g[2]) >= le);
    }
  }
}

TEST_CASE("candidate generation substitutes TR targets") {
  auto in = eeg::testing::figure2_inputs();
  auto vocab = collect_vocabulary(in.corpus);
  auto rules = build_argument_rules(in.taxonomy, vocab.terms, 5, 0.05);
  ArgumentRuleIndex tr(rules);
  CandidateGenerator gen(in.corpus, tr);
  const auto nut = *in.corpus.find(svo("boy", "crunch", "nut"));
  const auto food = *in.corpus.find(svo("boy", "crunch", "food"));
  std::vector<Candidate> found;
  auto probes = gen.for_each(nut, "crunch", [&](const Candidate& c) { found.push_back(c); });
  CHECK(probes == 2);  // (boy, nut) and (boy, food)
  REQUIRE(found.size() == 1);
  CHECK(found[0].hypothesis == food);
  CHECK_FALSE(found[0].identical_args);
  CHECK(found[0].type == EntailmentType::SVO_SVO);

  found.clear();
  gen.for_each(nut, "chew", [&](const Candidate& c) { found.push_back(c); });
  REQUIRE(found.size() == 2);
  CHECK(found[0].identical_args != found[1].identical_args);
}

TEST_CASE("local edges on the toy corpus") {
  auto in = eeg::testing::figure2_inputs();
  auto vocab = collect_vocabulary(in.corpus);
  auto rules = build_argument_rules(in.taxonomy, vocab.terms, 5, 0.05);
  ArgumentRuleIndex tr(rules);
  auto pr = build_predicate_rules(in.hierarchy, vocab, 5);
  score_predicate_rules(pr, in.corpus, 0.5, in.taxonomy);
  LocalParams params;
  auto serial = infer_local_edges(in.corpus, tr, pr, {}, in.taxonomy, params);
  params.workers = 4;
  auto parallel = infer_local_edges(in.corpus, tr, pr, {}, in.taxonomy, params);
  CHECK(serial.edges == parallel.edges);
  CHECK(serial.candidate_checks == parallel.candidate_checks);

  const auto nut = *in.corpus.find(svo("boy", "crunch", "nut"));
  const auto food = *in.corpus.find(svo("boy", "crunch", "food"));
  bool expansion = false;
  for (const auto& e : serial.edges) {
    CHECK(e.from != e.to);
    CHECK(e.local_score > params.tau_e);
    CHECK(std::abs(e.local_score * e.local_score - e.pred_score * e.penalty * e.arg_score) < 1e-12);
    expansion = expansion || (e.from == nut && e.to == food);
  }
  CHECK(expansion);
}

TEST_CASE("linking verbs yield s-v-a => s-be-a edges") {
  TaxonomyStore store;
  VerbHierarchyStore h;
  for (auto lv : default_light_verbs()) h.add_light_verb(lv);
  h.add_edge("look", "be", VerbRelation::Hypernym);
  auto look = make_eventuality(Pattern::SVA, {{TokenRole::N1, "he"}, {TokenRole::V1, "look"},
                                              {TokenRole::A1, "happy"}}, 5);
  auto be_he = make_eventuality(Pattern::SBeA, {{TokenRole::N1, "he"}, {TokenRole::A1, "happy"}}, 5);
  auto be_she = make_eventuality(Pattern::SBeA, {{TokenRole::N1, "she"}, {TokenRole::A1, "happy"}}, 5);
  auto c = Corpus::from_records({look, be_he, be_she, eeg::testing::sv("dog", "bark", 20)});
  auto vocab = collect_vocabulary(c);
  auto links = linking_verbs(h, vocab, 5);
  REQUIRE(links == std::vector<std::string>{"look"});

  // Context marginals: N = 35 + 5 (linking), c(he) = 5 + 5.
  const auto key = linking_context_key("look", "happy");
  CHECK(pmi(c, key, "he") == doctest::Approx(std::log(4.0)));
  CHECK(pmi(c, "be-happy", "he") == doctest::Approx(std::log(2.0)));
  CHECK(predicate_score(c, key, "be-happy", 0.5, store) == doctest::Approx(1.0));

  auto result = infer_local_edges(c, ArgumentRuleIndex{}, {}, links, store, LocalParams{});
  const auto from = *c.find(look);
  const auto to = *c.find(be_he);
  auto it = std::find_if(result.edges.begin(), result.edges.end(),
                         [&](const ScoredEdge& e) { return e.from == from && e.to == to; });
  REQUIRE(it != result.edges.end());
  CHECK(it->type == EntailmentType::SVA_SBeA);
  CHECK(it->local_score == doctest::Approx(1.0));

  auto none = infer_local_edges(c, ArgumentRuleIndex{}, {}, {}, store, LocalParams{});
  for (const auto& e : none.edges) CHECK(e.type != EntailmentType::SVA_SBeA);
}

}  // TEST_SUITE
