#include <doctest.h>

#include "eeg/corpus.hpp"
#include "eeg/rule_extraction.hpp"
#include "support/toy.hpp"

using namespace eeg;
using eeg::testing::svo;

TEST_SUITE("rule_extraction") {

TEST_CASE("vocabulary collection") {
  auto c = Corpus::from_records({make_eventuality(
      Pattern::SVOPO, {{TokenRole::N1, "he"}, {TokenRole::V1, "post"}, {TokenRole::N2, "it"},
                       {TokenRole::P1, "on"}, {TokenRole::N3, "youtube"}})});
  auto v = collect_vocabulary(c);
  CHECK(v.terms == std::vector<std::string>{"he", "it", "on-youtube"});
  REQUIRE(v.predicates.size() == 1);
  CHECK(v.predicates[0].first.surface() == "post");

  auto empty = collect_vocabulary(Corpus::from_records({}));
  CHECK(empty.terms.empty());
  CHECK(empty.predicates.empty());

  auto two = collect_vocabulary(Corpus::from_records({svo("a", "eat", "b", 3), svo("c", "eat", "d", 4)}));
  CHECK(two.predicate_frequency("eat") == 7);
}

TEST_CASE("argument rules keep top-k concepts inside T above tau") {
  TaxonomyStore store;
  store.add("fruit", "apple", 3);
  store.add("company", "apple", 1);
  std::vector<std::string> terms = {"apple", "fruit"};
  auto rules = build_argument_rules(store, terms, 5, 0.1);
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].from == "apple");
  CHECK(rules[0].to == "fruit");
  CHECK(rules[0].score == 0.75);
  CHECK(build_argument_rules(store, terms, 5, 0.8).empty());

  std::vector<std::string> wide = {"apple", "company", "food", "fruit"};
  store.add("food", "apple", 2);
  auto more = build_argument_rules(store, wide, 5, 0.05);
  CHECK(more.size() == 3);
  CHECK(build_argument_rules(store, wide, 1, 0.05).size() == 1);
}

TEST_CASE("property: TR is irreflexive, sorted, and reproducible from the store") {
  auto in = eeg::testing::random_toy(3, 50, 5);
  auto vocab = collect_vocabulary(in.corpus);
  auto rules = build_argument_rules(in.taxonomy, vocab.terms, 5, 0.05, 3);
  auto serial = build_argument_rules(in.taxonomy, vocab.terms, 5, 0.05, 1);
  CHECK(rules == serial);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    CHECK(rules[i].from != rules[i].to);
    CHECK(rules[i].score == term_entailment_prob(in.taxonomy, rules[i].from, rules[i].to));
    if (i) CHECK(std::tie(rules[i - 1].from, rules[i - 1].to) < std::tie(rules[i].from, rules[i].to));
  }
  ArgumentRuleIndex index(rules);
  CHECK(index.size() == rules.size());
  for (const auto& r : rules) CHECK(index.score(r.from, r.to) == r.score);
}

TEST_CASE("predicate rules follow hierarchy edges inside P") {
  VerbHierarchyStore h;
  for (auto lv : default_light_verbs()) h.add_light_verb(lv);
  h.add_edge("know", "remember", VerbRelation::Entail);
  h.add_edge("take", "acquire", VerbRelation::Hypernym);
  h.add_edge("rare", "know", VerbRelation::Hypernym);
  auto c = Corpus::from_records({svo("i", "know", "it", 5), svo("i", "remember", "it", 5),
                                 svo("i", "take", "it", 5), svo("i", "acquire", "it", 5),
                                 svo("i", "rare", "it", 3)});
  auto rules = build_predicate_rules(h, collect_vocabulary(c), 5);
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].from.surface() == "know");
  CHECK(rules[0].to.surface() == "remember");
  CHECK_FALSE(rules[0].score);

  auto lenient = build_predicate_rules(h, collect_vocabulary(c), 1);
  CHECK(lenient.size() == 2);
}

TEST_CASE("verb-prep compounds inherit the base verb's generalizations") {
  VerbHierarchyStore h;
  for (auto lv : default_light_verbs()) h.add_light_verb(lv);
  h.add_edge("look", "see", VerbRelation::Hypernym);
  auto look_at = make_eventuality(Pattern::SVPO, {{TokenRole::N1, "he"}, {TokenRole::V1, "look"},
                                                  {TokenRole::P1, "at"}, {TokenRole::N2, "sky"}}, 5);
  auto take_over = make_eventuality(Pattern::SVPO, {{TokenRole::N1, "he"}, {TokenRole::V1, "take"},
                                                    {TokenRole::P1, "over"}, {TokenRole::N2, "firm"}}, 5);
  auto c = Corpus::from_records({look_at, take_over, svo("he", "see", "sky", 5),
                                 svo("he", "acquire", "firm", 5)});
  auto rules = build_predicate_rules(h, collect_vocabulary(c), 5);
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].from.surface() == "look-at");
  CHECK(rules[0].to.surface() == "see");
}

TEST_CASE("property: PR has no light-verb endpoints and no self-loops") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto in = eeg::testing::random_toy(seed);
    in.hierarchy.add_edge("take", "eat", VerbRelation::Hypernym);
    auto rules = build_predicate_rules(in.hierarchy, collect_vocabulary(in.corpus), 1);
    for (const auto& r : rules) {
      CHECK(r.from != r.to);
      CHECK_FALSE(in.hierarchy.is_light(r.from.head()));
      CHECK_FALSE(in.hierarchy.is_light(r.to.head()));
    }
  }
}

TEST_CASE("rule files round trip") {
  eeg::testing::TempDir dir("rules");
  std::vector<ArgumentRule> rules = {{"apple", "fruit", 0.75}, {"nut", "food", 1.0 / 3.0}};
  write_argument_rules(dir.path() / "tr.tsv", rules);
  CHECK(read_argument_rules(dir.path() / "tr.tsv") == rules);
  CHECK(count_rule_lines(dir.path() / "tr.tsv") == 2);
}

}  // TEST_SUITE
