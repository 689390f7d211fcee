#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <thread>

#include "eeg/error.hpp"
#include "eeg/graph_store.hpp"
#include "support/toy.hpp"

using namespace eeg;
using eeg::testing::svo;
using eeg::testing::TempDir;

namespace {

ScoredEdge edge(EventualityId a, EventualityId b, double le, Provenance prov = Provenance::Local,
                EntailmentType type = EntailmentType::SVO_SVO) {
  ScoredEdge e;
  e.from = a;
  e.to = b;
  e.arg_score = 1.0;
  e.pred_score = le * le;
  e.penalty = 1.0;
  e.local_score = le;
  e.provenance = prov;
  e.type = type;
  return e;
}

std::vector<Eventuality> nodes3() {
  auto c = Corpus::from_records({svo("boy", "crunch", "food"), svo("boy", "chew", "food"),
                                 svo("boy", "eat", "food"), svo("dog", "eat", "bone")});
  return {c.eventualities().begin(), c.eventualities().end()};
}

}  // namespace

TEST_SUITE("graph_store") {

TEST_CASE("construction deduplicates by pair keeping the max score, local on ties") {
  EntailmentGraph g(nodes3(), {edge(1, 2, 0.4), edge(1, 2, 0.7, Provenance::Global), edge(0, 1, 0.5),
                               edge(0, 1, 0.5, Provenance::Global)});
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edge(1, 2)->local_score == 0.7);
  CHECK(g.edge(1, 2)->provenance == Provenance::Global);
  CHECK(g.edge(0, 1)->provenance == Provenance::Local);
  CHECK(g.with_provenance(Provenance::Local).size() + g.with_provenance(Provenance::Global).size() ==
        g.edge_count());
  CHECK(g.outgoing(0).size() == 1);
  CHECK(g.outgoing(3).empty());
  CHECK_THROWS(EntailmentGraph(nodes3(), {edge(0, 9, 0.5)}));
}

TEST_CASE("builder accepts concurrent batches and is order independent") {
  std::vector<ScoredEdge> all;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (EventualityId a = 0; a < 4; ++a) {
    for (EventualityId b = 0; b < 4; ++b) {
      if (a != b) {
        all.push_back(edge(a, b, unit(rng)));
        all.push_back(edge(a, b, unit(rng), Provenance::Global));
      }
    }
  }
  GraphBuilder builder(nodes3());
  {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        std::vector<ScoredEdge> batch;
        for (std::size_t i = t; i < all.size(); i += 4) batch.push_back(all[i]);
        builder.add_batch(std::move(batch));
      });
    }
  }
  auto g = builder.seal();
  std::reverse(all.begin(), all.end());
  EntailmentGraph reference(nodes3(), all);
  CHECK(g == reference);
  CHECK(g.edge_count() == 12);
}

TEST_CASE("write/read round trip is exact") {
  TempDir dir("graph");
  std::vector<ScoredEdge> edges = {edge(0, 1, 1.0 / 3.0), edge(1, 2, 0.1 + 0.2, Provenance::Global),
                                   edge(3, 2, std::nextafter(0.5, 1.0), Provenance::Local,
                                        EntailmentType::SVO_SVPO)};
  PredicatePath path{{"crunch", "chew", "eat"}};
  EntailmentGraph g(nodes3(), edges, {path});
  write_graph(g, dir.path());
  auto back = read_graph(dir.path());
  CHECK(back == g);
  CHECK(back.edge(1, 2)->local_score == 0.1 + 0.2);

  TempDir again("graph2");
  write_graph(back, again.path());
  CHECK(eeg::testing::snapshot(dir.path()) == eeg::testing::snapshot(again.path()));
}

TEST_CASE("truncated or malformed files are format errors with line numbers") {
  TempDir dir("graph");
  EntailmentGraph g(nodes3(), {edge(0, 1, 0.5), edge(1, 2, 0.5), edge(0, 2, 0.25)});
  write_graph(g, dir.path());
  auto edges_file = dir.path() / kEdgesFile;
  auto text = eeg::testing::read_text(edges_file);

  std::ofstream(edges_file, std::ios::trunc) << text.substr(0, text.size() - 10);
  CHECK_THROWS_AS(read_graph(dir.path()), FormatError);

  auto lines = text;
  lines.replace(lines.find("local"), 5, "lokal");
  std::ofstream(edges_file, std::ios::trunc) << lines;
  try {
    read_graph(dir.path());
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }

  std::ofstream(edges_file, std::ios::trunc) << text;
  CHECK_NOTHROW(read_graph(dir.path()));
  CHECK_THROWS_AS(read_graph(dir.path() / "nope"), LookupError);
}

TEST_CASE("stats: ten labels plus Overall, consistent with the indexes") {
  auto empty = stats(EntailmentGraph{});
  REQUIRE(empty.rows.size() == 11);
  CHECK(empty.rows.back().label == "Overall");
  for (const auto& r : empty.rows) {
    CHECK(r.eventualities == 0);
    CHECK(r.local_edges == 0);
    CHECK(r.global_edges == 0);
  }

  EntailmentGraph g(nodes3(), {edge(0, 1, 0.5), edge(1, 2, 0.5, Provenance::Global),
                               edge(3, 2, 0.4, Provenance::Global, EntailmentType::SVO_SVPO)});
  auto s = stats(g);
  const auto* svo_row = s.row("s-v-o ⊨ s-v-o");
  REQUIRE(svo_row);
  CHECK(svo_row->eventualities == 3);
  CHECK(svo_row->local_edges == 1);
  CHECK(svo_row->global_only == 1);
  CHECK(svo_row->global_edges == 2);
  CHECK(s.overall().eventualities == 4);
  CHECK(s.overall().global_edges == g.edge_count());
  CHECK(s.overall().local_edges == g.with_provenance(Provenance::Local).size());
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i + 1 < s.rows.size(); ++i) sum += s.rows[i].global_edges;
  CHECK(sum == s.overall().global_edges);
  CHECK(s.to_table().find("s-be-a-p-o ⊨ s-be-a-p-o\t0\t0\t0\t0\n") != std::string::npos);
}

TEST_CASE("sampling is uniform per type, reproducible, and warns when short") {
  std::vector<Eventuality> nodes;
  for (int i = 0; i < 30; ++i) nodes.push_back(svo("s" + std::to_string(i), "eat", "x"));
  auto c = Corpus::from_records(nodes);
  std::vector<ScoredEdge> edges;
  for (EventualityId i = 0; i + 1 < 30; ++i) edges.push_back(edge(i, i + 1, 0.5));
  EntailmentGraph g({c.eventualities().begin(), c.eventualities().end()}, edges);

  auto a = sample_for_annotation(g, 10, 42);
  auto b = sample_for_annotation(g, 10, 42);
  CHECK(format_sample(a) == format_sample(b));
  CHECK(a.records.size() == 10);
  CHECK(a.warnings.size() == 9);
  std::set<std::string> distinct;
  for (const auto& r : a.records) distinct.insert(r.premise);
  CHECK(distinct.size() == 10);
  CHECK(format_sample(sample_for_annotation(g, 10, 43)) != format_sample(a));

  auto zero = sample_for_annotation(g, 0, 1);
  CHECK(format_sample(zero).empty());

  auto all = sample_for_annotation(g, 100, 1);
  CHECK(all.records.size() == edges.size());
  CHECK(all.warnings.size() == 10);
}

TEST_CASE("queries: direct, chain within a path, none") {
  auto nodes = nodes3();
  EntailmentGraph g(nodes, {edge(0, 1, 0.9, Provenance::Global), edge(1, 2, 0.8, Provenance::Global)},
                    {PredicatePath{{"crunch", "chew", "eat"}}});
  // ids follow canonical order: chew(0) crunch(1) eat bone(2) eat food(3)
  const auto crunch = *g.find(svo("boy", "crunch", "food"));
  const auto chew = *g.find(svo("boy", "chew", "food"));
  const auto eat = *g.find(svo("boy", "eat", "food"));
  EntailmentGraph h(nodes, {edge(crunch, chew, 0.9, Provenance::Global),
                            edge(chew, eat, 0.8, Provenance::Global)},
                    {PredicatePath{{"crunch", "chew", "eat"}}});

  auto direct = query_entails(h, crunch, chew);
  CHECK(direct.kind == QueryKind::Direct);
  auto chain = query_entails(h, svo("boy", "crunch", "food"), svo("boy", "eat", "food"));
  CHECK(chain.kind == QueryKind::Chain);
  REQUIRE(chain.trail.size() == 2);
  CHECK(chain.trail[0].to == chew);
  CHECK(query_entails(h, crunch, crunch).kind == QueryKind::None);
  CHECK(query_entails(h, eat, crunch).kind == QueryKind::None);
  CHECK(query_entails(h, svo("dog", "eat", "bone"), svo("boy", "eat", "food")).kind == QueryKind::None);
  CHECK_THROWS_AS(query_entails(h, svo("cat", "eat", "fish"), svo("boy", "eat", "food")), LookupError);

  EntailmentGraph no_path(nodes, {edge(crunch, chew, 0.9), edge(chew, eat, 0.8)});
  CHECK(query_entails(no_path, crunch, eat).kind == QueryKind::None);
  CHECK(g.node_count() == 4);
}

}  // TEST_SUITE
