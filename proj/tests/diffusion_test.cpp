#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cosoc;

namespace {

struct Cascade {
  TemporalCorpus corpus = ingest_records(oracle::cascade_records(), oracle::window(30));
  BlogId operator()(const char* name) const { return corpus.blogs().at(name); }
  DiffusionSubgraph graph() const { return extract_subgraph(corpus, corpus.urls().at(oracle::kU0)); }
};

std::set<std::tuple<std::string, std::string, Day>> named(const TemporalCorpus& c, const DiffusionSubgraph& g) {
  std::set<std::tuple<std::string, std::string, Day>> out;
  for (const auto& e : g.edges) out.insert({c.blogs().name(e.citing), c.blogs().name(e.cited), e.day});
  return out;
}

}  // namespace

TEST(Extract, CascadeSubgraph) {
  const Cascade f;
  const auto g = f.graph();
  EXPECT_EQ(g.nodes, (std::vector<BlogId>{f("a"), f("c"), f("b"), f("d")}));  // sorted by index
  EXPECT_EQ(named(f.corpus, g),
            (std::set<std::tuple<std::string, std::string, Day>>{{"c", "a", 19}, {"b", "a", 20}, {"b", "c", 20}, {"d", "b", 26}}));
  EXPECT_FALSE(g.trivial());
}

TEST(Extract, CascadeOrders) {
  const Cascade f;
  const auto g = f.graph();
  const auto order = classify_edges(g);
  std::set<std::pair<std::string, std::string>> first, second;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    auto& bucket = order[k] == TransmissionOrder::first ? first : second;
    bucket.insert({f.corpus.blogs().name(g.edges[k].citing), f.corpus.blogs().name(g.edges[k].cited)});
  }
  EXPECT_EQ(first, (std::set<std::pair<std::string, std::string>>{{"c", "a"}, {"b", "a"}}));
  EXPECT_EQ(second, (std::set<std::pair<std::string, std::string>>{{"b", "c"}, {"d", "b"}}));
  const auto init = initiators(f.corpus, g);
  ASSERT_EQ(init.size(), 1u);
  EXPECT_EQ(init[0], std::make_pair(f("a"), Day(1)));
}

TEST(Extract, SingleMentionIsTrivialAndSameDayIsNotTransmission) {
  std::vector<PostRecord> r = {
      {"x", 3, {}, {"https://solo.example/1"}, {}},
      {"p", 5, {}, {"https://pair.example/2"}, {}},
      {"q", 5, {}, {"https://pair.example/2"}, {"p"}},
  };
  const auto c = ingest_records(r, oracle::window(6));
  const auto solo = extract_subgraph(c, c.urls().at("https://solo.example/1"));
  EXPECT_TRUE(solo.trivial());
  EXPECT_EQ(solo.nodes, std::vector<BlogId>{c.blogs().at("x")});
  EXPECT_TRUE(extract_subgraph(c, c.urls().at("https://pair.example/2")).trivial());
  EXPECT_THROW((void)extract_subgraph(c, UrlId(7)), ValidationError);
}

TEST(Catalog, CascadePlusUnrelayedUrl) {
  auto records = oracle::cascade_records();
  records.push_back({"e", 4, {}, {"https://quiet.example/x"}, {"a"}});
  const auto c = ingest_records(records, oracle::window(30));
  const auto cat = all_subgraphs(c);
  EXPECT_EQ(cat.non_trivial, 1u);
  EXPECT_EQ(cat.trivial, 1u);
  EXPECT_EQ(cat.transmission_links, 4u);
  EXPECT_TRUE(all_subgraphs(ingest_records({{"a", 1, {}, {}, {}}}, oracle::window(2))).subgraphs.empty());
}

TEST(Sizes, CascadeAndSingleTransmission) {
  const Cascade f;
  const auto d = size_distribution({f.graph()});
  EXPECT_EQ(d.nodes, (std::map<std::size_t, std::size_t>{{4, 1}}));
  EXPECT_EQ(d.edges, (std::map<std::size_t, std::size_t>{{4, 1}}));

  const auto c = ingest_records({{"p", 1, {}, {"https://one.example/a"}, {}}, {"q", 2, {}, {"https://one.example/a"}, {"p"}}},
                                oracle::window(2));
  const auto s = size_distribution(all_subgraphs(c).subgraphs);
  EXPECT_EQ(s.nodes, (std::map<std::size_t, std::size_t>{{2, 1}}));
  EXPECT_EQ(s.edges, (std::map<std::size_t, std::size_t>{{1, 1}}));
}

TEST(NearestRank, BoundariesGoLow) {
  const std::vector<int> v{5, 1, 8, 2, 7, 3, 6, 4};
  EXPECT_EQ(nearest_rank_groups(v, 4), (std::vector<std::size_t>{2, 0, 3, 0, 3, 1, 2, 1}));
  // All tied: everyone in the lowest group.
  EXPECT_EQ(nearest_rank_groups(std::vector<int>{3, 3, 3}, 5), (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_THROW(nearest_rank_groups(v, 1), ValidationError);
}

TEST(AttentionStats, CascadeInitiatorCounts) {
  const Cascade f;
  const auto table = first_transmissions_vs_attention(f.corpus, all_subgraphs(f.corpus), 8);
  ASSERT_EQ(table.records.size(), 1u);
  EXPECT_EQ(table.records[0].initiator, f("a"));
  EXPECT_EQ(table.records[0].first_transmissions, 2u);
  EXPECT_EQ(table.records[0].second_transmissions, 2u);
  EXPECT_EQ(table.records[0].alpha, Rational(0));  // nobody cites a before day 1
  ASSERT_EQ(table.groups.size(), 1u);
  EXPECT_EQ(table.groups[0].mean_first, 2.0);
}

TEST(AttentionStats, LoneInitiatorNeverCited) {
  const auto c = ingest_records({{"x", 2, {}, {"https://solo.example/1"}, {}}}, oracle::window(3));
  const auto table = first_transmissions_vs_attention(c, all_subgraphs(c), 8);
  ASSERT_EQ(table.groups.size(), 1u);
  EXPECT_EQ(table.groups[0].mean_first, 0.0);
  EXPECT_EQ(table.groups[0].alpha_lo, Rational(0));
  EXPECT_EQ(table.groups[0].active_initiators, 0u);
  EXPECT_FALSE(table.groups[0].mean_first_active.has_value());
}

TEST(AttentionStats, AlphaTakenAtFirstMention) {
  // h is cited by p on day 1 and by q on day 5; h starts a URL on day 3.
  const auto c = ingest_records({{"p", 1, {}, {}, {"h"}},
                                 {"h", 3, {}, {"https://news.example/1"}, {}},
                                 {"q", 5, {}, {}, {"h"}},
                                 {"r", 6, {}, {"https://news.example/1"}, {"h"}}},
                                oracle::window(6));
  const auto table = first_transmissions_vs_attention(c, all_subgraphs(c), 2);
  ASSERT_EQ(table.records.size(), 1u);
  EXPECT_EQ(table.records[0].alpha, Rational(1));
  EXPECT_EQ(table.records[0].first_transmissions, 1u);
}

TEST(AttentionStats, PreferentialCitationOfHighAlpha) {
  // Initiator h<k> has k + 1 exclusive fans (alpha = k + 1); the same fans relay its URL.
  std::vector<PostRecord> r;
  for (int k = 0; k < 8; ++k) {
    const std::string h = "h" + std::to_string(k), url = "https://bias.example/" + std::to_string(k);
    for (int f = 0; f <= k; ++f) r.push_back({h + "fan" + std::to_string(f), 1, {}, {}, {h}});
    r.push_back({h, 2, {}, {url}, {}});
    for (int f = 0; f <= k; ++f) r.push_back({h + "fan" + std::to_string(f), 3, {}, {url}, {h}});
  }
  const auto c = ingest_records(r, oracle::window(3));
  const auto table = first_transmissions_vs_attention(c, all_subgraphs(c), 4);
  ASSERT_EQ(table.groups.size(), 4u);
  for (std::size_t g = 1; g < table.groups.size(); ++g) {
    EXPECT_GE(table.groups[g].mean_first, table.groups[g - 1].mean_first);
  }
  EXPECT_EQ(table.groups.front().mean_first, 1.5);
  EXPECT_EQ(table.groups.back().mean_first, 7.5);
}

TEST(EdgeRangeStats, CascadeRecords) {
  const Cascade f;
  const auto table = second_transmissions_vs_edge_range(f.corpus, all_subgraphs(f.corpus), 5);
  ASSERT_EQ(table.records.size(), 2u);
  // (c, a, 19): only edge at day 19, so a bridge; extended by (b, c, 20).
  EXPECT_EQ(table.records[0].edge, (TransmissionEdge{f("c"), f("a"), 19}));
  EXPECT_TRUE(table.records[0].edge_range.is_infinite());
  EXPECT_EQ(table.records[0].second_transmissions, 1u);
  // (b, a, 20): alternative b -> c -> a costs 2 + 1.
  EXPECT_EQ(table.records[1].edge_range, WeightedDistance(Rational(3)));
  EXPECT_EQ(table.records[1].second_transmissions, 1u);
  ASSERT_EQ(table.groups.size(), 2u);
  EXPECT_EQ(table.groups.back().range_lo, "inf");
  EXPECT_FALSE(table.groups.back().group.has_value());
  EXPECT_EQ(*table.groups.front().group, 0u);
}

TEST(EdgeRangeStats, LoneFirstEdgeHasZeroExtensions) {
  const auto c = ingest_records({{"p", 1, {}, {"https://one.example/a"}, {}}, {"q", 2, {}, {"https://one.example/a"}, {"p"}}},
                                oracle::window(2));
  const auto table = second_transmissions_vs_edge_range(c, all_subgraphs(c), 5);
  ASSERT_EQ(table.groups.size(), 1u);
  EXPECT_EQ(table.groups[0].mean_second, 0.0);
  EXPECT_EQ(table.groups[0].range_lo, "inf");
}

// Naive quadruple scan on random corpora, plus the structural invariants.
TEST(DiffusionProperty, MatchesNaiveScan) {
  std::mt19937_64 rng(2718);
  std::size_t edges_seen = 0, second_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = oracle::random_corpus(rng);
    const auto c = ingest_records(rc.records, rc.manifest);
    const auto cat = all_subgraphs(c);
    const auto naive = oracle::naive_subgraphs(rc.records);
    ASSERT_EQ(cat.subgraphs.size(), naive.size());
    std::size_t total = 0;
    for (const auto& g : cat.subgraphs) {
      const auto& expect = naive.at(c.urls().name(g.url));
      std::set<std::string> nodes;
      for (BlogId b : g.nodes) nodes.insert(c.blogs().name(b));
      ASSERT_EQ(nodes, expect.nodes) << trial;
      std::set<oracle::NaiveEdge> edges;
      for (const auto& e : g.edges) edges.insert({c.blogs().name(e.citing), c.blogs().name(e.cited), e.day});
      ASSERT_EQ(edges, expect.edges) << trial;
      const auto order = classify_edges(g);
      std::size_t first = 0, second = 0;
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        const oracle::NaiveEdge ne{c.blogs().name(e.citing), c.blogs().name(e.cited), e.day};
        ASSERT_EQ(order[k] == TransmissionOrder::second, oracle::naive_is_second(expect, ne));
        (order[k] == TransmissionOrder::first ? first : second)++;
        // Subset of the day's citation view, and a strictly earlier mention.
        const auto cites = c.citations_on(e.day);
        EXPECT_TRUE(std::binary_search(cites.begin(), cites.end(), CitationPair{e.citing, e.cited}));
        const auto m = c.mentions_of(g.url);
        EXPECT_TRUE(std::any_of(m.begin(), m.end(), [&](const auto& p) { return p.second == e.cited && p.first < e.day; }));
        EXPECT_TRUE(std::binary_search(g.nodes.begin(), g.nodes.end(), e.citing));
        EXPECT_TRUE(std::binary_search(g.nodes.begin(), g.nodes.end(), e.cited));
      }
      EXPECT_EQ(first + second, g.edges.size());
      total += g.edges.size();
      edges_seen += g.edges.size();
      second_seen += second;
    }
    EXPECT_EQ(total, cat.transmission_links);
    // A citation relaying several URLs counts once per URL, so the subset
    // bound holds on distinct (i, j, t) triples.
    std::set<std::tuple<std::uint32_t, std::uint32_t, Day>> triples;
    for (const auto& g : cat.subgraphs) {
      for (const auto& e : g.edges) triples.insert({e.citing.get(), e.cited.get(), e.day});
    }
    EXPECT_LE(triples.size(), c.stats().unique_citation_triples);
    std::size_t hist = 0;
    for (const auto& [size, count] : size_distribution(cat.subgraphs).nodes) hist += count;
    EXPECT_EQ(hist, cat.non_trivial);
    // The statistics tables run and account for every FIRST edge.
    const auto er = second_transmissions_vs_edge_range(c, cat, 5);
    std::size_t grouped = 0;
    for (const auto& grp : er.groups) grouped += grp.records;
    EXPECT_EQ(grouped, er.records.size());
    const auto at = first_transmissions_vs_attention(c, cat, 8);
    std::size_t firsts = 0;
    for (const auto& r : at.records) firsts += r.first_transmissions;
    EXPECT_LE(firsts, er.records.size());
  }
  EXPECT_GT(edges_seen, 300u);
  EXPECT_GT(second_seen, 30u);
}
