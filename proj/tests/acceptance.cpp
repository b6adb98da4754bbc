// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace cosoc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// ---- 1 ---------------------------------------------------------------------

void attention_fixtures(Outcome& o) {
  // b (index 1) cites a once, c twice and d three times.
  const auto g = AggregatedGraph::from_edges(4, {{1, 0, 1}, {1, 2, 2}, {1, 3, 3}});
  const auto a = attention(g).at(BlogId(1), BlogId(2));
  const auto d = detachment(g).at(BlogId(1), BlogId(2));
  o.require(a && *a == Rational(2, 6), "a(b,c) = 2/6");
  o.require(d && *d == Rational(3), "d(b,c) = 3");
  o.detail << "a(b,c) = " << (a ? a->to_string() : "undefined") << ", d(b,c) = " << (d ? d->to_string() : "undefined");
}

// ---- 2 ---------------------------------------------------------------------

void cascade_fixture(Outcome& o) {
  const auto c = ingest_records(oracle::cascade_records(), oracle::window(30));
  const auto g = extract_subgraph(c, c.urls().at(oracle::kU0));
  std::set<std::string> nodes;
  for (BlogId b : g.nodes) nodes.insert(c.blogs().name(b));
  o.require(nodes == std::set<std::string>{"a", "b", "c", "d"}, "nodes {a,b,c,d}");
  std::set<std::tuple<std::string, std::string, Day>> edges;
  std::set<std::pair<std::string, std::string>> first, second;
  const auto order = classify_edges(g);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    edges.insert({c.blogs().name(e.citing), c.blogs().name(e.cited), e.day});
    (order[k] == TransmissionOrder::first ? first : second).insert({c.blogs().name(e.citing), c.blogs().name(e.cited)});
  }
  o.require(edges == std::set<std::tuple<std::string, std::string, Day>>{{"c", "a", 19}, {"b", "a", 20}, {"b", "c", 20}, {"d", "b", 26}},
            "dated edges");
  o.require(first == std::set<std::pair<std::string, std::string>>{{"c", "a"}, {"b", "a"}}, "FIRST = {(c,a),(b,a)}");
  o.require(second == std::set<std::pair<std::string, std::string>>{{"b", "c"}, {"d", "b"}}, "SECOND = {(b,c),(d,b)}");
  o.detail << g.nodes.size() << " nodes, " << g.edges.size() << " edges, " << first.size() << " FIRST, " << second.size()
           << " SECOND";
}

// ---- 3 ---------------------------------------------------------------------

void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(1234567);
  std::size_t pairs = 0, ranged = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto dense = oracle::random_digraph(rng);
    const auto g = oracle::to_graph(dense);
    const auto dg = detachment(g);
    for (std::uint32_t i = 0; i < dense.n; ++i) {
      for (std::uint32_t j = 0; j < dense.n; ++j) {
        ++pairs;
        o.require(social_distance(g, BlogId(i), BlogId(j)) == oracle::enum_social(dense, i, j), "social_distance");
        o.require(detachment_distance(dg, BlogId(i), BlogId(j)) == oracle::enum_detachment(dense, i, j),
                  "detachment_distance");
        if (dense.w[i][j] > 0) {
          ++ranged;
          o.require(edge_range(dg, BlogId(i), BlogId(j)) ==
                        oracle::enum_detachment(dense, i, j, std::pair<std::size_t, std::size_t>{i, j}),
                    "edge_range");
        }
      }
    }
  }

  const std::vector<Rational> det_edges{Rational(1), Rational(3, 2), Rational(2), Rational(4), Rational(8)};
  std::size_t transmissions = 0;
  std::uint64_t links = 0;
  for (int trial = 0; trial < 200; ++trial) {
    WindowScheme s;
    s.length = static_cast<Day>(1 + rng() % 4);
    s.windows = 1 + rng() % 4;
    s.t0 = static_cast<Day>(1 + rng() % 8);
    const auto rc = oracle::random_corpus(rng, {}, s.start(s.windows - 1) + s.length);
    const auto c = ingest_records(rc.records, rc.manifest);

    const auto cat = all_subgraphs(c);
    const auto naive = oracle::naive_subgraphs(rc.records);
    o.require(cat.subgraphs.size() == naive.size(), "subgraph count");
    for (const auto& g : cat.subgraphs) {
      const auto it = naive.find(c.urls().name(g.url));
      if (it == naive.end()) {
        o.require(false, "unknown URL");
        continue;
      }
      std::set<std::string> nodes;
      for (BlogId b : g.nodes) nodes.insert(c.blogs().name(b));
      o.require(nodes == it->second.nodes, "subgraph nodes");
      std::set<oracle::NaiveEdge> edges;
      const auto order = classify_edges(g);
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        const oracle::NaiveEdge ne{c.blogs().name(e.citing), c.blogs().name(e.cited), e.day};
        edges.insert(ne);
        o.require((order[k] == TransmissionOrder::second) == oracle::naive_is_second(it->second, ne), "edge order");
      }
      o.require(edges == it->second.edges, "subgraph edges");
      transmissions += g.edges.size();
    }

    const std::uint32_t max_d = 1 + static_cast<std::uint32_t>(rng() % 4);
    const double width = (trial % 2) ? 0.1 : 0.25;
    const auto social = propensity_social(c, s, max_d);
    const auto checks = {
        std::pair{PropensityKind::social, social.tallies},
        std::pair{PropensityKind::detachment, propensity_detachment(c, s, det_edges).tallies},
        std::pair{PropensityKind::semantic, propensity_semantic(c, s, width).tallies},
        std::pair{PropensityKind::grid, propensity_2d(c, s, max_d, width).tallies},
    };
    for (const auto& [kind, tallies] : checks) {
      o.require(tallies == oracle::naive_propensity(rc.records, c, s, kind, max_d, det_edges, width),
                std::string("propensity ") + to_string(kind));
    }
    for (const auto& t : social.overall) links += t.numerator;
  }
  o.require(transmissions > 300 && links > 500, "non-vacuous comparison");
  o.detail << pairs << " digraph pairs, " << ranged << " edge ranges, " << transmissions << " transmission edges, " << links
           << " new links";
}

// ---- 4 and 5 ---------------------------------------------------------------

/// A bin counts as populated when it has at least two windows and at least
/// five expected new links under the window's overall rate.
bool populated(const PropensityCurve& curve, std::size_t b) {
  if (curve.summary[b].windows_used < 2 || !curve.summary[b].normalized_mean) return false;
  double expected = 0.0;
  for (std::size_t w = 0; w < curve.scheme.windows; ++w) {
    if (const auto f = curve.overall_f(w)) expected += *f * static_cast<double>(curve.tallies[b][w].denominator);
  }
  return expected >= 5.0;
}

void null_flatness(Outcome& o) {
  std::size_t within = 0, total = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_kind;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig g;
    g.n_blogs = 50;
    g.days = 120;
    g.beta_social = 0.0;
    g.beta_semantic = 0.0;
    g.relay_prob = 0.0;
    g.seed = seed;
    const auto c = generate(g).ingest();
    const WindowScheme s{60, 7, 8};
    for (const auto& curve : {propensity_social(c, s), propensity_detachment(c, s), propensity_semantic(c, s)}) {
      auto& [in, all] = by_kind[to_string(curve.kind)];
      for (std::size_t b = 0; b < curve.bins.size(); ++b) {
        if (!populated(curve, b) || !curve.summary[b].ci95_halfwidth) continue;
        const bool ok = std::abs(*curve.summary[b].normalized_mean - 1.0) <= *curve.summary[b].ci95_halfwidth;
        in += ok;
        ++all;
      }
    }
  }
  for (const auto& [kind, counts] : by_kind) {
    within += counts.first;
    total += counts.second;
    const double share = counts.second ? static_cast<double>(counts.first) / static_cast<double>(counts.second) : 0.0;
    o.require(counts.second >= 20 && share >= 0.9, kind + " bins within CI >= 90%");
    o.detail << kind << " " << counts.first << "/" << counts.second << ", ";
  }
  o.detail << "overall " << std::fixed << std::setprecision(3) << static_cast<double>(within) / static_cast<double>(total);
}

struct Trend {
  double rho = 0.0;
  std::size_t bins = 0;
  bool strict = true;
};

Trend trend(const PropensityCurve& curve, bool finite_only) {
  std::vector<double> x, y;
  Trend t;
  for (std::size_t b = 0; b < curve.bins.size(); ++b) {
    if (finite_only && curve.bins[b].hi == "inf") continue;
    if (!populated(curve, b)) continue;
    const double v = *curve.summary[b].normalized_mean;
    if (!y.empty() && v >= y.back()) t.strict = false;
    x.push_back(static_cast<double>(b));
    y.push_back(v);
  }
  t.bins = x.size();
  t.rho = t.bins >= 2 ? oracle::spearman(x, y) : 0.0;
  return t;
}

void homophily_recovery(Outcome& o) {
  const WindowScheme s{60, 7, 8};
  double worst_sem = -1.0, worst_soc = -1.0;
  std::size_t strict_sem = 0, strict_soc = 0;
  const std::uint64_t seeds = 8;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    GeneratorConfig g;
    g.n_blogs = 50;
    g.days = 120;
    g.beta_semantic = 3.0;
    g.beta_social = 0.0;
    g.relay_prob = 0.0;
    g.seed = seed;
    const auto sem = trend(propensity_semantic(generate(g).ingest(), s), false);
    o.require(sem.bins >= 5 && sem.rho <= -0.9, "semantic Spearman <= -0.9 (seed " + std::to_string(seed) + ")");
    worst_sem = std::max(worst_sem, sem.rho);
    strict_sem += sem.strict;

    // Sparser graph so that several hop distances are populated.
    g.n_blogs = 200;
    g.posts_per_day = 0.1;
    g.beta_semantic = 0.0;
    g.beta_social = 1.0;
    const auto soc = trend(propensity_social(generate(g).ingest(), s), true);
    o.require(soc.bins >= 4 && soc.rho <= -0.9, "social Spearman <= -0.9 (seed " + std::to_string(seed) + ")");
    worst_soc = std::max(worst_soc, soc.rho);
    strict_soc += soc.strict;
  }
  o.detail << std::setprecision(3) << "worst rho semantic " << worst_sem << ", social " << worst_soc
           << "; strictly monotone seeds " << strict_sem << "/" << seeds << " semantic, " << strict_soc << "/" << seeds
           << " social";
}

// ---- 6 ---------------------------------------------------------------------

void semantic_invariants(Outcome& o) {
  std::mt19937_64 rng(3141);
  std::size_t checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 12, m = 1 + rng() % 10;
    auto build = [&](const std::vector<std::vector<std::uint32_t>>& counts) {
      SemanticProfile p(n, m, 1);
      for (std::uint32_t i = 0; i < n; ++i) {
        std::vector<TermCount> row;
        for (std::uint32_t t = 0; t < m; ++t) {
          if (counts[i][t] > 0) row.push_back({TermId(t), counts[i][t]});
        }
        p.set_row(BlogId(i), row);
      }
      return tfidf_adjust(p);
    };
    std::vector<std::vector<std::uint32_t>> counts(n, std::vector<std::uint32_t>(m, 0));
    for (auto& row : counts) {
      for (auto& c : row) c = (rng() % 3 == 0) ? static_cast<std::uint32_t>(1 + rng() % 9) : 0;
    }
    auto scaled = counts;
    const auto who = rng() % n;
    const auto factor = static_cast<std::uint32_t>(2 + rng() % 5);
    for (auto& c : scaled[who]) c *= factor;
    const auto adj = build(counts), adj2 = build(scaled);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto self = semantic_distance(adj, BlogId(i), BlogId(i));
      o.require(adj.norm(BlogId(i)) > 0 ? (self && std::abs(*self) <= 1e-12) : !self, "delta(i,i) = 0");
      for (std::uint32_t j = 0; j < n; ++j) {
        const auto d = semantic_distance(adj, BlogId(i), BlogId(j));
        const auto r = semantic_distance(adj, BlogId(j), BlogId(i));
        const auto d2 = semantic_distance(adj2, BlogId(i), BlogId(j));
        o.require(d.has_value() == r.has_value() && d.has_value() == d2.has_value(), "definedness");
        if (!d || !r || !d2) continue;
        ++checked;
        o.require(std::abs(*d - *r) <= 1e-12, "symmetry");
        o.require(*d >= -1e-12 && *d <= 1.0 + 1e-12, "range [0,1]");
        o.require(std::abs(*d - *d2) <= 1e-12, "scale invariance");
      }
    }
  }
  o.detail << checked << " defined pairs over 100 profile sets";
}

// ---- 7 ---------------------------------------------------------------------

void conservation(Outcome& o) {
  std::mt19937_64 rng(2718281);
  std::size_t rows = 0;
  auto check_rows = [&](const AggregatedGraph& g) {
    const auto a = attention(g);
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
      Rational sum;
      for (const auto& e : a.row(BlogId(i))) sum += e.value;
      o.require(g.out_strength(BlogId(i)) > 0 ? sum == Rational(1) : sum.is_zero(), "attention row sum");
      rows += g.out_strength(BlogId(i)) > 0;
    }
  };
  for (int trial = 0; trial < 200; ++trial) check_rows(oracle::to_graph(oracle::random_digraph(rng)));

  GeneratorConfig cfg;
  cfg.n_blogs = 60;
  cfg.days = 120;
  cfg.relay_prob = 0.8;
  cfg.url_prob = 0.3;
  cfg.beta_social = 0.5;
  cfg.beta_semantic = 1.0;
  std::size_t windows = 0, subgraphs = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.seed = seed;
    const auto c = generate(cfg).ingest();
    const std::size_t n = c.blog_count();
    const WindowScheme s{60, 7, 8};
    for (Day t : {Day(30), Day(60), Day(120)}) check_rows(aggregate(c, t));
    for (const auto& curve :
         {propensity_social(c, s), propensity_detachment(c, s), propensity_semantic(c, s), propensity_2d(c, s)}) {
      for (std::size_t w = 0; w < s.windows; ++w) {
        std::uint64_t sum = 0;
        for (std::size_t b = 0; b < curve.bins.size(); ++b) sum += curve.tallies[b][w].denominator;
        std::uint64_t eligible = n * (n - 1);
        if (curve.kind == PropensityKind::semantic || curve.kind == PropensityKind::grid) {
          const auto adj = tfidf_adjust(build_profiles(c, s.start(w)));
          std::uint64_t nonzero = 0;
          for (std::uint32_t i = 0; i < n; ++i) nonzero += adj.norm(BlogId(i)) > 0;
          eligible = nonzero * (nonzero - (nonzero > 0 ? 1 : 0));
        }
        o.require(sum == eligible, std::string("denominators sum to eligible pairs (") + to_string(curve.kind) + ")");
        o.require(sum + curve.excluded[w] == n * (n - 1), "eligible + excluded = all ordered pairs");
        ++windows;
      }
    }
    const auto cat = all_subgraphs(c);
    for (const auto& g : cat.subgraphs) {
      const auto order = classify_edges(g);
      std::size_t first = 0, second = 0;
      for (auto x : order) (x == TransmissionOrder::first ? first : second)++;
      o.require(first + second == g.edges.size(), "FIRST + SECOND = edges");
      subgraphs += !g.trivial();
    }
  }
  o.require(subgraphs > 0, "non-vacuous diffusion check");
  o.detail << rows << " attention rows, " << windows << " curve windows, " << subgraphs << " non-trivial subgraphs";
}

// ---- 8 ---------------------------------------------------------------------

void performance(Outcome& o) {
  GeneratorConfig cfg;
  cfg.n_blogs = 1000;
  cfg.days = 120;
  cfg.posts_per_day = 0.5;
  cfg.beta_social = 1.0;
  cfg.beta_semantic = 1.0;
  cfg.seed = 8;
  const auto g0 = Clock::now();
  const auto synthetic = generate(cfg);
  std::ostringstream events;
  synthetic.write_events(events);
  const double gen = seconds_since(g0);

  const auto start = Clock::now();
  std::istringstream in(events.str());
  const auto c = ingest(in, synthetic.manifest);
  const WindowScheme s{60, 7, 8};
  std::size_t finite = 0;
  for (std::size_t k = 0; k < s.windows; ++k) {
    const auto g = aggregate(c, s.start(k));
    for (const auto& row : all_pairs_social(g)) {
      for (const auto& d : row) finite += d.is_finite();
    }
    for (const auto& row : all_pairs_detachment(g)) {
      for (const auto& d : row) finite += d.is_finite();
    }
  }
  const auto social = propensity_social(c, s);
  const auto det = propensity_detachment(c, s);
  const auto sem = propensity_semantic(c, s);
  const auto grid = propensity_2d(c, s);
  const auto cat = all_subgraphs(c);
  const auto sizes = size_distribution(cat.subgraphs);
  const auto at = first_transmissions_vs_attention(c, cat, 8);
  const auto er = second_transmissions_vs_edge_range(c, cat, 5);
  const double elapsed = seconds_since(start);
  o.require(elapsed < 60.0, "pipeline under 60 s");
  o.require(finite > 0 && !at.groups.empty() && !er.groups.empty() && !sizes.nodes.empty(), "pipeline produced output");
  o.detail << std::fixed << std::setprecision(1) << c.stats().posts << " posts, " << c.stats().dated_citation_edges
           << " dated edges, " << cat.non_trivial << " non-trivial subgraphs; pipeline " << elapsed << " s (generation "
           << gen << " s, excluded)";
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 = no runtime bound
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "attention fixtures (exact)", 1.0, attention_fixtures},
      {2, "relay cascade fixture (exact)", 1.0, cascade_fixture},
      {3, "oracle equivalence (exact)", 60.0, oracle_equivalence},
      {4, "null-model flatness", 0.0, null_flatness},
      {5, "homophily recovery", 0.0, homophily_recovery},
      {6, "semantic invariants", 0.0, semantic_invariants},
      {7, "conservation properties (exact)", 0.0, conservation},
      {8, "desk-scale performance", 0.0, performance},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    if (c.limit_seconds > 0.0) o.require(elapsed < c.limit_seconds, "runtime limit");
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << "  [" << std::fixed
              << std::setprecision(3) << elapsed << " s]  " << o.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
