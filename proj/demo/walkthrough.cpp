// Walkthrough of the library on two inputs: a four-post relay cascade and a
// synthetic corpus with semantic homophily.
//
//   cosoc_demo [events.jsonl manifest.json]

#include <iomanip>
#include <iostream>

#include "cosoc/cosoc.hpp"

using namespace cosoc;

namespace {

void cascade(const TemporalCorpus& c) {
  std::cout << "== corpus\n"
            << c.stats().blogs << " blogs, " << c.stats().posts << " posts, " << c.stats().dated_citation_edges
            << " dated citation edges, horizon day " << c.horizon() << "\n\n";

  const auto g = aggregate(c, c.horizon());
  const auto a = attention(g);
  std::cout << "== attention and detachment at day " << c.horizon() << '\n';
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    for (const auto& e : a.row(BlogId(i))) {
      std::cout << c.blogs().name(BlogId(i)) << " -> " << c.blogs().name(e.target) << "  a = " << e.value
                << "  detachment = " << Rational(1) / e.value << '\n';
    }
  }
  const auto alpha = total_attentions(a);
  for (std::uint32_t j = 0; j < alpha.size(); ++j) std::cout << "alpha(" << c.blogs().name(BlogId(j)) << ") = " << alpha[j] << '\n';

  std::cout << "\n== diffusion subgraphs\n";
  const auto catalog = all_subgraphs(c);
  for (const auto& s : catalog.subgraphs) {
    if (s.trivial()) continue;
    std::cout << c.urls().name(s.url) << '\n';
    const auto order = classify_edges(s);
    for (std::size_t k = 0; k < s.edges.size(); ++k) {
      const auto& e = s.edges[k];
      std::cout << "  day " << std::setw(3) << e.day << "  " << c.blogs().name(e.citing) << " <- "
                << c.blogs().name(e.cited) << "  " << to_string(order[k]) << '\n';
    }
  }
  const auto table = second_transmissions_vs_edge_range(c, catalog, 5);
  for (const auto& r : table.records) {
    std::cout << "  FIRST " << c.blogs().name(r.edge.citing) << " -> " << c.blogs().name(r.edge.cited)
              << ": edge range " << r.edge_range << ", extended " << r.second_transmissions << " time(s)\n";
  }
  std::cout << '\n';
  build_report(c, catalog).write_text(std::cout);
}

void homophily() {
  GeneratorConfig cfg;
  cfg.n_blogs = 80;
  cfg.days = 120;
  cfg.beta_semantic = 3.0;
  cfg.relay_prob = 0.0;
  cfg.seed = 7;
  const auto c = generate(cfg).ingest();
  const auto curve = propensity_semantic(c, WindowScheme{60, 7, 8}, 0.1);
  std::cout << "\n== semantic propensity, synthetic corpus (beta_semantic = 3)\n"
            << "delta bin        normalized   +/- 95%\n";
  for (std::size_t b = 0; b < curve.bins.size(); ++b) {
    const auto& s = curve.summary[b];
    if (!s.normalized_mean) continue;
    std::cout << std::left << std::setw(16) << (curve.bins[b].lo + " .. " + curve.bins[b].hi) << std::right
              << std::fixed << std::setprecision(3) << std::setw(10) << *s.normalized_mean << std::setw(10)
              << s.ci95_halfwidth.value_or(0.0) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    if (argc == 3) {
      cascade(ingest_file(argv[1], WindowManifest::load(argv[2])));
    } else {
      const std::vector<PostRecord> script{
          {"a", 1, {"primary", "debate"}, {"http://example.com/u0"}, {}},
          {"c", 19, {"debate", "polls"}, {"http://example.com/u0"}, {"a"}},
          {"b", 20, {"polls"}, {"http://example.com/u0"}, {"a", "c"}},
          {"d", 26, {"primary", "economy"}, {"http://example.com/u0"}, {"b"}},
      };
      cascade(ingest_records(script, WindowManifest{30, {"a", "b", "c", "d"}, std::nullopt}));
    }
    homophily();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
