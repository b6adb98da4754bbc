#pragma once

#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cosoc/corpus.hpp"
#include "cosoc/diffusion.hpp"
#include "cosoc/graphmetrics.hpp"
#include "cosoc/propensity.hpp"
#include "cosoc/semantics.hpp"

// CSV writers for every tabular artifact. Each table starts with a header row;
// rows are ordered deterministically.

namespace cosoc::csv {

inline std::string real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string real(const std::optional<double>& v) { return v ? real(*v) : "NA"; }

/// Quotes a field when it contains a separator, quote or newline.
inline std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct NamedPair {
  BlogId src;
  BlogId dst;
};

inline void write_social_distances(std::ostream& out, const TemporalCorpus& corpus, const AggregatedGraph& g,
                                   const std::vector<NamedPair>& pairs) {
  out << "src,dst,distance\n";
  for (const auto& p : pairs) {
    out << field(corpus.blogs().name(p.src)) << ',' << field(corpus.blogs().name(p.dst)) << ','
        << social_distance(g, p.src, p.dst) << '\n';
  }
}

inline void write_detachment_distances(std::ostream& out, const TemporalCorpus& corpus, const DetachmentGraph& dg,
                                       const std::vector<NamedPair>& pairs) {
  out << "src,dst,distance\n";
  for (const auto& p : pairs) {
    out << field(corpus.blogs().name(p.src)) << ',' << field(corpus.blogs().name(p.dst)) << ','
        << detachment_distance(dg, p.src, p.dst) << '\n';
  }
}

inline void write_all_social(std::ostream& out, const TemporalCorpus& corpus, const AggregatedGraph& g) {
  out << "src,dst,distance\n";
  const auto rows = all_pairs_social(g);
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    for (std::uint32_t j = 0; j < rows[i].size(); ++j) {
      out << field(corpus.blogs().name(BlogId(i))) << ',' << field(corpus.blogs().name(BlogId(j))) << ',' << rows[i][j]
          << '\n';
    }
  }
}

inline void write_all_detachment(std::ostream& out, const TemporalCorpus& corpus, const AggregatedGraph& g) {
  out << "src,dst,distance\n";
  const auto rows = all_pairs_detachment(g);
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    for (std::uint32_t j = 0; j < rows[i].size(); ++j) {
      out << field(corpus.blogs().name(BlogId(i))) << ',' << field(corpus.blogs().name(BlogId(j))) << ',' << rows[i][j]
          << '\n';
    }
  }
}

inline void write_semantic_distances(std::ostream& out, const TemporalCorpus& corpus, const AdjustedProfile& adj,
                                     const std::vector<NamedPair>& pairs) {
  out << "i,j,delta\n";
  for (const auto& p : pairs) {
    out << field(corpus.blogs().name(p.src)) << ',' << field(corpus.blogs().name(p.dst)) << ','
        << real(semantic_distance(adj, p.src, p.dst)) << '\n';
  }
}

inline std::vector<NamedPair> all_ordered_pairs(std::size_t n) {
  std::vector<NamedPair> out;
  out.reserve(n * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) out.push_back({BlogId(i), BlogId(j)});
  }
  return out;
}

/// Per-window tallies: bin_lo,bin_hi,window,raw_f,denominator (2-D grids
/// prepend a `d` column).
inline void write_propensity(std::ostream& out, const PropensityCurve& c) {
  const bool grid = c.kind == PropensityKind::grid;
  out << (grid ? "d," : "") << "bin_lo,bin_hi,window,raw_f,denominator\n";
  for (std::size_t b = 0; b < c.bins.size(); ++b) {
    for (std::size_t w = 0; w < c.scheme.windows; ++w) {
      if (grid) out << c.bins[b].row << ',';
      out << c.bins[b].lo << ',' << c.bins[b].hi << ',' << w << ',' << real(c.raw_f(b, w)) << ','
          << c.tallies[b][w].denominator << '\n';
    }
  }
}

inline void write_propensity_summary(std::ostream& out, const PropensityCurve& c) {
  const bool grid = c.kind == PropensityKind::grid;
  out << (grid ? "d," : "") << "bin_lo,bin_hi,mean,normalized_mean,ci95_halfwidth\n";
  for (std::size_t b = 0; b < c.bins.size(); ++b) {
    const auto& s = c.summary[b];
    if (grid) out << c.bins[b].row << ',';
    out << c.bins[b].lo << ',' << c.bins[b].hi << ',' << real(s.mean) << ',' << real(s.normalized_mean) << ','
        << real(s.ci95_halfwidth) << '\n';
  }
}

/// One JSON line per non-trivial subgraph: url, nodes, dated edges with order.
inline void write_subgraphs(std::ostream& out, const TemporalCorpus& corpus, const DiffusionCatalog& catalog) {
  for (const auto& g : catalog.subgraphs) {
    if (g.trivial()) continue;
    const auto order = classify_edges(g);
    nlohmann::json j;
    j["url"] = corpus.urls().name(g.url);
    auto& nodes = j["nodes"] = nlohmann::json::array();
    for (BlogId b : g.nodes) nodes.push_back(corpus.blogs().name(b));
    auto& edges = j["edges"] = nlohmann::json::array();
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      const auto& e = g.edges[k];
      edges.push_back({{"from", corpus.blogs().name(e.citing)},
                       {"to", corpus.blogs().name(e.cited)},
                       {"day", e.day},
                       {"order", to_string(order[k])}});
    }
    out << j.dump() << '\n';
  }
}

inline void write_sizes(std::ostream& out, const SizeDistribution& d) {
  out << "measure,size,count\n";
  for (const auto& [size, count] : d.nodes) out << "nodes," << size << ',' << count << '\n';
  for (const auto& [size, count] : d.edges) out << "edges," << size << ',' << count << '\n';
}

inline void write_attention_table(std::ostream& out, const AttentionTable& t) {
  out << "quantile,alpha_lo,alpha_hi,initiators,mean_first,mean_second,active_initiators,mean_first_active,"
         "mean_second_active\n";
  for (const auto& g : t.groups) {
    out << g.group << ',' << g.alpha_lo << ',' << g.alpha_hi << ',' << g.initiators << ',' << real(g.mean_first) << ','
        << real(g.mean_second) << ',' << g.active_initiators << ',' << real(g.mean_first_active) << ','
        << real(g.mean_second_active) << '\n';
  }
}

inline void write_edge_range_table(std::ostream& out, const EdgeRangeTable& t) {
  out << "quintile,r_lo,r_hi,records,mean_second\n";
  for (const auto& g : t.groups) {
    out << (g.group ? std::to_string(*g.group) : std::string("inf")) << ',' << g.range_lo << ',' << g.range_hi << ','
        << g.records << ',' << real(g.mean_second) << '\n';
  }
}

}  // namespace cosoc::csv
