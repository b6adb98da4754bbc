#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cosoc/corpus.hpp"
#include "cosoc/graphmetrics.hpp"
#include "cosoc/rational.hpp"
#include "cosoc/types.hpp"

namespace cosoc {

/// i cited j on `day` while mentioning the URL, j having mentioned it before.
struct TransmissionEdge {
  BlogId citing;
  BlogId cited;
  Day day = 0;

  friend constexpr bool operator==(const TransmissionEdge&, const TransmissionEdge&) = default;
  friend constexpr auto operator<=>(const TransmissionEdge& a, const TransmissionEdge& b) {
    if (auto c = a.day <=> b.day; c != 0) return c;
    if (auto c = a.citing <=> b.citing; c != 0) return c;
    return a.cited <=> b.cited;
  }
};

struct DiffusionSubgraph {
  UrlId url;
  /// Blogs that mentioned the URL, sorted.
  std::vector<BlogId> nodes;
  /// Transmission links sorted by (day, citing, cited).
  std::vector<TransmissionEdge> edges;

  [[nodiscard]] bool trivial() const noexcept { return edges.empty(); }
};

inline DiffusionSubgraph extract_subgraph(const TemporalCorpus& corpus, UrlId url) {
  if (url.get() >= corpus.urls().size()) throw ValidationError("unknown URL index " + std::to_string(url.get()));
  DiffusionSubgraph g;
  g.url = url;
  const auto mentions = corpus.mentions_of(url);
  std::unordered_map<std::uint32_t, Day> first_mention;
  for (const auto& [day, blog] : mentions) first_mention.try_emplace(blog.get(), day);  // sorted by day
  for (const auto& [blog, day] : first_mention) g.nodes.emplace_back(blog);
  std::sort(g.nodes.begin(), g.nodes.end());

  for (const auto& [day, blog] : mentions) {
    const auto cites = corpus.citations_on(day);
    auto [lo, hi] = std::equal_range(cites.begin(), cites.end(), CitationPair{blog, BlogId(0)},
                                     [](const CitationPair& a, const CitationPair& b) { return a.citing < b.citing; });
    for (auto it = lo; it != hi; ++it) {
      const auto fm = first_mention.find(it->cited.get());
      if (fm != first_mention.end() && fm->second < day) g.edges.push_back({blog, it->cited, day});
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

struct DiffusionCatalog {
  /// Indexed by URL.
  std::vector<DiffusionSubgraph> subgraphs;
  std::size_t trivial = 0;
  std::size_t non_trivial = 0;
  std::size_t transmission_links = 0;
};

inline DiffusionCatalog all_subgraphs(const TemporalCorpus& corpus) {
  DiffusionCatalog c;
  c.subgraphs.reserve(corpus.urls().size());
  for (std::uint32_t u = 0; u < corpus.urls().size(); ++u) {
    c.subgraphs.push_back(extract_subgraph(corpus, UrlId(u)));
    const auto& g = c.subgraphs.back();
    if (g.trivial()) {
      ++c.trivial;
    } else {
      ++c.non_trivial;
      c.transmission_links += g.edges.size();
    }
  }
  return c;
}

enum class TransmissionOrder { first, second };

inline const char* to_string(TransmissionOrder o) { return o == TransmissionOrder::first ? "first" : "second"; }

/// Order of each edge, aligned with g.edges. An edge (i, j, t) is SECOND when
/// j has an outgoing transmission edge on or before t, FIRST otherwise.
inline std::vector<TransmissionOrder> classify_edges(const DiffusionSubgraph& g) {
  std::unordered_map<std::uint32_t, Day> earliest_out;
  for (const auto& e : g.edges) earliest_out.try_emplace(e.citing.get(), e.day);  // edges sorted by day
  std::vector<TransmissionOrder> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    const auto it = earliest_out.find(e.cited.get());
    out.push_back(it != earliest_out.end() && it->second <= e.day ? TransmissionOrder::second : TransmissionOrder::first);
  }
  return out;
}

/// First-mention day of every node of the subgraph.
inline std::vector<std::pair<BlogId, Day>> first_mentions(const TemporalCorpus& corpus, const DiffusionSubgraph& g) {
  std::unordered_map<std::uint32_t, Day> first;
  for (const auto& [day, blog] : corpus.mentions_of(g.url)) first.try_emplace(blog.get(), day);
  std::vector<std::pair<BlogId, Day>> out;
  out.reserve(g.nodes.size());
  for (BlogId b : g.nodes) out.emplace_back(b, first.at(b.get()));
  return out;
}

/// Blogs with no outgoing transmission edge on their first-mention day, with
/// that day.
inline std::vector<std::pair<BlogId, Day>> initiators(const TemporalCorpus& corpus, const DiffusionSubgraph& g) {
  std::vector<std::pair<BlogId, Day>> out;
  for (const auto& [blog, day] : first_mentions(corpus, g)) {
    const bool relays = std::any_of(g.edges.begin(), g.edges.end(),
                                    [&](const TransmissionEdge& e) { return e.citing == blog && e.day == day; });
    if (!relays) out.emplace_back(blog, day);
  }
  return out;
}

/// Number of SECOND edges (k, j, t'') with t'' >= t extending FIRST edge (j, i, t).
inline std::size_t second_extensions(const DiffusionSubgraph& g, const std::vector<TransmissionOrder>& order,
                                     const TransmissionEdge& first) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    if (order[k] == TransmissionOrder::second && e.cited == first.citing && e.day >= first.day) ++n;
  }
  return n;
}

struct SizeDistribution {
  /// node count -> number of non-trivial subgraphs
  std::map<std::size_t, std::size_t> nodes;
  /// dated edge count -> number of non-trivial subgraphs
  std::map<std::size_t, std::size_t> edges;
};

inline SizeDistribution size_distribution(const std::vector<DiffusionSubgraph>& subgraphs) {
  SizeDistribution d;
  for (const auto& g : subgraphs) {
    if (g.trivial()) continue;
    ++d.nodes[g.nodes.size()];
    ++d.edges[g.edges.size()];
  }
  return d;
}

/// Group index for every value using nearest-rank cut points: cut_k is the
/// ceil(k n / q)-th smallest value, and a value goes to the first group whose
/// cut point it does not exceed, so ties on a boundary land in the lower group.
template <class T>
std::vector<std::size_t> nearest_rank_groups(const std::vector<T>& values, std::size_t groups) {
  if (groups < 2) throw ValidationError("quantile count must be >= 2");
  std::vector<std::size_t> out(values.size(), 0);
  if (values.empty()) return out;
  std::vector<T> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<T> cuts;
  for (std::size_t k = 1; k < groups; ++k) {
    const std::size_t rank = (k * n + groups - 1) / groups;  // ceil(k n / q), >= 1
    cuts.push_back(sorted[std::max<std::size_t>(rank, 1) - 1]);
  }
  for (std::size_t v = 0; v < values.size(); ++v) {
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), values[v]);
    out[v] = static_cast<std::size_t>(it - cuts.begin());
  }
  return out;
}

struct InitiatorRecord {
  UrlId url;
  BlogId initiator;
  Day first_mention = 0;
  /// alpha on C aggregated at the first-mention day.
  Rational alpha;
  std::size_t first_transmissions = 0;
  /// SECOND edges extending this initiator's FIRST edges.
  std::size_t second_transmissions = 0;
};

struct AttentionGroup {
  std::size_t group = 0;
  Rational alpha_lo;
  Rational alpha_hi;
  std::size_t initiators = 0;
  double mean_first = 0.0;
  double mean_second = 0.0;
  /// Same means restricted to initiators with at least one FIRST edge.
  std::size_t active_initiators = 0;
  std::optional<double> mean_first_active;
  std::optional<double> mean_second_active;
};

struct AttentionTable {
  std::vector<InitiatorRecord> records;
  /// Non-empty groups only, ascending.
  std::vector<AttentionGroup> groups;
};

struct FirstTransmissionRecord {
  UrlId url;
  TransmissionEdge edge;
  /// r(j, i) on C aggregated at the transmission day.
  WeightedDistance edge_range = WeightedDistance::infinite();
  std::size_t second_transmissions = 0;
};

struct EdgeRangeGroup {
  /// Quintile index; unset for the unreachable group.
  std::optional<std::size_t> group;
  std::string range_lo;
  std::string range_hi;
  std::size_t records = 0;
  double mean_second = 0.0;
};

struct EdgeRangeTable {
  std::vector<FirstTransmissionRecord> records;
  /// Non-empty finite groups ascending, then the unreachable group if any.
  std::vector<EdgeRangeGroup> groups;
};

namespace detail {

/// Aggregated-graph derived views cached by cut-off day.
class DayCache {
 public:
  explicit DayCache(const TemporalCorpus& corpus) : corpus_(corpus) {}

  const std::vector<Rational>& alphas(Day t) {
    auto it = alphas_.find(t);
    if (it == alphas_.end()) it = alphas_.emplace(t, total_attentions(aggregate(corpus_, t))).first;
    return it->second;
  }

  const DetachmentGraph& detachments(Day t) {
    auto it = detachments_.find(t);
    if (it == detachments_.end()) it = detachments_.emplace(t, detachment(aggregate(corpus_, t))).first;
    return it->second;
  }

 private:
  const TemporalCorpus& corpus_;
  std::map<Day, std::vector<Rational>> alphas_;
  std::map<Day, DetachmentGraph> detachments_;
};

inline double mean_of(std::size_t sum, std::size_t n) { return n == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(n); }

}  // namespace detail

/// Initiators of every URL (trivial subgraphs included) grouped by alpha
/// quantile, with mean FIRST and SECOND transmission counts per group. The
/// "active" columns repeat the means over initiators with at least one FIRST
/// transmission.
inline AttentionTable first_transmissions_vs_attention(const TemporalCorpus& corpus, const DiffusionCatalog& catalog,
                                                       std::size_t quantiles = 8) {
  if (quantiles < 2) throw ValidationError("quantile count must be >= 2");
  AttentionTable table;
  detail::DayCache cache(corpus);
  for (const auto& g : catalog.subgraphs) {
    const auto order = classify_edges(g);
    for (const auto& [blog, day] : initiators(corpus, g)) {
      InitiatorRecord r{g.url, blog, day, cache.alphas(day).at(blog.get()), 0, 0};
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        if (order[k] == TransmissionOrder::first && g.edges[k].cited == blog) {
          ++r.first_transmissions;
          r.second_transmissions += second_extensions(g, order, g.edges[k]);
        }
      }
      table.records.push_back(std::move(r));
    }
  }
  std::vector<Rational> alphas;
  alphas.reserve(table.records.size());
  for (const auto& r : table.records) alphas.push_back(r.alpha);
  const auto group_of = nearest_rank_groups(alphas, quantiles);
  for (std::size_t q = 0; q < quantiles; ++q) {
    AttentionGroup grp;
    grp.group = q;
    std::size_t first = 0, second = 0, first_active = 0, second_active = 0;
    bool any = false;
    for (std::size_t k = 0; k < table.records.size(); ++k) {
      if (group_of[k] != q) continue;
      const auto& r = table.records[k];
      if (!any || r.alpha < grp.alpha_lo) grp.alpha_lo = r.alpha;
      if (!any || grp.alpha_hi < r.alpha) grp.alpha_hi = r.alpha;
      any = true;
      ++grp.initiators;
      first += r.first_transmissions;
      second += r.second_transmissions;
      if (r.first_transmissions > 0) {
        ++grp.active_initiators;
        first_active += r.first_transmissions;
        second_active += r.second_transmissions;
      }
    }
    if (!any) continue;
    grp.mean_first = detail::mean_of(first, grp.initiators);
    grp.mean_second = detail::mean_of(second, grp.initiators);
    if (grp.active_initiators > 0) {
      grp.mean_first_active = detail::mean_of(first_active, grp.active_initiators);
      grp.mean_second_active = detail::mean_of(second_active, grp.active_initiators);
    }
    table.groups.push_back(std::move(grp));
  }
  return table;
}

/// FIRST transmissions grouped by edge-range quantile of the transmitting
/// edge, with the mean number of SECOND transmissions extending them.
inline EdgeRangeTable second_transmissions_vs_edge_range(const TemporalCorpus& corpus, const DiffusionCatalog& catalog,
                                                         std::size_t quintiles = 5) {
  if (quintiles < 2) throw ValidationError("quantile count must be >= 2");
  EdgeRangeTable table;
  detail::DayCache cache(corpus);
  for (const auto& g : catalog.subgraphs) {
    if (g.trivial()) continue;
    const auto order = classify_edges(g);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (order[k] != TransmissionOrder::first) continue;
      const auto& e = g.edges[k];
      FirstTransmissionRecord r{g.url, e, edge_range(cache.detachments(e.day), e.citing, e.cited),
                                second_extensions(g, order, e)};
      table.records.push_back(std::move(r));
    }
  }
  std::vector<Rational> finite;
  std::vector<std::size_t> finite_idx;
  for (std::size_t k = 0; k < table.records.size(); ++k) {
    if (table.records[k].edge_range.is_finite()) {
      finite.push_back(table.records[k].edge_range.value());
      finite_idx.push_back(k);
    }
  }
  const auto group_of = nearest_rank_groups(finite, quintiles);
  for (std::size_t q = 0; q < quintiles; ++q) {
    EdgeRangeGroup grp;
    grp.group = q;
    std::optional<Rational> lo, hi;
    std::size_t second = 0;
    for (std::size_t m = 0; m < finite.size(); ++m) {
      if (group_of[m] != q) continue;
      if (!lo || finite[m] < *lo) lo = finite[m];
      if (!hi || *hi < finite[m]) hi = finite[m];
      ++grp.records;
      second += table.records[finite_idx[m]].second_transmissions;
    }
    if (grp.records == 0) continue;
    grp.range_lo = lo->to_string();
    grp.range_hi = hi->to_string();
    grp.mean_second = detail::mean_of(second, grp.records);
    table.groups.push_back(std::move(grp));
  }
  EdgeRangeGroup inf;
  inf.range_lo = "inf";
  inf.range_hi = "inf";
  std::size_t second = 0;
  for (const auto& r : table.records) {
    if (r.edge_range.is_finite()) continue;
    ++inf.records;
    second += r.second_transmissions;
  }
  if (inf.records > 0) {
    inf.mean_second = detail::mean_of(second, inf.records);
    table.groups.push_back(std::move(inf));
  }
  return table;
}

}  // namespace cosoc
