#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cosoc/corpus.hpp"
#include "cosoc/parallel.hpp"
#include "cosoc/rational.hpp"
#include "cosoc/types.hpp"

namespace cosoc {

struct WeightedEdge {
  BlogId target;
  std::uint32_t weight = 0;
};

/// Weighted directed citation graph aggregated up to a cut-off day.
///
/// weights(i, j) is the number of days t' <= cutoff with C_t'(i, j) = 1.
/// Adjacency rows are sorted by target; absent pairs have weight 0 and there
/// are no self-loops.
class AggregatedGraph {
 public:
  AggregatedGraph() = default;
  AggregatedGraph(std::size_t nodes, Day cutoff) : cutoff_(cutoff), out_(nodes), out_strength_(nodes, 0) {}

  /// Builds a graph from explicit (from, to, weight) triples; repeated pairs add
  /// up. Intended for fixtures.
  static AggregatedGraph from_edges(std::size_t nodes, std::span<const std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges,
                                    Day cutoff = 0) {
    AggregatedGraph g(nodes, cutoff);
    for (const auto& [i, j, w] : edges) {
      if (i >= nodes || j >= nodes) throw ValidationError("edge endpoint out of range");
      if (i == j) throw ValidationError("self-loop in aggregated graph");
      if (w == 0) throw ValidationError("zero edge weight");
      g.add(BlogId(i), BlogId(j), w);
    }
    g.finalize();
    return g;
  }

  static AggregatedGraph from_edges(std::size_t nodes,
                                    std::initializer_list<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges,
                                    Day cutoff = 0) {
    return from_edges(nodes, std::span(edges.begin(), edges.size()), cutoff);
  }

  [[nodiscard]] Day cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] std::size_t node_count() const noexcept { return out_.size(); }
  [[nodiscard]] std::span<const WeightedEdge> out_edges(BlogId i) const { return out_.at(i.get()); }
  [[nodiscard]] std::uint64_t out_strength(BlogId i) const { return out_strength_.at(i.get()); }

  [[nodiscard]] std::size_t edge_count() const noexcept {
    std::size_t m = 0;
    for (const auto& row : out_) m += row.size();
    return m;
  }

  [[nodiscard]] std::uint32_t weight(BlogId i, BlogId j) const {
    const auto& row = out_.at(i.get());
    const auto it = std::lower_bound(row.begin(), row.end(), j,
                                     [](const WeightedEdge& e, BlogId t) { return e.target < t; });
    return (it != row.end() && it->target == j) ? it->weight : 0;
  }

  [[nodiscard]] bool has_edge(BlogId i, BlogId j) const { return weight(i, j) > 0; }

  void check_node(BlogId i) const {
    if (i.get() >= out_.size()) throw ValidationError("unknown node index " + std::to_string(i.get()));
  }

  /// Adds weight to (i, j); call finalize() before querying.
  void add(BlogId i, BlogId j, std::uint32_t w) {
    out_.at(i.get()).push_back({j, w});
    out_strength_.at(i.get()) += w;
  }

  /// Sorts rows and merges duplicate targets.
  void finalize() {
    for (auto& row : out_) {
      std::sort(row.begin(), row.end(), [](const WeightedEdge& a, const WeightedEdge& b) { return a.target < b.target; });
      std::size_t k = 0;
      for (std::size_t r = 0; r < row.size(); ++r) {
        if (k > 0 && row[k - 1].target == row[r].target) {
          row[k - 1].weight += row[r].weight;
        } else {
          row[k++] = row[r];
        }
      }
      row.resize(k);
    }
  }

 private:
  Day cutoff_ = 0;
  std::vector<std::vector<WeightedEdge>> out_;
  std::vector<std::uint64_t> out_strength_;
};

/// Aggregated graph **C**_t over every registered blog.
inline AggregatedGraph aggregate(const TemporalCorpus& corpus, Day t) {
  corpus.check_day(t);
  AggregatedGraph g(corpus.blog_count(), t);
  for (Day d = 1; d <= t; ++d) {
    for (const CitationPair& p : corpus.citations_on(d)) g.add(p.citing, p.cited, 1);
  }
  g.finalize();
  return g;
}

/// Sparse row-oriented map (i, j) -> exact rational, rows sorted by j.
struct RationalEdge {
  BlogId target;
  Rational value;
};

class RationalView {
 public:
  explicit RationalView(std::size_t nodes = 0) : rows_(nodes) {}

  [[nodiscard]] std::size_t node_count() const noexcept { return rows_.size(); }
  [[nodiscard]] std::span<const RationalEdge> row(BlogId i) const { return rows_.at(i.get()); }

  [[nodiscard]] std::optional<Rational> at(BlogId i, BlogId j) const {
    const auto& r = rows_.at(i.get());
    const auto it = std::lower_bound(r.begin(), r.end(), j, [](const RationalEdge& e, BlogId t) { return e.target < t; });
    if (it == r.end() || !(it->target == j)) return std::nullopt;
    return it->value;
  }

  std::vector<RationalEdge>& mutable_row(BlogId i) { return rows_.at(i.get()); }

 private:
  std::vector<std::vector<RationalEdge>> rows_;
};

/// a(i, j) = weights(i, j) / out_strength(i).
class AttentionView : public RationalView {
 public:
  using RationalView::RationalView;
};

/// d(i, j) = 1 / a(i, j), defined on the support of the attention view.
class DetachmentGraph : public RationalView {
 public:
  using RationalView::RationalView;
};

inline AttentionView attention(const AggregatedGraph& g) {
  AttentionView a(g.node_count());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    const BlogId src(i);
    const auto s = static_cast<std::int64_t>(g.out_strength(src));
    auto& row = a.mutable_row(src);
    for (const auto& e : g.out_edges(src)) row.push_back({e.target, Rational(e.weight, s)});
  }
  return a;
}

inline DetachmentGraph detachment(const AggregatedGraph& g) {
  DetachmentGraph d(g.node_count());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    const BlogId src(i);
    const auto s = static_cast<std::int64_t>(g.out_strength(src));
    auto& row = d.mutable_row(src);
    for (const auto& e : g.out_edges(src)) row.push_back({e.target, Rational(s, e.weight)});
  }
  return d;
}

using HopDistance = Extended<std::uint32_t>;
using WeightedDistance = Extended<Rational>;

/// Hop distances from `source` ignoring weights (BFS).
inline std::vector<HopDistance> social_distances_from(const AggregatedGraph& g, BlogId source) {
  g.check_node(source);
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> hops(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::uint32_t> frontier{source.get()};
  seen[source.get()] = true;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const std::uint32_t u = frontier[head];
    for (const auto& e : g.out_edges(BlogId(u))) {
      const auto v = e.target.get();
      if (!seen[v]) {
        seen[v] = true;
        hops[v] = hops[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  std::vector<HopDistance> out;
  out.reserve(n);
  for (std::size_t v = 0; v < n; ++v) out.push_back(seen[v] ? HopDistance(hops[v]) : HopDistance::infinite());
  return out;
}

inline HopDistance social_distance(const AggregatedGraph& g, BlogId i, BlogId j) {
  g.check_node(i);
  g.check_node(j);
  return social_distances_from(g, i)[j.get()];
}

/// Shortest-path tree in the detachment graph.
struct DetachmentTree {
  BlogId source;
  std::vector<std::optional<Rational>> dist;
  std::vector<std::optional<BlogId>> pred;

  [[nodiscard]] WeightedDistance distance(BlogId v) const {
    const auto& d = dist.at(v.get());
    return d ? WeightedDistance(*d) : WeightedDistance::infinite();
  }

  /// Node sequence source..v; empty when v is unreachable.
  [[nodiscard]] std::vector<BlogId> path_to(BlogId v) const {
    if (!dist.at(v.get())) return {};
    std::vector<BlogId> path{v};
    while (!(path.back() == source)) path.push_back(*pred.at(path.back().get()));
    std::reverse(path.begin(), path.end());
    return path;
  }
};

struct DijkstraOptions {
  /// Edge treated as absent.
  std::optional<CitationPair> excluded;
  /// Stop once this node's distance is final.
  std::optional<BlogId> target;
};

/// Dijkstra over exact rational detachment costs. Among equal-cost
/// predecessors the smallest node index is kept.
inline DetachmentTree detachment_tree(const DetachmentGraph& dg, BlogId source, const DijkstraOptions& opts = {}) {
  const std::size_t n = dg.node_count();
  if (source.get() >= n) throw ValidationError("unknown node index " + std::to_string(source.get()));
  DetachmentTree tree{source, std::vector<std::optional<Rational>>(n), std::vector<std::optional<BlogId>>(n)};
  std::vector<bool> done(n, false);

  struct Item {
    Rational d;
    std::uint32_t v;
  };
  auto worse = [](const Item& a, const Item& b) {
    const auto c = a.d <=> b.d;
    if (c != 0) return c > 0;
    return a.v > b.v;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> heap(worse);
  tree.dist[source.get()] = Rational(0);
  heap.push({Rational(0), source.get()});
  while (!heap.empty()) {
    Item top = heap.top();
    heap.pop();
    const std::uint32_t u = top.v;
    if (done[u]) continue;
    done[u] = true;
    if (opts.target && opts.target->get() == u) break;
    for (const RationalEdge& e : dg.row(BlogId(u))) {
      const std::uint32_t v = e.target.get();
      if (done[v]) continue;
      if (opts.excluded && opts.excluded->citing.get() == u && opts.excluded->cited.get() == v) continue;
      Rational cand = top.d + e.value;
      auto& dv = tree.dist[v];
      if (!dv || cand < *dv) {
        dv = cand;
        tree.pred[v] = BlogId(u);
        heap.push({std::move(cand), v});
      } else if (cand == *dv && u < tree.pred[v]->get()) {
        tree.pred[v] = BlogId(u);
      }
    }
  }
  return tree;
}

inline WeightedDistance detachment_distance(const DetachmentGraph& dg, BlogId i, BlogId j) {
  if (j.get() >= dg.node_count()) throw ValidationError("unknown node index " + std::to_string(j.get()));
  return detachment_tree(dg, i, {.excluded = std::nullopt, .target = j}).distance(j);
}

inline WeightedDistance detachment_distance(const AggregatedGraph& g, BlogId i, BlogId j) {
  g.check_node(i);
  g.check_node(j);
  return detachment_distance(detachment(g), i, j);
}

/// Detachment distance from i to j with edge (i, j) removed; the detachment
/// values of all other edges stay as computed on the intact graph.
inline WeightedDistance edge_range(const DetachmentGraph& dg, BlogId i, BlogId j) {
  if (i.get() >= dg.node_count() || j.get() >= dg.node_count() || !dg.at(i, j)) {
    throw ValidationError("edge_range: (" + std::to_string(i.get()) + ", " + std::to_string(j.get()) +
                          ") is not an edge");
  }
  return detachment_tree(dg, i, {.excluded = CitationPair{i, j}, .target = j}).distance(j);
}

inline WeightedDistance edge_range(const AggregatedGraph& g, BlogId i, BlogId j) {
  g.check_node(i);
  g.check_node(j);
  if (!g.has_edge(i, j)) {
    throw ValidationError("edge_range: (" + std::to_string(i.get()) + ", " + std::to_string(j.get()) +
                          ") is not an edge");
  }
  return edge_range(detachment(g), i, j);
}

/// alpha(j) = sum_i a(i, j) for every node.
inline std::vector<Rational> total_attentions(const AttentionView& a) {
  std::vector<Rational> alpha(a.node_count());
  for (std::uint32_t i = 0; i < a.node_count(); ++i) {
    for (const auto& e : a.row(BlogId(i))) alpha[e.target.get()] += e.value;
  }
  return alpha;
}

inline std::vector<Rational> total_attentions(const AggregatedGraph& g) { return total_attentions(attention(g)); }

inline Rational total_attention(const AggregatedGraph& g, BlogId j) {
  g.check_node(j);
  Rational sum;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    const BlogId src(i);
    if (const auto w = g.weight(src, j); w > 0) sum += Rational(w, static_cast<std::int64_t>(g.out_strength(src)));
  }
  return sum;
}

/// All-pairs hop distances, rows by source.
inline std::vector<std::vector<HopDistance>> all_pairs_social(const AggregatedGraph& g,
                                                              std::size_t workers = default_concurrency()) {
  std::vector<std::vector<HopDistance>> rows(g.node_count());
  parallel_chunks(g.node_count(), workers, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t s = b; s < e; ++s) rows[s] = social_distances_from(g, BlogId(static_cast<std::uint32_t>(s)));
  });
  return rows;
}

/// All-pairs detachment distances, rows by source.
inline std::vector<std::vector<WeightedDistance>> all_pairs_detachment(const AggregatedGraph& g,
                                                                       std::size_t workers = default_concurrency()) {
  const DetachmentGraph dg = detachment(g);
  std::vector<std::vector<WeightedDistance>> rows(g.node_count());
  parallel_chunks(g.node_count(), workers, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t s = b; s < e; ++s) {
      const auto tree = detachment_tree(dg, BlogId(static_cast<std::uint32_t>(s)));
      auto& row = rows[s];
      row.reserve(g.node_count());
      for (std::uint32_t v = 0; v < g.node_count(); ++v) row.push_back(tree.distance(BlogId(v)));
    }
  });
  return rows;
}

}  // namespace cosoc
