#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cosoc/corpus.hpp"
#include "cosoc/types.hpp"

namespace cosoc {

struct TermCount {
  TermId term;
  std::uint32_t count = 0;
};

struct TermWeight {
  TermId term;
  double value = 0.0;
};

/// Aggregated term profiles **W**_t: counts(i, w) is the number of days <= t on
/// which blog i used term w. Rows are sparse and sorted by term.
class SemanticProfile {
 public:
  SemanticProfile() = default;
  SemanticProfile(std::size_t blogs, std::size_t terms, Day cutoff) : cutoff_(cutoff), term_count_(terms), rows_(blogs) {}

  [[nodiscard]] Day cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] std::size_t blog_count() const noexcept { return rows_.size(); }
  [[nodiscard]] std::size_t term_count() const noexcept { return term_count_; }
  [[nodiscard]] std::span<const TermCount> row(BlogId i) const { return rows_.at(i.get()); }

  [[nodiscard]] std::uint32_t count(BlogId i, TermId w) const {
    const auto& r = rows_.at(i.get());
    const auto it = std::lower_bound(r.begin(), r.end(), w, [](const TermCount& c, TermId t) { return c.term < t; });
    return (it != r.end() && it->term == w) ? it->count : 0;
  }

  /// Replaces blog i's row; entries must be sorted by term with positive counts.
  void set_row(BlogId i, std::vector<TermCount> row) { rows_.at(i.get()) = std::move(row); }

 private:
  Day cutoff_ = 0;
  std::size_t term_count_ = 0;
  std::vector<std::vector<TermCount>> rows_;
};

/// tf-idf adjusted profiles with cached Euclidean norms.
class AdjustedProfile {
 public:
  AdjustedProfile() = default;
  AdjustedProfile(std::size_t blogs, std::size_t terms) : term_count_(terms), rows_(blogs), norms_(blogs, 0.0) {}

  [[nodiscard]] std::size_t blog_count() const noexcept { return rows_.size(); }
  [[nodiscard]] std::size_t term_count() const noexcept { return term_count_; }
  [[nodiscard]] std::span<const TermWeight> row(BlogId i) const { return rows_.at(i.get()); }
  [[nodiscard]] double norm(BlogId i) const { return norms_.at(i.get()); }

  [[nodiscard]] double value(BlogId i, TermId w) const {
    const auto& r = rows_.at(i.get());
    const auto it = std::lower_bound(r.begin(), r.end(), w, [](const TermWeight& c, TermId t) { return c.term < t; });
    return (it != r.end() && it->term == w) ? it->value : 0.0;
  }

  void set_row(BlogId i, std::vector<TermWeight> row) {
    for (const auto& e : row) {
      if (e.term.get() >= term_count_) throw ValidationError("term index out of range");
    }
    double sq = 0.0;
    for (const auto& e : row) sq += e.value * e.value;
    norms_.at(i.get()) = std::sqrt(sq);
    rows_.at(i.get()) = std::move(row);
  }

  void check_blog(BlogId i) const {
    if (i.get() >= rows_.size()) throw ValidationError("unknown blog index " + std::to_string(i.get()));
  }

 private:
  std::size_t term_count_ = 0;
  std::vector<std::vector<TermWeight>> rows_;
  std::vector<double> norms_;
};

inline SemanticProfile build_profiles(const TemporalCorpus& corpus, Day t) {
  corpus.check_day(t);
  std::vector<std::vector<std::uint32_t>> dense(corpus.blog_count());
  std::vector<std::vector<TermId>> touched(corpus.blog_count());
  for (Day d = 1; d <= t; ++d) {
    for (const BlogTerm& bt : corpus.term_uses_on(d)) {
      auto& row = dense[bt.blog.get()];
      if (row.empty()) row.assign(corpus.terms().size(), 0);
      if (row[bt.term.get()]++ == 0) touched[bt.blog.get()].push_back(bt.term);
    }
  }
  SemanticProfile p(corpus.blog_count(), corpus.terms().size(), t);
  for (std::uint32_t i = 0; i < corpus.blog_count(); ++i) {
    auto& terms = touched[i];
    std::sort(terms.begin(), terms.end());
    std::vector<TermCount> row;
    row.reserve(terms.size());
    for (TermId w : terms) row.push_back({w, dense[i][w.get()]});
    p.set_row(BlogId(i), std::move(row));
  }
  return p;
}

/// W^(i, w) = counts(i, w) / sum_w counts(i, w) * ln(|B| / df(w)), with |B| the
/// number of registered blogs.
inline AdjustedProfile tfidf_adjust(const SemanticProfile& profiles) {
  const std::size_t blogs = profiles.blog_count();
  std::vector<std::uint32_t> df(profiles.term_count(), 0);
  for (std::uint32_t i = 0; i < blogs; ++i) {
    for (const auto& c : profiles.row(BlogId(i))) ++df.at(c.term.get());
  }
  AdjustedProfile adj(blogs, profiles.term_count());
  for (std::uint32_t i = 0; i < blogs; ++i) {
    const auto row = profiles.row(BlogId(i));
    std::uint64_t total = 0;
    for (const auto& c : row) total += c.count;
    std::vector<TermWeight> out;
    out.reserve(row.size());
    for (const auto& c : row) {
      const double tf = static_cast<double>(c.count) / static_cast<double>(total);
      const double idf = std::log(static_cast<double>(blogs) / static_cast<double>(df[c.term.get()]));
      const double v = tf * idf;
      if (v != 0.0) out.push_back({c.term, v});
    }
    adj.set_row(BlogId(i), std::move(out));
  }
  return adj;
}

/// delta(i, j) = 1 - cos(W^(i), W^(j)), clamped to [0, 1]; nullopt when either
/// adjusted vector is all-zero.
inline std::optional<double> semantic_distance(const AdjustedProfile& adj, BlogId i, BlogId j) {
  adj.check_blog(i);
  adj.check_blog(j);
  const double ni = adj.norm(i);
  const double nj = adj.norm(j);
  if (ni == 0.0 || nj == 0.0) return std::nullopt;
  const auto a = adj.row(i);
  const auto b = adj.row(j);
  double dot = 0.0;
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < a.size() && q < b.size()) {
    if (a[p].term < b[q].term) {
      ++p;
    } else if (b[q].term < a[p].term) {
      ++q;
    } else {
      dot += a[p].value * b[q].value;
      ++p;
      ++q;
    }
  }
  const double delta = 1.0 - dot / (ni * nj);
  return std::clamp(delta, 0.0, 1.0);
}

/// delta(source, j) for every j, written to `out` (nullopt where undefined).
/// Produces exactly the values of semantic_distance(adj, source, j).
inline void semantic_distances_from(const AdjustedProfile& adj, BlogId source, std::vector<double>& scratch,
                                    std::vector<std::optional<double>>& out) {
  adj.check_blog(source);
  const std::size_t n = adj.blog_count();
  out.assign(n, std::nullopt);
  const double ni = adj.norm(source);
  if (ni == 0.0) return;
  const auto src = adj.row(source);
  scratch.assign(adj.term_count(), 0.0);
  for (const auto& e : src) scratch[e.term.get()] = e.value;
  for (std::uint32_t j = 0; j < n; ++j) {
    const double nj = adj.norm(BlogId(j));
    if (nj == 0.0) continue;
    double dot = 0.0;
    for (const auto& e : adj.row(BlogId(j))) {
      const double a = scratch[e.term.get()];
      if (a != 0.0) dot += a * e.value;
    }
    out[j] = std::clamp(1.0 - dot / (ni * nj), 0.0, 1.0);
  }
}

}  // namespace cosoc
