#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "cosoc/corpus.hpp"
#include "cosoc/graphmetrics.hpp"
#include "cosoc/parallel.hpp"
#include "cosoc/rational.hpp"
#include "cosoc/semantics.hpp"
#include "cosoc/types.hpp"

namespace cosoc {

/// Rolling observation windows [t_k + 1, t_k + length], t_k = t0 + k * length.
struct WindowScheme {
  Day t0 = 60;
  Day length = 7;
  std::size_t windows = 8;

  [[nodiscard]] Day start(std::size_t k) const { return t0 + static_cast<Day>(k) * length; }

  void validate(Day horizon) const {
    if (t0 < 1) throw ValidationError("window scheme: t0 must be >= 1");
    if (length < 1) throw ValidationError("window scheme: window length must be >= 1");
    if (windows < 1) throw ValidationError("window scheme: need at least one window");
    const Day last_end = start(windows - 1) + length;
    if (last_end > horizon) {
      throw ValidationError("window scheme: last window ends on day " + std::to_string(last_end) +
                            " beyond horizon " + std::to_string(horizon));
    }
  }
};

enum class PropensityKind { social, detachment, semantic, grid };

inline const char* to_string(PropensityKind k) {
  switch (k) {
    case PropensityKind::social: return "social";
    case PropensityKind::detachment: return "detachment";
    case PropensityKind::semantic: return "semantic";
    case PropensityKind::grid: return "2d";
  }
  return "?";
}

/// Printable bin bounds. For the 2-D grid `row` holds the social-distance
/// label and lo/hi the semantic interval.
struct PropensityBin {
  std::string row;
  std::string lo;
  std::string hi;
};

struct Tally {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  Tally& operator+=(const Tally& o) {
    numerator += o.numerator;
    denominator += o.denominator;
    return *this;
  }
  friend bool operator==(const Tally&, const Tally&) = default;
};

struct BinSummary {
  /// Mean raw propensity over windows with eligible pairs.
  std::optional<double> mean;
  /// Mean of f(bin) / f_overall over windows where both are defined.
  std::optional<double> normalized_mean;
  /// Student-t 95% half-width of normalized_mean; needs two windows.
  std::optional<double> ci95_halfwidth;
  std::size_t windows_used = 0;
};

struct PropensityCurve {
  PropensityKind kind = PropensityKind::social;
  WindowScheme scheme;
  std::vector<PropensityBin> bins;
  /// tallies[bin][window]
  std::vector<std::vector<Tally>> tallies;
  /// Per-window sum over bins.
  std::vector<Tally> overall;
  /// Per-window ordered pairs left out because a distance was undefined.
  std::vector<std::uint64_t> excluded;
  std::vector<BinSummary> summary;

  [[nodiscard]] std::optional<double> raw_f(std::size_t bin, std::size_t window) const {
    const Tally& t = tallies.at(bin).at(window);
    if (t.denominator == 0) return std::nullopt;
    return static_cast<double>(t.numerator) / static_cast<double>(t.denominator);
  }

  [[nodiscard]] std::optional<double> overall_f(std::size_t window) const {
    const Tally& t = overall.at(window);
    if (t.denominator == 0) return std::nullopt;
    return static_cast<double>(t.numerator) / static_cast<double>(t.denominator);
  }
};

namespace detail {

inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

/// Summary statistics across windows; bins without eligible pairs in a window
/// are skipped for that window.
inline void summarize(PropensityCurve& c) {
  c.summary.assign(c.bins.size(), {});
  for (std::size_t b = 0; b < c.bins.size(); ++b) {
    std::vector<double> raw;
    std::vector<double> norm;
    for (std::size_t w = 0; w < c.scheme.windows; ++w) {
      const auto f = c.raw_f(b, w);
      if (!f) continue;
      raw.push_back(*f);
      const auto fo = c.overall_f(w);
      if (fo && *fo > 0.0) norm.push_back(*f / *fo);
    }
    BinSummary& s = c.summary[b];
    s.windows_used = raw.size();
    auto mean = [](const std::vector<double>& v) {
      double sum = 0.0;
      for (double x : v) sum += x;
      return sum / static_cast<double>(v.size());
    };
    if (!raw.empty()) s.mean = mean(raw);
    if (!norm.empty()) s.normalized_mean = mean(norm);
    if (norm.size() >= 2) {
      const double m = *s.normalized_mean;
      double ss = 0.0;
      for (double x : norm) ss += (x - m) * (x - m);
      const double n = static_cast<double>(norm.size());
      const double sd = std::sqrt(ss / (n - 1.0));
      const boost::math::students_t dist(n - 1.0);
      const double tcrit = boost::math::quantile(boost::math::complement(dist, 0.025));
      s.ci95_halfwidth = tcrit * sd / std::sqrt(n);
    }
  }
}

/// Per-window state shared by every source row.
struct WindowState {
  Day start = 0;
  const AggregatedGraph* graph = nullptr;
  const DetachmentGraph* detachment = nullptr;
  const AdjustedProfile* profiles = nullptr;
};

/// Targets cited by each source during (start, start + length].
inline std::vector<std::vector<std::uint32_t>> new_links(const TemporalCorpus& corpus, Day start, Day length) {
  std::vector<std::vector<std::uint32_t>> out(corpus.blog_count());
  for (Day d = start + 1; d <= start + length; ++d) {
    for (const CitationPair& p : corpus.citations_on(d)) out[p.citing.get()].push_back(p.cited.get());
  }
  for (auto& row : out) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return out;
}

struct Needs {
  bool graph = false;
  bool detachment = false;
  bool profiles = false;
};

/// Generic estimator. `classify(state, source, bins_out)` fills
/// bins_out[j] with a bin index, or -1 when the pair is excluded; the entry for
/// j == source is ignored.
template <class Classify>
PropensityCurve estimate(const TemporalCorpus& corpus, const WindowScheme& scheme, PropensityKind kind,
                         std::vector<PropensityBin> bins, Needs needs, Classify classify,
                         std::size_t workers = default_concurrency()) {
  scheme.validate(corpus.horizon());
  PropensityCurve curve;
  curve.kind = kind;
  curve.scheme = scheme;
  curve.bins = std::move(bins);
  const std::size_t nbins = curve.bins.size();
  curve.tallies.assign(nbins, std::vector<Tally>(scheme.windows));
  curve.overall.assign(scheme.windows, {});
  curve.excluded.assign(scheme.windows, 0);
  const std::size_t n = corpus.blog_count();

  for (std::size_t k = 0; k < scheme.windows; ++k) {
    const Day tk = scheme.start(k);
    AggregatedGraph graph;
    DetachmentGraph det;
    AdjustedProfile prof;
    if (needs.graph || needs.detachment) graph = aggregate(corpus, tk);
    if (needs.detachment) det = detachment(graph);
    if (needs.profiles) prof = tfidf_adjust(build_profiles(corpus, tk));
    const WindowState state{tk, &graph, &det, &prof};
    const auto fresh = new_links(corpus, tk, scheme.length);

    const std::size_t chunks = std::max<std::size_t>(1, std::min(workers, n));
    std::vector<std::vector<Tally>> partial(chunks, std::vector<Tally>(nbins));
    std::vector<std::uint64_t> partial_excluded(chunks, 0);
    parallel_chunks(n, chunks, [&](std::size_t begin, std::size_t end, std::size_t w) {
      std::vector<int> row_bins;
      std::vector<char> linked(n, 0);
      auto& tally = partial[w];
      for (std::size_t s = begin; s < end; ++s) {
        row_bins.assign(n, -1);
        classify(state, BlogId(static_cast<std::uint32_t>(s)), row_bins);
        for (std::uint32_t j : fresh[s]) linked[j] = 1;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == s) continue;
          const int b = row_bins[j];
          if (b < 0) {
            ++partial_excluded[w];
            continue;
          }
          auto& t = tally[static_cast<std::size_t>(b)];
          ++t.denominator;
          if (linked[j]) ++t.numerator;
        }
        for (std::uint32_t j : fresh[s]) linked[j] = 0;
      }
    });
    for (std::size_t w = 0; w < chunks; ++w) {
      for (std::size_t b = 0; b < nbins; ++b) {
        curve.tallies[b][k] += partial[w][b];
        curve.overall[k] += partial[w][b];
      }
      curve.excluded[k] += partial_excluded[w];
    }
  }
  summarize(curve);
  return curve;
}

}  // namespace detail

/// Social-distance bins: 1..max_d, then (max_d, inf) for farther reachable
/// pairs, then the unreachable bin.
struct SocialBinning {
  std::uint32_t max_d = 8;

  [[nodiscard]] std::size_t size() const { return max_d + 2; }

  [[nodiscard]] std::size_t bin_of(const HopDistance& d) const {
    if (d.is_infinite()) return max_d + 1;
    const std::uint32_t x = d.value();
    return x <= max_d ? x - 1 : max_d;
  }

  [[nodiscard]] std::vector<PropensityBin> bins() const {
    std::vector<PropensityBin> out;
    for (std::uint32_t x = 1; x <= max_d; ++x) out.push_back({"", std::to_string(x), std::to_string(x)});
    out.push_back({"", std::to_string(max_d + 1), "inf"});
    out.push_back({"", "inf", "inf"});
    return out;
  }
};

/// Detachment-distance bins [e_m, e_m+1), then [e_last, inf), then the
/// unreachable bin. Distances between distinct blogs are >= 1, so a leading
/// [0, e_0) bin is added only when e_0 > 1.
struct DetachmentBinning {
  std::vector<Rational> edges;

  static std::vector<Rational> powers_of_two(std::size_t count = 7) {
    std::vector<Rational> e;
    std::int64_t v = 1;
    for (std::size_t k = 0; k < count; ++k, v *= 2) e.emplace_back(v);
    return e;
  }

  void validate() const {
    if (edges.empty()) throw ValidationError("detachment bins: need at least one edge");
    for (std::size_t k = 1; k < edges.size(); ++k) {
      if (!(edges[k - 1] < edges[k])) throw ValidationError("detachment bins: edges must be strictly ascending");
    }
  }

  [[nodiscard]] bool has_underflow() const { return Rational(1) < edges.front(); }
  [[nodiscard]] std::size_t size() const { return edges.size() + 1 + (has_underflow() ? 1 : 0); }

  [[nodiscard]] std::size_t bin_of(const WeightedDistance& d) const {
    if (d.is_infinite()) return size() - 1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), d.value());
    const auto idx = static_cast<std::size_t>(it - edges.begin());  // number of edges <= d
    if (idx == 0) {
      if (!has_underflow()) throw ValidationError("detachment distance below first bin edge");
      return 0;
    }
    return idx - 1 + (has_underflow() ? 1 : 0);
  }

  [[nodiscard]] std::vector<PropensityBin> bins() const {
    std::vector<PropensityBin> out;
    if (has_underflow()) out.push_back({"", "0", edges.front().to_string()});
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) out.push_back({"", edges[k].to_string(), edges[k + 1].to_string()});
    out.push_back({"", edges.back().to_string(), "inf"});
    out.push_back({"", "inf", "inf"});
    return out;
  }
};

/// Semantic bins [m w, (m + 1) w), the last one closed at 1.
struct SemanticBinning {
  double width = 0.1;

  void validate() const {
    if (!(width > 0.0) || width > 1.0) throw ValidationError("semantic bin width must lie in (0, 1]");
  }

  [[nodiscard]] std::size_t size() const {
    auto n = static_cast<std::size_t>(std::ceil(1.0 / width));
    while (n > 1 && static_cast<double>(n - 1) * width >= 1.0) --n;
    return std::max<std::size_t>(n, 1);
  }

  [[nodiscard]] std::size_t bin_of(double delta) const {
    const std::size_t n = size();
    auto m = static_cast<std::size_t>(std::max(0.0, std::floor(delta / width)));
    m = std::min(m, n - 1);
    while (m > 0 && delta < static_cast<double>(m) * width) --m;
    while (m + 1 < n && delta >= static_cast<double>(m + 1) * width) ++m;
    return m;
  }

  [[nodiscard]] std::vector<PropensityBin> bins() const {
    std::vector<PropensityBin> out;
    const std::size_t n = size();
    for (std::size_t m = 0; m < n; ++m) {
      const double lo = static_cast<double>(m) * width;
      const double hi = m + 1 == n ? 1.0 : static_cast<double>(m + 1) * width;
      out.push_back({"", detail::format_real(lo), detail::format_real(hi)});
    }
    return out;
  }
};

inline PropensityCurve propensity_social(const TemporalCorpus& corpus, const WindowScheme& scheme,
                                         std::uint32_t max_d = 8, std::size_t workers = default_concurrency()) {
  if (max_d < 1) throw ValidationError("max_d must be >= 1");
  const SocialBinning binning{max_d};
  return detail::estimate(
      corpus, scheme, PropensityKind::social, binning.bins(), {.graph = true},
      [&](const detail::WindowState& st, BlogId s, std::vector<int>& out) {
        const auto row = social_distances_from(*st.graph, s);
        for (std::size_t j = 0; j < row.size(); ++j) {
          if (j != s.get()) out[j] = static_cast<int>(binning.bin_of(row[j]));
        }
      },
      workers);
}

inline PropensityCurve propensity_detachment(const TemporalCorpus& corpus, const WindowScheme& scheme,
                                             std::vector<Rational> bin_edges = DetachmentBinning::powers_of_two(),
                                             std::size_t workers = default_concurrency()) {
  const DetachmentBinning binning{std::move(bin_edges)};
  binning.validate();
  return detail::estimate(
      corpus, scheme, PropensityKind::detachment, binning.bins(), {.graph = true, .detachment = true},
      [&](const detail::WindowState& st, BlogId s, std::vector<int>& out) {
        const auto tree = detachment_tree(*st.detachment, s);
        for (std::uint32_t j = 0; j < out.size(); ++j) {
          if (j == s.get()) continue;
          out[j] = static_cast<int>(binning.bin_of(tree.distance(BlogId(j))));
        }
      },
      workers);
}

inline PropensityCurve propensity_semantic(const TemporalCorpus& corpus, const WindowScheme& scheme,
                                           double bin_width = 0.1, std::size_t workers = default_concurrency()) {
  const SemanticBinning binning{bin_width};
  binning.validate();
  return detail::estimate(
      corpus, scheme, PropensityKind::semantic, binning.bins(), {.profiles = true},
      [&](const detail::WindowState& st, BlogId s, std::vector<int>& out) {
        thread_local std::vector<double> scratch;
        thread_local std::vector<std::optional<double>> deltas;
        semantic_distances_from(*st.profiles, s, scratch, deltas);
        for (std::size_t j = 0; j < out.size(); ++j) {
          out[j] = deltas[j] ? static_cast<int>(binning.bin_of(*deltas[j])) : -1;
        }
      },
      workers);
}

/// Grid over (social bin, semantic bin); bin index = social * |semantic| + semantic.
inline PropensityCurve propensity_2d(const TemporalCorpus& corpus, const WindowScheme& scheme, std::uint32_t max_d = 8,
                                     double delta_bin_width = 0.2, std::size_t workers = default_concurrency()) {
  if (max_d < 1) throw ValidationError("max_d must be >= 1");
  const SocialBinning social{max_d};
  const SemanticBinning semantic{delta_bin_width};
  semantic.validate();
  std::vector<PropensityBin> bins;
  const auto sb = social.bins();
  const auto mb = semantic.bins();
  for (const auto& s : sb) {
    const std::string label = s.lo == s.hi ? s.lo : s.lo + "+";
    for (const auto& m : mb) bins.push_back({label, m.lo, m.hi});
  }
  const std::size_t width = semantic.size();
  return detail::estimate(
      corpus, scheme, PropensityKind::grid, std::move(bins), {.graph = true, .profiles = true},
      [&](const detail::WindowState& st, BlogId s, std::vector<int>& out) {
        thread_local std::vector<double> scratch;
        thread_local std::vector<std::optional<double>> deltas;
        const auto hops = social_distances_from(*st.graph, s);
        semantic_distances_from(*st.profiles, s, scratch, deltas);
        for (std::size_t j = 0; j < out.size(); ++j) {
          if (j == s.get() || !deltas[j]) continue;
          out[j] = static_cast<int>(social.bin_of(hops[j]) * width + semantic.bin_of(*deltas[j]));
        }
      },
      workers);
}

}  // namespace cosoc
