#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cosoc/types.hpp"

namespace cosoc {

/// One post as it appears in the event stream, identifiers still unresolved.
struct PostRecord {
  std::string blog;
  Day day = 0;
  std::vector<std::string> terms;
  std::vector<std::string> urls;
  std::vector<std::string> cites;
};

/// One post with every identifier resolved against the corpus registries.
/// Each list is duplicate-free and keeps first-occurrence order.
struct Post {
  BlogId blog;
  Day day = 0;
  std::vector<TermId> terms;
  std::vector<UrlId> urls;
  std::vector<BlogId> cites;
};

/// Ordered pair (citing, cited) of a citation.
struct CitationPair {
  BlogId citing;
  BlogId cited;
  friend constexpr auto operator<=>(const CitationPair&, const CitationPair&) = default;
};

struct BlogTerm {
  BlogId blog;
  TermId term;
  friend constexpr auto operator<=>(const BlogTerm&, const BlogTerm&) = default;
};

struct BlogUrl {
  BlogId blog;
  UrlId url;
  friend constexpr auto operator<=>(const BlogUrl&, const BlogUrl&) = default;
};

/// Bijection between external identifiers and contiguous dense indices.
template <class Id>
class Registry {
 public:
  Id intern(std::string_view name) {
    auto [it, inserted] = index_.try_emplace(std::string(name), Id(static_cast<typename Id::value_type>(names_.size())));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  [[nodiscard]] std::optional<Id> find(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Like find() but raises ValidationError naming the unknown identifier.
  [[nodiscard]] Id at(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw ValidationError("unknown identifier '" + std::string(name) + "'");
  }

  [[nodiscard]] const std::string& name(Id id) const { return names_.at(id.get()); }
  [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const Registry& a, const Registry& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Id> index_;
};

/// Sidecar declaring the observation window and, optionally, the blog
/// universe and a curated term list.
///
/// JSON: {"days": D, "blogs": [str], "terms": [str]}; "blogs" and "terms" are
/// optional. Listed blogs are registered first, in list order, so blogs that
/// never post still count towards the blog universe. When "terms" is present,
/// terms outside it are dropped at ingest.
struct WindowManifest {
  Day days = 0;
  std::vector<std::string> blogs;
  std::optional<std::vector<std::string>> terms;

  static WindowManifest from_json(const nlohmann::json& j) {
    WindowManifest m;
    if (!j.is_object() || !j.contains("days") || !j["days"].is_number_integer()) {
      throw ValidationError("manifest: expected an object with integer field 'days'");
    }
    m.days = j["days"].get<Day>();
    if (m.days < 0) throw ValidationError("manifest: 'days' must be non-negative");
    auto strings = [&](const char* key) {
      const auto& a = j[key];
      if (!a.is_array()) throw ValidationError(std::string("manifest: '") + key + "' must be an array of strings");
      std::vector<std::string> out;
      for (const auto& v : a) {
        if (!v.is_string()) throw ValidationError(std::string("manifest: '") + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
      }
      return out;
    };
    if (j.contains("blogs")) m.blogs = strings("blogs");
    if (j.contains("terms")) m.terms = strings("terms");
    return m;
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j;
    j["days"] = days;
    j["blogs"] = blogs;
    if (terms) j["terms"] = *terms;
    return j;
  }

  static WindowManifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("manifest '" + path + "': " + e.what());
    }
    return from_json(j);
  }
};

/// Counts reported by ingest.
struct CorpusStats {
  std::size_t blogs = 0;
  std::size_t posts = 0;
  /// Every post-level citation, repeats included.
  std::size_t dated_citation_edges = 0;
  /// Distinct (i, j) over the whole window.
  std::size_t unique_citation_pairs = 0;
  /// Distinct (i, j, t); equals the total size of the daily binary views.
  std::size_t unique_citation_triples = 0;
  std::size_t distinct_urls = 0;
  std::size_t dropped_self_citations = 0;
  std::size_t dropped_short_urls = 0;
  std::size_t dropped_unlisted_terms = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Trims surrounding whitespace and trailing slashes.
inline std::string normalize_url(std::string_view raw) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = raw.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = raw.find_last_not_of(ws);
  std::string_view s = raw.substr(first, last - first + 1);
  while (!s.empty() && s.back() == '/') s.remove_suffix(1);
  return std::string(s);
}

/// URLs of this length or shorter are filtered out.
inline constexpr std::size_t kMinUrlLengthExclusive = 10;

/// Immutable, indexed collection of posts with day-level binary views of the
/// citation, term and URL matrices.
class TemporalCorpus {
 public:
  TemporalCorpus() = default;

  /// Builds views from already-resolved posts. Posts are stably sorted by day.
  TemporalCorpus(Registry<BlogId> blogs, Registry<TermId> terms, Registry<UrlId> urls, std::vector<Post> posts,
                 Day horizon, bool curated_terms = false, CorpusStats dropped = {})
      : blogs_(std::move(blogs)),
        terms_(std::move(terms)),
        urls_(std::move(urls)),
        posts_(std::move(posts)),
        horizon_(horizon),
        curated_terms_(curated_terms) {
    std::stable_sort(posts_.begin(), posts_.end(), [](const Post& a, const Post& b) { return a.day < b.day; });
    build_views(dropped);
  }

  [[nodiscard]] Day horizon() const noexcept { return horizon_; }
  [[nodiscard]] const Registry<BlogId>& blogs() const noexcept { return blogs_; }
  [[nodiscard]] const Registry<TermId>& terms() const noexcept { return terms_; }
  [[nodiscard]] const Registry<UrlId>& urls() const noexcept { return urls_; }
  [[nodiscard]] const std::vector<Post>& posts() const noexcept { return posts_; }
  [[nodiscard]] const CorpusStats& stats() const noexcept { return stats_; }
  [[nodiscard]] bool curated_terms() const noexcept { return curated_terms_; }
  [[nodiscard]] std::size_t blog_count() const noexcept { return blogs_.size(); }

  void check_day(Day t) const {
    if (t < 1 || t > horizon_) {
      throw ValidationError("day " + std::to_string(t) + " outside window [1, " + std::to_string(horizon_) + "]");
    }
  }

  /// Pairs with C_t(i, j) = 1, sorted.
  [[nodiscard]] std::span<const CitationPair> citations_on(Day t) const {
    check_day(t);
    return citations_by_day_[static_cast<std::size_t>(t)];
  }

  /// Pairs with W_t(i, w) = 1, sorted.
  [[nodiscard]] std::span<const BlogTerm> term_uses_on(Day t) const {
    check_day(t);
    return terms_by_day_[static_cast<std::size_t>(t)];
  }

  /// Pairs with U_t(i, u) = 1, sorted.
  [[nodiscard]] std::span<const BlogUrl> url_mentions_on(Day t) const {
    check_day(t);
    return urls_by_day_[static_cast<std::size_t>(t)];
  }

  /// All (day, blog) mentions of a URL, sorted by day then blog.
  [[nodiscard]] std::span<const std::pair<Day, BlogId>> mentions_of(UrlId u) const { return mentions_by_url_.at(u.get()); }

  /// Descriptor for re-ingesting the serialized event stream with identical
  /// registries.
  [[nodiscard]] WindowManifest manifest() const {
    WindowManifest m;
    m.days = horizon_;
    m.blogs = blogs_.names();
    m.terms = terms_.names();
    return m;
  }

  friend bool operator==(const TemporalCorpus& a, const TemporalCorpus& b) {
    return a.horizon_ == b.horizon_ && a.blogs_ == b.blogs_ && a.terms_ == b.terms_ && a.urls_ == b.urls_ &&
           a.citations_by_day_ == b.citations_by_day_ && a.terms_by_day_ == b.terms_by_day_ &&
           a.urls_by_day_ == b.urls_by_day_;
  }

 private:
  template <class T>
  static void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  void build_views(const CorpusStats& dropped) {
    const auto days = static_cast<std::size_t>(horizon_) + 1;
    citations_by_day_.assign(days, {});
    terms_by_day_.assign(days, {});
    urls_by_day_.assign(days, {});
    mentions_by_url_.assign(urls_.size(), {});

    std::vector<CitationPair> all_pairs;
    std::size_t dated = 0;
    for (const Post& p : posts_) {
      if (p.day < 1 || p.day > horizon_) {
        throw ValidationError("post day " + std::to_string(p.day) + " outside window [1, " + std::to_string(horizon_) + "]");
      }
      const auto d = static_cast<std::size_t>(p.day);
      for (BlogId c : p.cites) {
        citations_by_day_[d].push_back({p.blog, c});
        all_pairs.push_back({p.blog, c});
        ++dated;
      }
      for (TermId w : p.terms) terms_by_day_[d].push_back({p.blog, w});
      for (UrlId u : p.urls) {
        urls_by_day_[d].push_back({p.blog, u});
        mentions_by_url_.at(u.get()).emplace_back(p.day, p.blog);
      }
    }
    std::size_t triples = 0;
    for (std::size_t d = 0; d < days; ++d) {
      sort_unique(citations_by_day_[d]);
      sort_unique(terms_by_day_[d]);
      sort_unique(urls_by_day_[d]);
      triples += citations_by_day_[d].size();
    }
    for (auto& m : mentions_by_url_) sort_unique(m);
    sort_unique(all_pairs);

    stats_ = dropped;
    stats_.blogs = blogs_.size();
    stats_.posts = posts_.size();
    stats_.dated_citation_edges = dated;
    stats_.unique_citation_pairs = all_pairs.size();
    stats_.unique_citation_triples = triples;
    stats_.distinct_urls = urls_.size();
  }

  Registry<BlogId> blogs_;
  Registry<TermId> terms_;
  Registry<UrlId> urls_;
  std::vector<Post> posts_;
  Day horizon_ = 0;
  bool curated_terms_ = false;
  CorpusStats stats_;
  std::vector<std::vector<CitationPair>> citations_by_day_;
  std::vector<std::vector<BlogTerm>> terms_by_day_;
  std::vector<std::vector<BlogUrl>> urls_by_day_;
  std::vector<std::vector<std::pair<Day, BlogId>>> mentions_by_url_;
};

namespace detail {

template <class T>
void push_unique(std::vector<T>& v, T x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

inline PostRecord parse_record(const nlohmann::json& j, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError("line " + std::to_string(line_no) + ": " + what);
  };
  if (!j.is_object()) throw fail("record is not a JSON object");
  PostRecord r;
  if (!j.contains("blog") || !j["blog"].is_string()) throw fail("missing string field 'blog'");
  r.blog = j["blog"].get<std::string>();
  if (r.blog.empty()) throw fail("empty blog identifier");
  if (!j.contains("day") || !j["day"].is_number_integer()) throw fail("missing integer field 'day'");
  r.day = j["day"].get<Day>();
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    const auto& a = j[key];
    if (!a.is_array()) throw fail(std::string("field '") + key + "' is not an array");
    for (const auto& v : a) {
      if (!v.is_string()) throw fail(std::string("field '") + key + "' holds a non-string element");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  r.terms = strings("terms");
  r.urls = strings("urls");
  r.cites = strings("cites");
  for (const auto& c : r.cites) {
    if (c.empty()) throw fail("empty cited blog identifier");
  }
  return r;
}

}  // namespace detail

/// Validates and indexes post records. Records are stably sorted by day before
/// any identifier is registered, so registry order depends only on the
/// day-sorted stream. `line_numbers`, when given, maps records to input lines
/// for error messages.
inline TemporalCorpus ingest_records(std::vector<PostRecord> records, const WindowManifest& manifest,
                                     const std::vector<std::size_t>* line_numbers = nullptr) {
  auto where = [&](std::size_t k) {
    return "line " + std::to_string(line_numbers ? (*line_numbers)[k] : k + 1);
  };
  for (std::size_t k = 0; k < records.size(); ++k) {
    const Day d = records[k].day;
    if (d < 1 || d > manifest.days) {
      throw ValidationError(where(k) + ": day " + std::to_string(d) + " outside window [1, " +
                            std::to_string(manifest.days) + "]");
    }
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return records[a].day < records[b].day; });

  Registry<BlogId> blogs;
  Registry<TermId> terms;
  Registry<UrlId> urls;
  for (const auto& b : manifest.blogs) blogs.intern(b);
  if (manifest.terms) {
    for (const auto& t : *manifest.terms) terms.intern(t);
  }

  CorpusStats dropped;
  std::vector<Post> posts;
  posts.reserve(records.size());
  for (std::size_t k : order) {
    const PostRecord& r = records[k];
    Post p;
    p.blog = blogs.intern(r.blog);
    p.day = r.day;
    for (const auto& t : r.terms) {
      if (manifest.terms) {
        if (auto id = terms.find(t)) {
          detail::push_unique(p.terms, *id);
        } else {
          ++dropped.dropped_unlisted_terms;
        }
      } else {
        detail::push_unique(p.terms, terms.intern(t));
      }
    }
    for (const auto& raw : r.urls) {
      std::string u = normalize_url(raw);
      if (u.size() <= kMinUrlLengthExclusive) {
        ++dropped.dropped_short_urls;
        continue;
      }
      detail::push_unique(p.urls, urls.intern(u));
    }
    for (const auto& c : r.cites) {
      if (c == r.blog) {
        ++dropped.dropped_self_citations;
        continue;
      }
      detail::push_unique(p.cites, blogs.intern(c));
    }
    posts.push_back(std::move(p));
  }
  return TemporalCorpus(std::move(blogs), std::move(terms), std::move(urls), std::move(posts), manifest.days,
                        manifest.terms.has_value(), dropped);
}

/// Reads line-delimited JSON post records. Blank lines are skipped.
inline TemporalCorpus ingest(std::istream& stream, const WindowManifest& manifest) {
  std::vector<PostRecord> records;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    records.push_back(detail::parse_record(j, line_no));
    lines.push_back(line_no);
  }
  return ingest_records(std::move(records), manifest, &lines);
}

inline TemporalCorpus ingest_file(const std::string& events_path, const WindowManifest& manifest) {
  std::ifstream in(events_path);
  if (!in) throw IoError("cannot open events file '" + events_path + "'");
  return ingest(in, manifest);
}

/// Set of ordered pairs with C_t(i, j) = 1.
inline std::vector<CitationPair> daily_citations(const TemporalCorpus& corpus, Day t) {
  const auto s = corpus.citations_on(t);
  return {s.begin(), s.end()};
}

inline nlohmann::json to_record_json(const TemporalCorpus& corpus, const Post& p) {
  nlohmann::json j;
  j["blog"] = corpus.blogs().name(p.blog);
  j["day"] = p.day;
  auto& terms = j["terms"] = nlohmann::json::array();
  for (TermId t : p.terms) terms.push_back(corpus.terms().name(t));
  auto& urls = j["urls"] = nlohmann::json::array();
  for (UrlId u : p.urls) urls.push_back(corpus.urls().name(u));
  auto& cites = j["cites"] = nlohmann::json::array();
  for (BlogId c : p.cites) cites.push_back(corpus.blogs().name(c));
  return j;
}

/// Writes the corpus back in the line-delimited event format.
inline void write_events(std::ostream& out, const TemporalCorpus& corpus) {
  for (const Post& p : corpus.posts()) out << to_record_json(corpus, p).dump() << '\n';
}

// Index file: the resolved corpus as one JSON document.

inline nlohmann::json to_index_json(const TemporalCorpus& corpus) {
  nlohmann::json j;
  j["format"] = "cosoc-index";
  j["version"] = 1;
  j["horizon"] = corpus.horizon();
  j["curated_terms"] = corpus.curated_terms();
  j["blogs"] = corpus.blogs().names();
  j["terms"] = corpus.terms().names();
  j["urls"] = corpus.urls().names();
  auto& posts = j["posts"] = nlohmann::json::array();
  for (const Post& p : corpus.posts()) {
    auto ids = [](const auto& v) {
      auto a = nlohmann::json::array();
      for (auto id : v) a.push_back(id.get());
      return a;
    };
    posts.push_back(nlohmann::json::array({p.blog.get(), p.day, ids(p.terms), ids(p.urls), ids(p.cites)}));
  }
  const auto& s = corpus.stats();
  j["dropped"] = {{"self_citations", s.dropped_self_citations},
                  {"short_urls", s.dropped_short_urls},
                  {"unlisted_terms", s.dropped_unlisted_terms}};
  return j;
}

inline TemporalCorpus from_index_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "cosoc-index") throw ValidationError("index: not a cosoc index document");
    if (j.value("version", 0) != 1) throw ValidationError("index: unsupported version");
    Registry<BlogId> blogs;
    Registry<TermId> terms;
    Registry<UrlId> urls;
    for (const auto& n : j.at("blogs")) blogs.intern(n.get<std::string>());
    for (const auto& n : j.at("terms")) terms.intern(n.get<std::string>());
    for (const auto& n : j.at("urls")) urls.intern(n.get<std::string>());
    auto check = [](std::uint32_t v, std::size_t bound) {
      if (v >= bound) throw ValidationError("index: identifier out of range");
      return v;
    };
    std::vector<Post> posts;
    for (const auto& row : j.at("posts")) {
      Post p;
      p.blog = BlogId(check(row.at(0).get<std::uint32_t>(), blogs.size()));
      p.day = row.at(1).get<Day>();
      for (const auto& v : row.at(2)) p.terms.emplace_back(check(v.get<std::uint32_t>(), terms.size()));
      for (const auto& v : row.at(3)) p.urls.emplace_back(check(v.get<std::uint32_t>(), urls.size()));
      for (const auto& v : row.at(4)) p.cites.emplace_back(check(v.get<std::uint32_t>(), blogs.size()));
      posts.push_back(std::move(p));
    }
    CorpusStats dropped;
    if (j.contains("dropped")) {
      const auto& d = j["dropped"];
      dropped.dropped_self_citations = d.value("self_citations", std::size_t{0});
      dropped.dropped_short_urls = d.value("short_urls", std::size_t{0});
      dropped.dropped_unlisted_terms = d.value("unlisted_terms", std::size_t{0});
    }
    return TemporalCorpus(std::move(blogs), std::move(terms), std::move(urls), std::move(posts),
                          j.at("horizon").get<Day>(), j.value("curated_terms", false), dropped);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("index: ") + e.what());
  }
}

inline void save_index(const TemporalCorpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write index '" + path + "'");
  out << to_index_json(corpus).dump() << '\n';
  if (!out) throw IoError("failed writing index '" + path + "'");
}

inline TemporalCorpus load_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open index '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("index '" + path + "': " + e.what());
  }
  return from_index_json(j);
}

}  // namespace cosoc
