#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cosoc/corpus.hpp"
#include "cosoc/graphmetrics.hpp"
#include "cosoc/semantics.hpp"
#include "cosoc/types.hpp"

namespace cosoc {

/// Parameters of the synthetic corpus generator.
///
/// Citation targets of blog i are drawn with weight
/// exp(-beta_social * d(i, j)) * exp(-beta_semantic * delta(i, j)), both
/// distances taken from the state frozen at the last clock tick (days t with
/// t = clock_origin mod clock_period). Unreachable targets use
/// `unreachable_distance` hops and undefined delta counts as 1.
struct GeneratorConfig {
  std::size_t n_blogs = 50;
  Day days = 120;
  std::size_t latent_dim = 4;
  std::size_t n_terms = 40;
  std::size_t terms_per_post = 3;
  /// Poisson rate of regular posts per blog per day.
  double posts_per_day = 0.5;
  /// Poisson mean of citations per regular post.
  double cites_per_post = 1.0;
  double beta_social = 0.0;
  double beta_semantic = 0.0;
  /// A blog i that cites j relays a URL j first mentioned yesterday with
  /// probability relay_prob * a(i, j).
  double relay_prob = 0.5;
  /// Probability that a regular post carries a fresh URL.
  double url_prob = 0.1;
  /// Weight of a blog's dominant latent topic.
  double topic_focus = 0.8;
  Day clock_origin = 60;
  Day clock_period = 7;
  double unreachable_distance = 6.0;
  std::uint64_t seed = 1;

  void validate() const {
    auto fail = [](const std::string& m) { throw ValidationError("generator config: " + m); };
    if (n_blogs < 2) fail("n_blogs must be >= 2");
    if (days < 1) fail("days must be >= 1");
    if (latent_dim < 1) fail("latent_dim must be >= 1");
    if (n_terms < latent_dim) fail("n_terms must be >= latent_dim");
    if (terms_per_post > n_terms) fail("terms_per_post must be <= n_terms");
    if (!(posts_per_day >= 0.0)) fail("posts_per_day must be >= 0");
    if (!(cites_per_post >= 0.0)) fail("cites_per_post must be >= 0");
    if (!(beta_social >= 0.0) || !(beta_semantic >= 0.0)) fail("decay coefficients must be >= 0");
    if (!(relay_prob >= 0.0 && relay_prob <= 1.0)) fail("relay_prob must lie in [0, 1]");
    if (!(url_prob >= 0.0 && url_prob <= 1.0)) fail("url_prob must lie in [0, 1]");
    if (!(topic_focus >= 0.0 && topic_focus <= 1.0)) fail("topic_focus must lie in [0, 1]");
    if (clock_period < 1) fail("clock_period must be >= 1");
    if (!(unreachable_distance >= 0.0)) fail("unreachable_distance must be >= 0");
  }

  /// Flat "key = value" text; '#' starts a comment. Unknown keys are errors.
  static GeneratorConfig parse(std::istream& in) {
    GeneratorConfig c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      try {
        c.set(key, value);
      } catch (const std::logic_error& e) {  // std::stoX failures and unknown keys
        throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    c.validate();
    return c;
  }

  static GeneratorConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open generator config '" + path + "'");
    return parse(in);
  }

  void set(const std::string& key, const std::string& value) {
    auto as_size = [&] {
      std::size_t pos = 0;
      const auto v = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("bad integer '" + value + "' for " + key);
      return static_cast<std::size_t>(v);
    };
    auto as_day = [&] {
      std::size_t pos = 0;
      const int v = std::stoi(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("bad integer '" + value + "' for " + key);
      return v;
    };
    auto as_real = [&] {
      std::size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument("bad number '" + value + "' for " + key);
      return v;
    };
    if (key == "n_blogs") n_blogs = as_size();
    else if (key == "days") days = as_day();
    else if (key == "latent_dim") latent_dim = as_size();
    else if (key == "n_terms") n_terms = as_size();
    else if (key == "terms_per_post") terms_per_post = as_size();
    else if (key == "posts_per_day") posts_per_day = as_real();
    else if (key == "cites_per_post") cites_per_post = as_real();
    else if (key == "beta_social") beta_social = as_real();
    else if (key == "beta_semantic") beta_semantic = as_real();
    else if (key == "relay_prob") relay_prob = as_real();
    else if (key == "url_prob") url_prob = as_real();
    else if (key == "topic_focus") topic_focus = as_real();
    else if (key == "clock_origin") clock_origin = as_day();
    else if (key == "clock_period") clock_period = as_day();
    else if (key == "unreachable_distance") unreachable_distance = as_real();
    else if (key == "seed") seed = static_cast<std::uint64_t>(as_size());
    else throw std::invalid_argument("unknown key '" + key + "'");
  }

  void write(std::ostream& out) const {
    out << std::setprecision(17);
    out << "n_blogs = " << n_blogs << "\ndays = " << days << "\nlatent_dim = " << latent_dim
        << "\nn_terms = " << n_terms << "\nterms_per_post = " << terms_per_post << "\nposts_per_day = " << posts_per_day
        << "\ncites_per_post = " << cites_per_post << "\nbeta_social = " << beta_social
        << "\nbeta_semantic = " << beta_semantic << "\nrelay_prob = " << relay_prob << "\nurl_prob = " << url_prob
        << "\ntopic_focus = " << topic_focus << "\nclock_origin = " << clock_origin
        << "\nclock_period = " << clock_period << "\nunreachable_distance = " << unreachable_distance
        << "\nseed = " << seed << '\n';
  }
};

struct SyntheticCorpus {
  std::vector<PostRecord> records;
  WindowManifest manifest;

  [[nodiscard]] TemporalCorpus ingest() const { return ingest_records(records, manifest); }

  void write_events(std::ostream& out) const {
    for (const auto& r : records) {
      nlohmann::json j;
      j["blog"] = r.blog;
      j["day"] = r.day;
      j["terms"] = r.terms;
      j["urls"] = r.urls;
      j["cites"] = r.cites;
      out << j.dump() << '\n';
    }
  }
};

namespace detail {

inline std::string padded(const char* prefix, std::size_t k, std::size_t total) {
  const std::size_t width = std::to_string(total > 0 ? total - 1 : 0).size();
  std::ostringstream os;
  os << prefix << std::setw(static_cast<int>(width)) << std::setfill('0') << k;
  return os.str();
}

class Generator {
 public:
  explicit Generator(const GeneratorConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    for (std::uint32_t i = 0; i < cfg_.n_blogs; ++i) {
      blog_names_.push_back(padded("blog", i, cfg_.n_blogs));
      blog_index_.emplace(blog_names_.back(), i);
    }
    for (std::uint32_t w = 0; w < cfg_.n_terms; ++w) {
      term_names_.push_back(padded("term", w, cfg_.n_terms));
      term_index_.emplace(term_names_.back(), w);
    }
    build_latent_profiles();
    out_weight_.resize(cfg_.n_blogs);
    out_strength_.assign(cfg_.n_blogs, 0);
    in_neighbors_.resize(cfg_.n_blogs);
    term_counts_.assign(cfg_.n_blogs, std::vector<std::uint32_t>(cfg_.n_terms, 0));
    take_snapshot();
  }

  SyntheticCorpus run() {
    SyntheticCorpus out;
    out.manifest.days = cfg_.days;
    out.manifest.blogs = blog_names_;
    out.manifest.terms = term_names_;
    std::vector<std::pair<std::uint32_t, std::string>> fresh_mentions;  // (blog, url) first mentioned yesterday
    for (Day day = 1; day <= cfg_.days; ++day) {
      std::vector<PostRecord> today;
      std::vector<std::pair<std::uint32_t, std::string>> mentions_today;
      relay(day, fresh_mentions, today, mentions_today);
      regular_posts(day, today, mentions_today);
      commit_day(today);
      for (auto& r : today) out.records.push_back(std::move(r));
      fresh_mentions = std::move(mentions_today);
      if (((day - cfg_.clock_origin) % cfg_.clock_period + cfg_.clock_period) % cfg_.clock_period == 0) take_snapshot();
    }
    return out;
  }

 private:
  void build_latent_profiles() {
    const std::size_t k = cfg_.latent_dim;
    const std::size_t n_terms = cfg_.n_terms;
    std::uniform_int_distribution<std::size_t> topic(0, k - 1);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    term_cdf_.resize(cfg_.n_blogs);
    for (std::size_t i = 0; i < cfg_.n_blogs; ++i) {
      const std::size_t dominant = topic(rng_);
      std::vector<double> theta(k, 0.0);
      double rest = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        if (t != dominant) rest += theta[t] = jitter(rng_);
      }
      for (std::size_t t = 0; t < k; ++t) {
        theta[t] = t == dominant ? (k == 1 ? 1.0 : cfg_.topic_focus)
                                 : (rest > 0.0 ? (1.0 - cfg_.topic_focus) * theta[t] / rest : 0.0);
      }
      // Topic t owns a contiguous block of terms.
      std::vector<double> p(n_terms, 0.0);
      for (std::size_t w = 0; w < n_terms; ++w) {
        const std::size_t owner = std::min(k - 1, w * k / n_terms);
        p[w] = theta[owner] * (0.5 + jitter(rng_));
      }
      auto& cdf = term_cdf_[i];
      cdf.resize(n_terms);
      double acc = 0.0;
      for (std::size_t w = 0; w < n_terms; ++w) cdf[w] = acc += p[w];
    }
  }

  std::size_t sample_index(const std::vector<double>& cdf) {
    if (!(cdf.back() > 0.0)) {
      std::uniform_int_distribution<std::size_t> any(0, cdf.size() - 1);
      return any(rng_);
    }
    std::uniform_real_distribution<double> u(0.0, cdf.back());
    const double x = u(rng_);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  }

  std::vector<std::string> sample_terms(std::uint32_t blog) {
    std::vector<std::size_t> picked;
    const auto& cdf = term_cdf_[blog];
    for (std::size_t tries = 0; picked.size() < cfg_.terms_per_post && tries < 20 * cfg_.terms_per_post + 20; ++tries) {
      const std::size_t w = sample_index(cdf);
      if (std::find(picked.begin(), picked.end(), w) == picked.end()) picked.push_back(w);
    }
    std::vector<std::string> out;
    for (std::size_t w : picked) out.push_back(term_names_[w]);
    return out;
  }

  /// Freezes the current aggregated state for target selection.
  void take_snapshot() {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < cfg_.n_blogs; ++i) {
      for (const auto& [j, w] : out_weight_[i]) edges.emplace_back(i, j, w);
    }
    std::sort(edges.begin(), edges.end());
    snapshot_graph_ = AggregatedGraph::from_edges(cfg_.n_blogs, edges);
    SemanticProfile prof(cfg_.n_blogs, cfg_.n_terms, 0);
    for (std::uint32_t i = 0; i < cfg_.n_blogs; ++i) {
      std::vector<TermCount> row;
      for (std::uint32_t w = 0; w < cfg_.n_terms; ++w) {
        if (term_counts_[i][w] > 0) row.push_back({TermId(w), term_counts_[i][w]});
      }
      prof.set_row(BlogId(i), std::move(row));
    }
    snapshot_profiles_ = tfidf_adjust(prof);
    target_cdf_.clear();
  }

  const std::vector<double>& target_cdf(std::uint32_t source) {
    auto it = target_cdf_.find(source);
    if (it != target_cdf_.end()) return it->second;
    const std::size_t n = cfg_.n_blogs;
    std::vector<double> weight(n, 1.0);
    if (cfg_.beta_social > 0.0) {
      const auto hops = social_distances_from(snapshot_graph_, BlogId(source));
      for (std::size_t j = 0; j < n; ++j) {
        const double d = hops[j].is_finite() ? static_cast<double>(hops[j].value()) : cfg_.unreachable_distance;
        weight[j] *= std::exp(-cfg_.beta_social * d);
      }
    }
    if (cfg_.beta_semantic > 0.0) {
      std::vector<double> scratch;
      std::vector<std::optional<double>> deltas;
      semantic_distances_from(snapshot_profiles_, BlogId(source), scratch, deltas);
      for (std::size_t j = 0; j < n; ++j) weight[j] *= std::exp(-cfg_.beta_semantic * deltas[j].value_or(1.0));
    }
    weight[source] = 0.0;
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) cdf[j] = acc += weight[j];
    return target_cdf_.emplace(source, std::move(cdf)).first->second;
  }

  void relay(Day day, const std::vector<std::pair<std::uint32_t, std::string>>& fresh, std::vector<PostRecord>& today,
             std::vector<std::pair<std::uint32_t, std::string>>& mentions_today) {
    if (cfg_.relay_prob <= 0.0) return;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // (relaying blog, url) -> cited sources, in deterministic order
    std::map<std::pair<std::uint32_t, std::string>, std::vector<std::uint32_t>> relays;
    for (const auto& [source, url] : fresh) {
      for (std::uint32_t i : in_neighbors_[source]) {
        if (mentioned_[url].contains(i)) continue;
        const double a = static_cast<double>(out_weight_[i].at(source)) / static_cast<double>(out_strength_[i]);
        if (u(rng_) < cfg_.relay_prob * a) relays[{i, url}].push_back(source);
      }
    }
    for (auto& [key, sources] : relays) {
      const auto& [blog, url] = key;
      PostRecord r;
      r.blog = blog_names_[blog];
      r.day = day;
      r.terms = sample_terms(blog);
      r.urls = {url};
      for (std::uint32_t s : sources) r.cites.push_back(blog_names_[s]);
      mentioned_[url].insert(blog);
      mentions_today.emplace_back(blog, url);
      today.push_back(std::move(r));
    }
  }

  void regular_posts(Day day, std::vector<PostRecord>& today,
                     std::vector<std::pair<std::uint32_t, std::string>>& mentions_today) {
    std::poisson_distribution<int> posts(cfg_.posts_per_day);
    std::poisson_distribution<int> cites(cfg_.cites_per_post);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint32_t i = 0; i < cfg_.n_blogs; ++i) {
      const int count = cfg_.posts_per_day > 0.0 ? posts(rng_) : 0;
      for (int p = 0; p < count; ++p) {
        PostRecord r;
        r.blog = blog_names_[i];
        r.day = day;
        r.terms = sample_terms(i);
        const int k = cfg_.cites_per_post > 0.0 ? std::min<int>(cites(rng_), static_cast<int>(cfg_.n_blogs) - 1) : 0;
        std::vector<std::uint32_t> targets;
        for (int tries = 0; static_cast<int>(targets.size()) < k && tries < 20 * k + 20; ++tries) {
          const auto j = static_cast<std::uint32_t>(sample_index(target_cdf(i)));
          if (j != i && std::find(targets.begin(), targets.end(), j) == targets.end()) targets.push_back(j);
        }
        for (std::uint32_t j : targets) r.cites.push_back(blog_names_[j]);
        if (u(rng_) < cfg_.url_prob) {
          std::string url = "https://example.org/item/" + std::to_string(next_url_++);
          mentioned_[url].insert(i);
          mentions_today.emplace_back(i, url);
          r.urls.push_back(std::move(url));
        }
        today.push_back(std::move(r));
      }
    }
  }

  /// Adds the day's binary citation and term rows to the live state.
  void commit_day(const std::vector<PostRecord>& today) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> uses;
    for (const auto& r : today) {
      const auto i = blog_index_.at(r.blog);
      for (const auto& c : r.cites) pairs.emplace_back(i, blog_index_.at(c));
      for (const auto& t : r.terms) uses.emplace_back(i, term_index_.at(t));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::sort(uses.begin(), uses.end());
    uses.erase(std::unique(uses.begin(), uses.end()), uses.end());
    for (const auto& [i, j] : pairs) {
      if (out_weight_[i][j]++ == 0) {
        auto& in = in_neighbors_[j];
        in.insert(std::upper_bound(in.begin(), in.end(), i), i);
      }
      ++out_strength_[i];
    }
    for (const auto& [i, w] : uses) ++term_counts_[i][w];
  }

  GeneratorConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<std::string> blog_names_;
  std::vector<std::string> term_names_;
  std::unordered_map<std::string, std::uint32_t> blog_index_;
  std::unordered_map<std::string, std::uint32_t> term_index_;
  std::vector<std::vector<double>> term_cdf_;
  std::vector<std::map<std::uint32_t, std::uint32_t>> out_weight_;
  std::vector<std::uint64_t> out_strength_;
  std::vector<std::vector<std::uint32_t>> in_neighbors_;
  std::vector<std::vector<std::uint32_t>> term_counts_;
  std::unordered_map<std::string, std::unordered_set<std::uint32_t>> mentioned_;
  std::size_t next_url_ = 0;
  AggregatedGraph snapshot_graph_;
  AdjustedProfile snapshot_profiles_;
  std::unordered_map<std::uint32_t, std::vector<double>> target_cdf_;
};

}  // namespace detail

/// Deterministic synthetic corpus for a configuration; the seed fixes every draw.
inline SyntheticCorpus generate(const GeneratorConfig& config) { return detail::Generator(config).run(); }

}  // namespace cosoc
