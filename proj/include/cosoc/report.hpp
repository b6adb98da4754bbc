#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cosoc/corpus.hpp"
#include "cosoc/diffusion.hpp"
#include "cosoc/rational.hpp"

namespace cosoc {

/// Headline counts for a corpus and its diffusion subgraphs.
struct CorpusReport {
  CorpusStats corpus;
  std::size_t non_trivial_subgraphs = 0;
  std::size_t trivial_subgraphs = 0;
  std::size_t transmission_links = 0;
  /// transmission links / dated citation edges; 0 when there are no citations.
  Rational transmission_share;
  /// CSV and JSONL artifacts found in the outputs directory, sorted.
  std::vector<std::string> artifacts;

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j;
    j["blogs"] = corpus.blogs;
    j["posts"] = corpus.posts;
    j["dated_citation_edges"] = corpus.dated_citation_edges;
    j["unique_citation_pairs"] = corpus.unique_citation_pairs;
    j["unique_citation_triples"] = corpus.unique_citation_triples;
    j["distinct_urls"] = corpus.distinct_urls;
    j["dropped_self_citations"] = corpus.dropped_self_citations;
    j["dropped_short_urls"] = corpus.dropped_short_urls;
    j["dropped_unlisted_terms"] = corpus.dropped_unlisted_terms;
    j["non_trivial_subgraphs"] = non_trivial_subgraphs;
    j["trivial_subgraphs"] = trivial_subgraphs;
    j["transmission_links"] = transmission_links;
    j["transmission_share"] = transmission_share.to_string();
    j["transmission_share_value"] = transmission_share.to_double();
    j["artifacts"] = artifacts;
    return j;
  }

  void write_text(std::ostream& out) const {
    out << "blogs                    " << corpus.blogs << '\n'
        << "posts                    " << corpus.posts << '\n'
        << "dated citation edges     " << corpus.dated_citation_edges << '\n'
        << "unique citation pairs    " << corpus.unique_citation_pairs << '\n'
        << "unique (i, j, t) triples " << corpus.unique_citation_triples << '\n'
        << "distinct URLs            " << corpus.distinct_urls << '\n'
        << "non-trivial subgraphs    " << non_trivial_subgraphs << '\n'
        << "transmission links       " << transmission_links << '\n'
        << "transmission share       " << transmission_share << " (" << transmission_share.to_double() << ")\n";
    for (const auto& a : artifacts) out << "artifact                 " << a << '\n';
  }
};

inline CorpusReport build_report(const TemporalCorpus& corpus, const DiffusionCatalog& catalog) {
  CorpusReport r;
  r.corpus = corpus.stats();
  r.non_trivial_subgraphs = catalog.non_trivial;
  r.trivial_subgraphs = catalog.trivial;
  r.transmission_links = catalog.transmission_links;
  if (r.corpus.dated_citation_edges > 0) {
    r.transmission_share = Rational(static_cast<std::int64_t>(catalog.transmission_links),
                                    static_cast<std::int64_t>(r.corpus.dated_citation_edges));
  }
  return r;
}

inline std::vector<std::string> list_artifacts(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".csv" || ext == ".jsonl") out.push_back(entry.path().lexically_relative(dir).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cosoc
