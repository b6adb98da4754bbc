// cosoc command line: ingest, distances, propensity curves, diffusion
// statistics, synthetic corpora and summary reports.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cosoc/cosoc.hpp"
#include "cosoc/run_manifest.hpp"

namespace fs = std::filesystem;
using namespace cosoc;

namespace {

enum Exit { kOk = 0, kValidation = 1, kIo = 2 };

std::ofstream open_out(const std::string& path) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

template <class Fn>
void write_file(const std::string& path, Fn&& fill) {
  auto out = open_out(path);
  fill(out);
  finish(out, path);
}

std::vector<csv::NamedPair> read_pairs(const std::string& path, const TemporalCorpus& corpus) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pairs file '" + path + "'");
  std::vector<csv::NamedPair> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("pairs line " + std::to_string(line_no) + ": expected 'src,dst'");
    }
    const auto src = trim(line.substr(0, comma)), dst = trim(line.substr(comma + 1));
    if (line_no == 1 && (src == "src" || src == "i") && (dst == "dst" || dst == "j")) continue;
    const auto a = corpus.blogs().find(src), b = corpus.blogs().find(dst);
    if (!a || !b) {
      throw ValidationError("pairs line " + std::to_string(line_no) + ": unknown blog '" + (a ? dst : src) + "'");
    }
    out.push_back({*a, *b});
  }
  return out;
}

std::vector<Rational> parse_edges(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(Rational::parse(item));
    } catch (const std::exception& e) {
      throw ValidationError("--bins: " + std::string(e.what()));
    }
  }
  return out;
}

std::vector<std::string> g_arguments;

RunManifest started(const std::string& command) {
  RunManifest run;
  run.command = command;
  run.arguments = g_arguments;
  return run;
}

struct Common {
  std::string index;
  std::string out;
  RunManifest run;

  TemporalCorpus load() {
    run.add_input(index);
    return load_index(index);
  }
  void save_run(const std::string& path) const { run.save(path); }
};

// ---- subcommands ----------------------------------------------------------

struct IngestCmd {
  std::string events, manifest, out;

  void operator()() const {
    RunManifest run = started("ingest");
    run.add_input(events);
    run.add_input(manifest);
    const auto corpus = ingest_file(events, WindowManifest::load(manifest));
    save_index(corpus, out);
    run.add_output(out);
    run.save(out + ".run.json");
    const auto& s = corpus.stats();
    std::cout << "blogs " << s.blogs << "\nposts " << s.posts << "\ndated citation edges " << s.dated_citation_edges
              << "\nunique citation pairs " << s.unique_citation_pairs << "\ndistinct URLs " << s.distinct_urls << '\n';
  }
};

struct DistancesCmd {
  Common c;
  Day cutoff = 0;
  std::string kind = "social";
  std::string pairs;
  bool all = false;

  void operator()() {
    c.run = started("distances");
    c.run.parameters = {{"cutoff", std::to_string(cutoff)}, {"kind", kind}, {"pairs", all ? "all" : pairs}};
    const auto corpus = c.load();
    const auto g = aggregate(corpus, cutoff);
    if (!all) c.run.add_input(pairs);
    const auto selected = all ? std::vector<csv::NamedPair>{} : read_pairs(pairs, corpus);
    write_file(c.out, [&](std::ostream& out) {
      if (kind == "social") {
        all ? csv::write_all_social(out, corpus, g) : csv::write_social_distances(out, corpus, g, selected);
      } else {
        all ? csv::write_all_detachment(out, corpus, g)
            : csv::write_detachment_distances(out, corpus, detachment(g), selected);
      }
    });
    c.run.add_output(c.out);
    c.save_run(c.out + ".run.json");
  }
};

struct SemdistCmd {
  Common c;
  Day cutoff = 0;
  std::string pairs;
  bool all = false;

  void operator()() {
    c.run = started("semdist");
    c.run.parameters = {{"cutoff", std::to_string(cutoff)}, {"pairs", all ? "all" : pairs}};
    const auto corpus = c.load();
    const auto adj = tfidf_adjust(build_profiles(corpus, cutoff));
    if (!all) c.run.add_input(pairs);
    const auto selected = all ? csv::all_ordered_pairs(corpus.blog_count()) : read_pairs(pairs, corpus);
    write_file(c.out, [&](std::ostream& out) { csv::write_semantic_distances(out, corpus, adj, selected); });
    c.run.add_output(c.out);
    c.save_run(c.out + ".run.json");
  }
};

struct PropensityCmd {
  Common c;
  std::string kind = "social";
  WindowScheme scheme;
  std::uint32_t max_d = 8;
  std::optional<double> delta_bin;
  std::string bins;
  std::string summary;

  void operator()() {
    c.run = started("propensity");
    c.run.parameters = {{"kind", kind},
                        {"t0", std::to_string(scheme.t0)},
                        {"T", std::to_string(scheme.length)},
                        {"windows", std::to_string(scheme.windows)}};
    const auto corpus = c.load();
    PropensityCurve curve;
    if (kind == "social") {
      c.run.parameters["max_d"] = std::to_string(max_d);
      curve = propensity_social(corpus, scheme, max_d);
    } else if (kind == "detachment") {
      const auto edges = bins.empty() ? DetachmentBinning::powers_of_two() : parse_edges(bins);
      if (!bins.empty()) c.run.parameters["bins"] = bins;
      curve = propensity_detachment(corpus, scheme, edges);
    } else if (kind == "semantic") {
      const double w = delta_bin.value_or(0.1);
      c.run.parameters["delta_bin"] = csv::real(w);
      curve = propensity_semantic(corpus, scheme, w);
    } else {
      const double w = delta_bin.value_or(0.2);
      c.run.parameters["max_d"] = std::to_string(max_d);
      c.run.parameters["delta_bin"] = csv::real(w);
      curve = propensity_2d(corpus, scheme, max_d, w);
    }
    const std::string summary_path = summary.empty() ? c.out + ".summary.csv" : summary;
    write_file(c.out, [&](std::ostream& out) { csv::write_propensity(out, curve); });
    write_file(summary_path, [&](std::ostream& out) { csv::write_propensity_summary(out, curve); });
    c.run.add_output(c.out);
    c.run.add_output(summary_path);
    c.save_run(c.out + ".run.json");
  }
};

struct DiffusionExtractCmd {
  Common c;

  void operator()() {
    c.run = started("diffusion extract");
    const auto corpus = c.load();
    const auto catalog = all_subgraphs(corpus);
    const std::string path = (fs::path(c.out) / "subgraphs.jsonl").string();
    write_file(path, [&](std::ostream& out) { csv::write_subgraphs(out, corpus, catalog); });
    c.run.add_output(path);
    c.save_run((fs::path(c.out) / "run.json").string());
    std::cout << "non-trivial subgraphs " << catalog.non_trivial << "\ntransmission links " << catalog.transmission_links
              << '\n';
  }
};

struct DiffusionStatsCmd {
  Common c;
  std::string kind = "sizes";
  std::optional<std::size_t> quantiles;

  void operator()() {
    c.run = started("diffusion stats");
    c.run.parameters = {{"kind", kind}};
    const auto corpus = c.load();
    const auto catalog = all_subgraphs(corpus);
    write_file(c.out, [&](std::ostream& out) {
      if (kind == "sizes") {
        csv::write_sizes(out, size_distribution(catalog.subgraphs));
      } else if (kind == "attention") {
        const std::size_t q = quantiles.value_or(8);
        c.run.parameters["quantiles"] = std::to_string(q);
        csv::write_attention_table(out, first_transmissions_vs_attention(corpus, catalog, q));
      } else {
        const std::size_t q = quantiles.value_or(5);
        c.run.parameters["quantiles"] = std::to_string(q);
        csv::write_edge_range_table(out, second_transmissions_vs_edge_range(corpus, catalog, q));
      }
    });
    c.run.add_output(c.out);
    c.save_run(c.out + ".run.json");
  }
};

struct SynthCmd {
  std::string config, out, manifest_out;

  void operator()() const {
    RunManifest run = started("synth");
    run.add_input(config);
    const auto cfg = GeneratorConfig::load(config);
    std::ostringstream echo;
    cfg.write(echo);
    std::istringstream lines(echo.str());
    for (std::string l; std::getline(lines, l);) {
      const auto eq = l.find(" = ");
      run.parameters[l.substr(0, eq)] = l.substr(eq + 3);
    }
    const auto corpus = generate(cfg);
    write_file(out, [&](std::ostream& o) { corpus.write_events(o); });
    const std::string mpath = manifest_out.empty() ? out + ".manifest.json" : manifest_out;
    write_file(mpath, [&](std::ostream& o) { o << corpus.manifest.to_json().dump(2) << '\n'; });
    run.add_output(out);
    run.add_output(mpath);
    run.save(out + ".run.json");
    std::cout << "posts " << corpus.records.size() << "\nmanifest " << mpath << '\n';
  }
};

struct ReportCmd {
  std::string index, outputs, out, format = "text";

  void operator()() const {
    const auto corpus = load_index(index);
    auto report = build_report(corpus, all_subgraphs(corpus));
    if (!outputs.empty()) {
      if (!fs::is_directory(outputs)) throw IoError("outputs directory '" + outputs + "' not found");
      report.artifacts = list_artifacts(outputs);
    }
    auto emit = [&](std::ostream& o) {
      if (format == "json") {
        o << report.to_json().dump(2) << '\n';
      } else {
        report.write_text(o);
      }
    };
    if (out.empty()) {
      emit(std::cout);
    } else {
      write_file(out, emit);
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  g_arguments.assign(argv, argv + argc);
  CLI::App app{"Co-evolving social and semantic blog network analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::function<void()> action;

  IngestCmd ingest_cmd;
  auto* ingest = app.add_subcommand("ingest", "Validate an event stream and build a corpus index");
  ingest->add_option("--events", ingest_cmd.events, "JSON lines, one post per line")->required();
  ingest->add_option("--manifest", ingest_cmd.manifest, "Window manifest JSON")->required();
  ingest->add_option("--out", ingest_cmd.out, "Index file to write")->required();
  ingest->callback([&] { action = [&] { ingest_cmd(); }; });

  const std::vector<std::string> propensity_kinds{"social", "detachment", "semantic", "2d"};

  DistancesCmd dist_cmd;
  auto* dist = app.add_subcommand("distances", "Social or detachment distances on the graph aggregated at a cutoff");
  dist->add_option("--index", dist_cmd.c.index)->required();
  dist->add_option("--cutoff", dist_cmd.cutoff, "Aggregation day")->required();
  dist->add_option("--kind", dist_cmd.kind)->check(CLI::IsMember({"social", "detachment"}))->capture_default_str();
  auto* dist_pairs = dist->add_option("--pairs", dist_cmd.pairs, "CSV of src,dst blog names");
  auto* dist_all = dist->add_flag("--all", dist_cmd.all, "Every ordered pair");
  dist_pairs->excludes(dist_all);
  dist->add_option("--out", dist_cmd.c.out)->required();
  dist->callback([&] {
    if (!dist_cmd.all && dist_cmd.pairs.empty()) throw CLI::ValidationError("distances", "one of --pairs or --all is required");
    action = [&] { dist_cmd(); };
  });

  SemdistCmd sem_cmd;
  auto* sem = app.add_subcommand("semdist", "Semantic distances from tf-idf profiles at a cutoff");
  sem->add_option("--index", sem_cmd.c.index)->required();
  sem->add_option("--cutoff", sem_cmd.cutoff)->required();
  auto* sem_pairs = sem->add_option("--pairs", sem_cmd.pairs);
  auto* sem_all = sem->add_flag("--all", sem_cmd.all);
  sem_pairs->excludes(sem_all);
  sem->add_option("--out", sem_cmd.c.out)->required();
  sem->callback([&] {
    if (!sem_cmd.all && sem_cmd.pairs.empty()) throw CLI::ValidationError("semdist", "one of --pairs or --all is required");
    action = [&] { sem_cmd(); };
  });

  PropensityCmd prop_cmd;
  auto* prop = app.add_subcommand("propensity", "Link-creation propensity curves over rolling windows");
  prop->add_option("--index", prop_cmd.c.index)->required();
  prop->add_option("--kind", prop_cmd.kind)->check(CLI::IsMember(propensity_kinds))->capture_default_str();
  prop->add_option("--t0", prop_cmd.scheme.t0)->capture_default_str();
  prop->add_option("--T", prop_cmd.scheme.length, "Window length in days")->capture_default_str();
  prop->add_option("--windows", prop_cmd.scheme.windows)->capture_default_str();
  prop->add_option("--max-d", prop_cmd.max_d, "Largest explicit social-distance bin")->capture_default_str();
  prop->add_option("--delta-bin", prop_cmd.delta_bin, "Semantic bin width (0.1 for semantic, 0.2 for 2d)");
  prop->add_option("--bins", prop_cmd.bins, "Detachment bin edges, comma separated rationals");
  prop->add_option("--out", prop_cmd.c.out)->required();
  prop->add_option("--summary", prop_cmd.summary, "Summary CSV (default <out>.summary.csv)");
  prop->callback([&] { action = [&] { prop_cmd(); }; });

  auto* diff = app.add_subcommand("diffusion", "URL diffusion subgraphs");
  diff->require_subcommand(1);
  DiffusionExtractCmd extract_cmd;
  auto* extract = diff->add_subcommand("extract", "Write every non-trivial subgraph as JSON lines");
  extract->add_option("--index", extract_cmd.c.index)->required();
  extract->add_option("--out", extract_cmd.c.out, "Output directory")->required();
  extract->callback([&] { action = [&] { extract_cmd(); }; });
  DiffusionStatsCmd stats_cmd;
  auto* stats = diff->add_subcommand("stats", "Size histograms and transmission tables");
  stats->add_option("--index", stats_cmd.c.index)->required();
  stats->add_option("--kind", stats_cmd.kind)->check(CLI::IsMember({"sizes", "attention", "edgerange"}))->capture_default_str();
  stats->add_option("--quantiles", stats_cmd.quantiles, "Groups (default 8 for attention, 5 for edgerange)");
  stats->add_option("--out", stats_cmd.c.out)->required();
  stats->callback([&] { action = [&] { stats_cmd(); }; });

  SynthCmd synth_cmd;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic event stream");
  synth->add_option("--config", synth_cmd.config, "key = value generator config")->required();
  synth->add_option("--out", synth_cmd.out, "Events file to write")->required();
  synth->add_option("--manifest-out", synth_cmd.manifest_out, "Manifest path (default <out>.manifest.json)");
  synth->callback([&] { action = [&] { synth_cmd(); }; });

  ReportCmd report_cmd;
  auto* report = app.add_subcommand("report", "Corpus and diffusion summary");
  report->add_option("--index", report_cmd.index)->required();
  report->add_option("--outputs", report_cmd.outputs, "Directory of CSV artifacts to list");
  report->add_option("--format", report_cmd.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  report->add_option("--out", report_cmd.out, "Write to a file instead of stdout");
  report->callback([&] { action = [&] { report_cmd(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    action();
  } catch (const IoError& e) {
    std::cerr << "cosoc: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "cosoc: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
