#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polis/coocnet.hpp"
#include "polis/ingest.hpp"
#include "polis/io.hpp"
#include "polis/lexicon.hpp"
#include "polis/rng.hpp"
#include "polis/svg.hpp"
#include "polis/textpipe.hpp"
#include "polis/topicmdl.hpp"
#include "polis/turbulence.hpp"

namespace polis {

// Every tunable of a run. Threshold defaults are the published rule values.
struct RunConfig {
  std::filesystem::path input;
  std::optional<YearRange> years;
  std::filesystem::path lexicon;
  std::filesystem::path negation;
  std::filesystem::path out = "polis_out";
  Denominator denominator = Denominator::full;
  MatchMode match = MatchMode::single_token;
  bool wildcard_negation = false;
  bool skip_bad = false;
  TurbulenceParams turbulence;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  std::size_t sample = 2800;  // 0 = whole year
  unsigned threads = 1;
  bool timings = false;

  // subcommand options
  std::vector<TurbulenceKind> kinds = {TurbulenceKind::rising, TurbulenceKind::falling, TurbulenceKind::stable,
                                       TurbulenceKind::emergent};
  std::optional<int> year;
  std::set<std::string> exports;
  std::vector<std::string> terms;
  bool unweighted_q = false;
  std::size_t louvain_runs = 10;
  Vocabulary vocabulary = Vocabulary::full;  // complexity
  std::uint64_t min_count = 1;
  bool log_y = false;
  std::string plot_source = "freq";
  std::size_t max_blocks = 0;
};

inline nlohmann::ordered_json echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["input"] = c.input.generic_string();
  j["years"] = c.years ? std::to_string(c.years->first) + ":" + std::to_string(c.years->last) : "all";
  j["lexicon"] = c.lexicon.generic_string();
  j["negation"] = c.negation.generic_string();
  j["denominator"] = c.denominator == Denominator::full ? "full" : "pii";
  j["match"] = c.match == MatchMode::single_token ? "single" : "phrase";
  j["wildcard_negation"] = c.wildcard_negation;
  j["window_years"] = c.turbulence.window_years;
  j["factor"] = c.turbulence.factor;
  j["drop"] = c.turbulence.drop;
  j["span_years"] = c.turbulence.span_years;
  j["tolerance"] = c.turbulence.tolerance;
  j["stability"] = c.turbulence.stability == StabilityRule::endpoints ? "endpoints" : "spread";
  j["min_support"] = c.turbulence.min_support;
  j["min_count_emerge"] = c.turbulence.min_count_emerge;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["sample"] = c.sample;
  j["year"] = c.year ? nlohmann::ordered_json(*c.year) : nlohmann::ordered_json("all");
  j["exports"] = c.exports;
  j["louvain_runs"] = c.louvain_runs;
  j["unweighted_q"] = c.unweighted_q;
  j["vocabulary"] = c.vocabulary == Vocabulary::full ? "full" : "lexicon";
  j["min_count"] = c.min_count;
  j["max_blocks"] = c.max_blocks;
  return j;
}

struct RunReport {
  std::string command;
  nlohmann::ordered_json config;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timings;  // seconds
  std::vector<std::string> outputs;

  nlohmann::ordered_json to_json(bool with_timings) const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config"] = config;
    j["counts"] = counts;
    j["warnings"] = warnings;
    j["outputs"] = outputs;
    if (with_timings) {
      nlohmann::ordered_json t = nlohmann::ordered_json::object();
      for (const auto& [stage, s] : timings) t[stage] = s;
      j["timings"] = t;
    }
    return j;
  }
};

// Runs subcommands against one configuration. Loading and cleaning happen
// once and are shared by the stages run through the same instance.
class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {}

  const RunConfig& config() const { return cfg_; }
  const RunReport& report() const { return report_; }

  // Dispatches by subcommand name; throws std::invalid_argument on unknown names.
  void run(const std::string& command) {
    report_ = RunReport{};
    report_.command = command;
    report_.config = echo(cfg_);
    for (const auto& [k, v] : load_counts_.items()) report_.counts[k] = v;
    report_.warnings = load_warnings_;
    if (command == "ingest") ingest();
    else if (command == "stats") stats();
    else if (command == "freq") freq();
    else if (command == "turbulence") turbulence();
    else if (command == "cooc") cooc();
    else if (command == "topics") topics();
    else if (command == "complexity") complexity();
    else if (command == "plot") plot();
    else throw std::invalid_argument("unknown subcommand '" + command + "'");
    write("run_report_" + command + ".json", report_.to_json(cfg_.timings).dump(2) + "\n");
  }

  static const std::vector<std::string>& commands() {
    static const std::vector<std::string> kAll = {"ingest", "stats",  "freq",       "turbulence",
                                                  "cooc",   "topics", "complexity", "plot"};
    return kAll;
  }

  const CorpusStore& store() {
    if (!store_) {
      Timer t(*this, "load+clean");
      if (cfg_.input.empty()) throw DataError("no input corpus given (--input)");
      auto loaded = load_corpus(cfg_.input, LoadOptions{cfg_.skip_bad});
      load_counts_["records_read"] = loaded.records_read;
      load_counts_["records_skipped"] = loaded.skipped.size();
      load_counts_["blank_text_dropped"] = loaded.dropped_blank;
      for (const auto& s : loaded.skipped) load_warnings_.push_back("skipped record: " + s);
      for (const auto& [k, v] : load_counts_.items()) report_.counts[k] = v;
      report_.warnings.insert(report_.warnings.end(), load_warnings_.begin(), load_warnings_.end());
      store_ = CorpusStore::build(std::move(loaded.snapshots), negation(), CleanOptions{cfg_.wildcard_negation},
                                  cfg_.years, cfg_.threads);
      if (store_->empty()) throw DataError("no snapshots in the requested years");
    }
    return *store_;
  }

  const Lexicon& lexicon() {
    if (!lexicon_) {
      if (cfg_.lexicon.empty()) throw DataError("no PII lexicon given (--lexicon)");
      lexicon_ = Lexicon::load(cfg_.lexicon);
    }
    return *lexicon_;
  }

  const NegationLexicon& negation() {
    if (!negation_) {
      if (cfg_.negation.empty()) throw DataError("no negation lexicon given (--negation)");
      negation_ = NegationLexicon::load(cfg_.negation);
    }
    return *negation_;
  }

  const std::vector<TermFrequencySeries>& series() {
    if (!series_) series_ = build_frequency_series(store(), lexicon(), cfg_.denominator, cfg_.match);
    return *series_;
  }

 private:
  struct Timer {
    Timer(Pipeline& p, std::string stage) : p_(p), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
    ~Timer() {
      p_.report_.timings.emplace_back(
          stage_, std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
    }
    Pipeline& p_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
  };

  bool exports(const std::string& kind) const { return cfg_.exports.count(kind) != 0; }

  void write(const std::string& name, const std::string& content) {
    io::atomic_write(cfg_.out / name, content);
    if (name.rfind("run_report_", 0) != 0) report_.outputs.push_back(name);
  }

  void write_svg(const std::string& name, const std::vector<PlotSeries>& data, const PlotOptions& opts) {
    auto plot = render_line_plot(data, opts);
    for (auto& w : plot.warnings) report_.warnings.push_back(std::move(w));
    write(name, plot.svg);
  }

  void ingest() {
    const auto& st = store();
    Timer t(*this, "persist");
    const auto& lex = lexicon();
    auto per_year = nlohmann::ordered_json::object();
    for (int y : st.years()) {
      const auto& yc = st.at(y);
      std::uint64_t matches = 0;
      for (const auto& d : yc.docs) matches += match_lexicon(d.tokens, lex, cfg_.match).total;
      per_year[std::to_string(y)] = {{"snapshots", yc.snapshots.size()},
                                     {"sentences_in", yc.sentences_in},
                                     {"sentences_kept", yc.sentences_in - yc.sentences_dropped},
                                     {"sentences_dropped_by_negation", yc.sentences_dropped},
                                     {"tokens", yc.token_count},
                                     {"unique_tokens", yc.unique_token_count},
                                     {"lexicon_matches", matches}};
      persist_tokens(st, y, cfg_.out / "store");
      report_.outputs.push_back("store/" + token_store_path("", y).string());
    }
    report_.counts["years"] = per_year;
    report_.counts["lexicon_terms"] = lex.size();
    report_.counts["lexicon_raw_entries"] = lex.report().raw_entries;
    for (const auto& w : lex.report().warnings) report_.warnings.push_back("lexicon: " + w);
  }

  void stats() {
    const auto& st = store();
    std::string csv = "year,mode,n_policies,n_tokens,n_unique_tokens\n";
    for (int y : st.years()) {
      for (auto mode : {SummaryMode::full, SummaryMode::pii_filtered}) {
        const auto row = summary_stats(st, y, mode, &lexicon(), cfg_.match);
        csv += std::to_string(y) + (mode == SummaryMode::full ? ",full," : ",pii-filtered,") +
               std::to_string(row.n_policies) + ',' + std::to_string(row.n_tokens) + ',' +
               std::to_string(row.n_unique_tokens) + '\n';
      }
    }
    write("summary.csv", csv);
  }

  void freq() {
    const auto& all = series();
    report_.counts["series"] = all.size();
    write("frequency.csv", series_csv(all));
    if (!cfg_.terms.empty()) {
      auto sel = select_series(all, cfg_.terms);
      for (const auto& m : sel.missing) report_.warnings.push_back("term not found: " + m);
      write("frequency_selection.csv", series_csv(sel.series));
    }
  }

  void turbulence() {
    const auto& all = series();
    auto labels = classify_all(all, cfg_.turbulence, cfg_.kinds);
    auto counts = nlohmann::ordered_json::object();
    for (auto k : cfg_.kinds)
      counts[to_string(k)] =
          std::count_if(labels.begin(), labels.end(), [&](const TurbulenceLabel& l) { return l.kind == k; });
    report_.counts["labels"] = counts;
    write("turbulence_labels.csv", labels_csv(labels));
    if (exports("svg")) {
      for (auto k : cfg_.kinds) {
        std::vector<PlotSeries> data;
        for (const auto& l : labels) {
          if (l.kind != k) continue;
          auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.term == l.term; });
          if (it->size() >= 2) data.push_back(to_plot(*it));
        }
        if (!data.empty())
          write_svg(std::string("turbulence_") + to_string(k) + ".svg", data,
                    {std::string(to_string(k)) + " terms", "year", "relative frequency", cfg_.log_y});
      }
    }
  }

  static PlotSeries to_plot(const TermFrequencySeries& s) {
    PlotSeries p{s.term, {}, s.freqs};
    for (int y : s.years) p.x.push_back(y);
    return p;
  }

  std::vector<GraphMetrics> cooc_metrics() {
    const auto& st = store();
    std::vector<int> years = st.years();
    if (cfg_.year) {
      st.at(*cfg_.year);
      years = {*cfg_.year};
    }
    std::vector<GraphMetrics> rows;
    for (int y : years) {
      std::vector<TermOccurrences> occ;
      for (const auto& d : st.at(y).docs) occ.push_back(match_lexicon(d.tokens, lexicon(), cfg_.match));
      auto cg = build_cooccurrence(y, occ);
      auto g = prune_isolates(cg.graph);
      MetricsOptions mo{cfg_.louvain_runs, cfg_.seed, cfg_.unweighted_q};
      rows.push_back(compute_metrics(y, g, mo));
      if (!exporting_graphs_) continue;
      const std::string stem = "cooc_" + std::to_string(y);
      auto backbone = disparity_backbone(g, BackboneParams{cfg_.alpha});
      if (exports("tsv")) {
        write(stem + ".tsv", edge_list_tsv(g));
        write(stem + "_backbone.tsv", edge_list_tsv(backbone));
      }
      if (exports("graphml")) {
        std::optional<Partition> comm;
        if (!g.empty()) comm = detect_communities(g, cfg_.louvain_runs, derive_seed(cfg_.seed, "year:" + std::to_string(y))).partition;
        write(stem + ".graphml", graphml(g, comm ? &*comm : nullptr));
        write(stem + "_backbone.graphml", graphml(backbone));
      }
      std::string ranks = "kind,rank,value,node\n";
      std::vector<PlotSeries> rank_plot;
      for (auto kind : {RankKind::degree, RankKind::strength}) {
        const char* name = kind == RankKind::degree ? "degree" : "strength";
        PlotSeries ps{name, {}, {}};
        for (const auto& r : rank_distribution(g, kind)) {
          ranks += std::string(name) + ',' + std::to_string(r.rank) + ',' + io::format_double(r.value) + ',' +
                   io::csv_escape(r.node) + '\n';
          ps.x.push_back(static_cast<double>(r.rank));
          ps.y.push_back(r.value);
        }
        if (ps.x.size() >= 2) rank_plot.push_back(std::move(ps));
      }
      write(stem + "_ranks.csv", ranks);
      if (exports("svg") && !rank_plot.empty())
        write_svg(stem + "_ranks.svg", rank_plot, {"Rank distribution " + std::to_string(y), "rank", "value", true});
      report_.counts["backbone_edges_" + std::to_string(y)] = backbone.edge_count();
    }
    return rows;
  }

  void cooc() {
    Timer t(*this, "cooc");
    exporting_graphs_ = true;
    auto rows = cooc_metrics();
    exporting_graphs_ = false;
    write("cooc_metrics.csv", metrics_csv(rows));
  }

  void topics() {
    const auto& st = store();
    Timer t(*this, "topics");
    std::vector<CleanedDocument> docs;
    for (int y : st.years())
      for (const auto& d : st.at(y).docs) docs.push_back(d);
    BipartiteOptions bo{Vocabulary::lexicon, &lexicon(), cfg_.match, cfg_.min_count};
    auto g = build_bipartite(docs, bo);
    report_.counts["documents"] = g.docs.size();
    report_.counts["documents_without_vocabulary"] = g.empty_docs.size();
    report_.counts["vocabulary"] = g.words.size();
    if (g.total == 0) throw DataError("no lexicon terms in the corpus; cannot fit topics");
    auto state = fit_sbm(g, {derive_seed(cfg_.seed, "sbm:topics"), cfg_.max_blocks});
    auto topics = extract_topics(state, g);
    report_.counts["topics"] = topics.size();
    report_.counts["dl_nats"] = state.dl_nats;
    write("topics.json", topics_json(topics));
    write("topics.txt", topics_text(topics));

    std::vector<TopicShares> rows;
    for (int y : st.years()) {
      std::map<std::string, std::uint64_t> counts;
      for (const auto& d : st.at(y).docs)
        for (const auto& [w, c] : match_lexicon(d.tokens, lexicon(), cfg_.match).counts) counts[w] += c;
      rows.push_back(topic_prevalence(topics, y, counts));
      if (rows.back().no_vocabulary_tokens)
        report_.warnings.push_back("year " + std::to_string(y) + " has no vocabulary tokens; shares set to 0");
    }
    write("topic_prevalence.csv", prevalence_csv(topics, rows));
    if (exports("svg") && rows.size() >= 2) write_svg("topic_prevalence.svg", prevalence_plot(topics, rows), {"Topic prevalence", "year", "share", cfg_.log_y});
  }

  static std::vector<PlotSeries> prevalence_plot(const std::vector<Topic>& topics, const std::vector<TopicShares>& rows) {
    std::vector<PlotSeries> data;
    for (std::size_t i = 0; i < topics.size() && i < 10; ++i) {
      PlotSeries ps{topics[i].label(), {}, {}};
      for (const auto& r : rows) {
        ps.x.push_back(r.year);
        ps.y.push_back(r.share[i]);
      }
      data.push_back(std::move(ps));
    }
    return data;
  }

  std::vector<ComplexityRecord> complexity_rows() {
    const auto& st = store();
    std::vector<ComplexityRecord> rows;
    for (int y : st.years()) {
      const auto& yc = st.at(y);
      std::vector<CleanedDocument> docs;
      if (cfg_.sample > 0) {
        auto s = sample_policies(yc.docs.size(), cfg_.sample, derive_seed(cfg_.seed, "sample"), y);
        if (s.short_year)
          report_.warnings.push_back("year " + std::to_string(y) + " has " + std::to_string(yc.docs.size()) +
                                     " policies, fewer than the sample size " + std::to_string(cfg_.sample));
        for (auto i : s.indices) docs.push_back(yc.docs[i]);
      } else {
        docs = yc.docs;
      }
      if (docs.empty()) {
        report_.warnings.push_back("year " + std::to_string(y) + " is empty; skipped");
        continue;
      }
      BipartiteOptions bo{cfg_.vocabulary, cfg_.vocabulary == Vocabulary::lexicon ? &lexicon() : nullptr, cfg_.match,
                          cfg_.min_count};
      auto g = build_bipartite(docs, bo);
      if (g.total == 0 || g.words.size() < 2) {
        report_.warnings.push_back("year " + std::to_string(y) + " has fewer than two distinct words; skipped");
        continue;
      }
      auto state = fit_sbm(g, {derive_seed(cfg_.seed, "sbm:" + std::to_string(y)), cfg_.max_blocks});
      rows.push_back(make_complexity_record(y, g, state.dl_nats));
    }
    return rows;
  }

  void complexity() {
    Timer t(*this, "complexity");
    auto rows = complexity_rows();
    write("complexity.csv", complexity_csv(rows));
    if (exports("svg") && rows.size() >= 2) write_svg("complexity.svg", {complexity_plot(rows)}, {"Compression factor", "year", "MDL / TDL", false});
  }

  static PlotSeries complexity_plot(const std::vector<ComplexityRecord>& rows) {
    PlotSeries ps{"compression factor", {}, {}};
    for (const auto& r : rows) {
      ps.x.push_back(r.year);
      ps.y.push_back(r.compression_factor);
    }
    return ps;
  }

  void plot() {
    std::vector<PlotSeries> data;
    PlotOptions opts{"", "year", "", cfg_.log_y};
    if (cfg_.plot_source == "freq") {
      std::vector<TermFrequencySeries> chosen;
      if (cfg_.terms.empty()) {
        chosen = series();
        std::stable_sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) {
          return std::accumulate(a.counts.begin(), a.counts.end(), 0ull) >
                 std::accumulate(b.counts.begin(), b.counts.end(), 0ull);
        });
        if (chosen.size() > 10) chosen.resize(10);
      } else {
        auto sel = select_series(series(), cfg_.terms);
        for (const auto& m : sel.missing) report_.warnings.push_back("term not found: " + m);
        chosen = std::move(sel.series);
      }
      for (const auto& s : chosen) data.push_back(to_plot(s));
      opts.title = "Relative frequency";
      opts.y_label = "relative frequency";
    } else if (cfg_.plot_source == "complexity") {
      data.push_back(complexity_plot(complexity_rows()));
      opts.title = "Compression factor";
      opts.y_label = "MDL / TDL";
    } else if (cfg_.plot_source == "density") {
      auto rows = cooc_metrics();
      PlotSeries d{"density", {}, {}}, q{"modularity", {}, {}};
      for (const auto& r : rows) {
        d.x.push_back(r.year);
        d.y.push_back(r.density);
        q.x.push_back(r.year);
        q.y.push_back(r.modularity);
      }
      data = {d, q};
      opts.title = "Co-occurrence network density and modularity";
    } else {
      throw std::invalid_argument("unknown plot source '" + cfg_.plot_source + "' (freq, complexity, density)");
    }
    write("plot_" + cfg_.plot_source + ".svg", render_with_warnings(data, opts));
  }

  std::string render_with_warnings(const std::vector<PlotSeries>& data, const PlotOptions& opts) {
    auto p = render_line_plot(data, opts);
    for (auto& w : p.warnings) report_.warnings.push_back(std::move(w));
    return p.svg;
  }

  RunConfig cfg_;
  RunReport report_;
  std::optional<CorpusStore> store_;
  std::optional<Lexicon> lexicon_;
  std::optional<NegationLexicon> negation_;
  std::optional<std::vector<TermFrequencySeries>> series_;
  nlohmann::ordered_json load_counts_ = nlohmann::ordered_json::object();
  std::vector<std::string> load_warnings_;
  bool exporting_graphs_ = false;
};

}  // namespace polis
