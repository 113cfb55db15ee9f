// polis: command-line front end for the corpus analytics pipeline.
//
//   polis [global options] <ingest|stats|freq|turbulence|cooc|topics|complexity|plot> [options]
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polis/pipeline.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

polis::YearRange parse_years(const std::string& spec) {
  const auto colon = spec.find(':');
  try {
    if (colon == std::string::npos) {
      const int y = std::stoi(spec);
      return {y, y};
    }
    polis::YearRange r{std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
    if (r.first > r.last) throw CLI::ValidationError("--years", "first year after last year");
    return r;
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--years", "expected A:B, got '" + spec + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal privacy-policy corpus analytics", "polis"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "INI-style key=value file (flags override it)")->envname("POLIS_CONFIG");

  polis::RunConfig cfg;
  const std::string data_dir = POLIS_DATA_DIR;
  cfg.lexicon = data_dir + "/pii_lexicon.txt";
  cfg.negation = data_dir + "/negation_lexicon.txt";

  std::string input, lexicon = cfg.lexicon.string(), negation = cfg.negation.string(), out = cfg.out.string();
  std::string years, denominator = "full", match = "single", stability = "endpoints";
  std::vector<std::string> exports;
  auto& tp = cfg.turbulence;

  app.add_option("--input,-i", input, "Corpus file (.jsonl or .csv)");
  app.add_option("--years", years, "Year range A:B (inclusive)");
  app.add_option("--lexicon", lexicon, "PII lexicon file")->capture_default_str();
  app.add_option("--negation", negation, "Negation lexicon file")->capture_default_str();
  app.add_option("--denominator", denominator, "Relative-frequency denominator")
      ->check(CLI::IsMember({"full", "pii"}))
      ->capture_default_str();
  app.add_option("--match", match, "Lexicon matching mode")->check(CLI::IsMember({"single", "phrase"}))->capture_default_str();
  app.add_flag("--wildcard-negation", cfg.wildcard_negation, "Apply prefix wildcards (in*, un*, ...) when filtering negation");
  app.add_flag("--skip-bad", cfg.skip_bad, "Skip malformed corpus records instead of aborting");
  app.add_option("--window-years", tp.window_years, "Rising: window length in years")->capture_default_str();
  app.add_option("--factor", tp.factor, "Rising: growth factor")->capture_default_str();
  app.add_option("--drop", tp.drop, "Falling: one-year relative drop")->capture_default_str();
  app.add_option("--span-years", tp.span_years, "Stable: minimum span in years")->capture_default_str();
  app.add_option("--tolerance", tp.tolerance, "Stable: relative change tolerance")->capture_default_str();
  app.add_option("--stability", stability, "Stable: comparison rule")
      ->check(CLI::IsMember({"endpoints", "spread"}))
      ->capture_default_str();
  app.add_option("--min-support", tp.min_support, "Rising/falling: minimum count in the evidencing year")
      ->capture_default_str();
  app.add_option("--min-count-emerge", tp.min_count_emerge, "Emergent: minimum count after a zero year")
      ->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Disparity-filter significance level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master random seed")->capture_default_str();
  app.add_option("--sample", cfg.sample, "Policies sampled per year for complexity (0 = all)")->capture_default_str();
  app.add_option("--out,-o", out, "Output directory")->capture_default_str();
  app.add_option("--export", exports, "Extra outputs: csv, json, tsv, graphml, svg")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "tsv", "graphml", "svg"}));
  app.add_option("--threads", cfg.threads, "Worker threads for cleaning")->capture_default_str();
  app.add_flag("--timings", cfg.timings, "Record stage timings in the run report (breaks byte-identical reports)");

  auto* ingest = app.add_subcommand("ingest", "Load, clean and persist per-year token stores");
  auto* stats = app.add_subcommand("stats", "Per-year corpus summary (full and PII-filtered)");
  auto* freq = app.add_subcommand("freq", "Per-term yearly frequency series");
  freq->add_option("--terms", cfg.terms, "Also write the series of these terms")->delimiter(',');

  auto* turb = app.add_subcommand("turbulence", "Rising / falling / stable / emergent term labels");
  std::string mode = "all";
  turb->add_option("--mode", mode, "Which rule to apply")
      ->check(CLI::IsMember({"rise", "fall", "stable", "emerge", "all"}))
      ->capture_default_str();

  auto* cooc = app.add_subcommand("cooc", "Co-occurrence network metrics, backbone and exports");
  int year = 0;
  auto* year_opt = cooc->add_option("--year", year, "Single year (default: every year)");
  cooc->add_flag("--unweighted-q", cfg.unweighted_q, "Optimize modularity on the unweighted graph");
  cooc->add_option("--runs", cfg.louvain_runs, "Community-detection restarts")->capture_default_str();

  auto* topics = app.add_subcommand("topics", "Block-model topics and yearly topic prevalence");
  topics->add_option("--min-count", cfg.min_count, "Drop words rarer than this")->capture_default_str();
  topics->add_option("--max-blocks", cfg.max_blocks, "Initial block cap per side (0 = max(64, sqrt(N)))")->capture_default_str();

  auto* complexity = app.add_subcommand("complexity", "Per-year MDL / TDL compression factor");
  std::string vocabulary = "full";
  complexity->add_option("--vocabulary", vocabulary, "Word vocabulary for the fit")
      ->check(CLI::IsMember({"full", "lexicon"}))
      ->capture_default_str();
  complexity->add_option("--min-count", cfg.min_count, "Drop words rarer than this")->capture_default_str();
  complexity->add_option("--max-blocks", cfg.max_blocks, "Initial block cap per side (0 = max(64, sqrt(N)))")->capture_default_str();

  auto* plot = app.add_subcommand("plot", "Render an SVG line chart");
  plot->add_option("--source", cfg.plot_source, "Data to plot")
      ->check(CLI::IsMember({"freq", "complexity", "density"}))
      ->capture_default_str();
  plot->add_option("--terms", cfg.terms, "Terms to plot (freq source)")->delimiter(',');
  plot->add_flag("--log-y", cfg.log_y, "Logarithmic y axis");
  turb->add_flag("--log-y", cfg.log_y, "Logarithmic y axis for --export svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsageError;
  }

  try {
    if (!years.empty()) cfg.years = parse_years(years);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kUsageError;
  }
  cfg.input = input;
  cfg.lexicon = lexicon;
  cfg.negation = negation;
  cfg.out = out;
  cfg.denominator = denominator == "pii" ? polis::Denominator::pii : polis::Denominator::full;
  cfg.match = match == "phrase" ? polis::MatchMode::phrase : polis::MatchMode::single_token;
  tp.stability = stability == "spread" ? polis::StabilityRule::spread : polis::StabilityRule::endpoints;
  cfg.exports = {exports.begin(), exports.end()};
  cfg.vocabulary = vocabulary == "lexicon" ? polis::Vocabulary::lexicon : polis::Vocabulary::full;
  if (*year_opt) cfg.year = year;
  if (mode != "all") {
    using K = polis::TurbulenceKind;
    cfg.kinds = {mode == "rise" ? K::rising : mode == "fall" ? K::falling : mode == "stable" ? K::stable : K::emergent};
  }

  std::string command;
  for (auto* sub : {ingest, stats, freq, turb, cooc, topics, complexity, plot})
    if (sub->parsed()) command = sub->get_name();

  try {
    polis::Pipeline pipeline(cfg);
    pipeline.run(command);
    for (const auto& w : pipeline.report().warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& o : pipeline.report().outputs) std::cout << (cfg.out / o).string() << '\n';
  } catch (const polis::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const polis::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
