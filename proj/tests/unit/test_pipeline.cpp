#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "fixtures.hpp"

using namespace polis;
namespace fs = std::filesystem;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

PlotSeries ramp(const std::string& name, std::size_t n, double offset) {
  PlotSeries s{name, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    s.x.push_back(1997.0 + static_cast<double>(i));
    s.y.push_back(offset + 0.001 * static_cast<double>(i));
  }
  return s;
}

RunConfig mini_config(const fs::path& out) {
  RunConfig cfg;
  cfg.input = fixtures::data_file("mini_corpus.jsonl");
  cfg.lexicon = fixtures::data_file("pii_lexicon.txt");
  cfg.negation = fixtures::data_file("negation_lexicon.txt");
  cfg.out = out;
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POLIS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Svg, TwoSeriesWithLegend) {
  std::vector<PlotSeries> data = {ramp("cookies", 23, 0.01), ramp("beacons", 23, 0.02)};
  auto plot = render_line_plot(data, {"Frequencies", "year", "f"});
  EXPECT_EQ(count_of(plot.svg, "<polyline"), 2u);
  EXPECT_NE(plot.svg.find("class=\"legend\""), std::string::npos);
  EXPECT_NE(plot.svg.find(">cookies<"), std::string::npos);
  EXPECT_TRUE(plot.warnings.empty());
  EXPECT_EQ(render_line_plot(data, {"Frequencies", "year", "f"}).svg, plot.svg);
}

TEST(Svg, LogScaleDropsZeros) {
  auto s = ramp("t", 5, 0.0);  // first point is 0
  std::vector<PlotSeries> data = {s};
  auto plot = render_line_plot(data, {"", "year", "f", true});
  ASSERT_EQ(plot.warnings.size(), 1u);
  EXPECT_NE(plot.warnings[0].find("t"), std::string::npos);
  EXPECT_EQ(count_of(plot.svg, "<polyline"), 1u);
}

TEST(Svg, EmptyInputIsAnError) {
  EXPECT_THROW(render_line_plot(std::vector<PlotSeries>{}), DomainError);
  std::vector<PlotSeries> one = {ramp("t", 1, 1.0)};
  EXPECT_THROW(render_line_plot(one), DomainError);
}

TEST(Pipeline, IngestReportsPerYearCounts) {
  const auto out = fixtures::temp_dir("pipeline_ingest");
  Pipeline p(mini_config(out));
  p.run("ingest");
  const auto report = nlohmann::json::parse(io::read_file(out / "run_report_ingest.json"));
  EXPECT_EQ(report["counts"]["records_read"], 200);
  EXPECT_EQ(report["counts"]["years"].size(), 5u);
  EXPECT_GT(report["counts"]["years"]["2017"]["sentences_dropped_by_negation"].get<int>(), 0);
  EXPECT_EQ(report["counts"]["lexicon_raw_entries"], 287);
  for (int y = 2015; y <= 2019; ++y) EXPECT_TRUE(fs::exists(out / "store" / (std::to_string(y) + ".tokens")));
  EXPECT_FALSE(report.contains("timings"));
}

TEST(Pipeline, CountsSurviveSharedStore) {
  const auto out = fixtures::temp_dir("pipeline_shared");
  Pipeline p(mini_config(out));
  p.run("stats");
  p.run("freq");
  const auto report = nlohmann::json::parse(io::read_file(out / "run_report_freq.json"));
  EXPECT_EQ(report["counts"]["records_read"], 200);
}

TEST(Pipeline, YearRangeMaterializesEmptyYears) {
  const auto out = fixtures::temp_dir("pipeline_years");
  auto cfg = mini_config(out);
  cfg.years = YearRange{2014, 2016};
  Pipeline p(cfg);
  p.run("stats");
  const auto rows = io::parse_csv(io::read_file(out / "summary.csv"));
  ASSERT_EQ(rows.size(), 1u + 3 * 2);
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"2014", "full", "0", "0", "0"}));
}

TEST(Pipeline, UnknownCommand) {
  Pipeline p(mini_config(fixtures::temp_dir("pipeline_unknown")));
  EXPECT_THROW(p.run("bogus"), std::invalid_argument);
}

TEST(Cli, CoocSurfaceContract) {
  const auto out = fixtures::temp_dir("cli_cooc");
  const std::string common = "--input " + fixtures::data_file("mini_corpus.jsonl").string() + " --out " + out.string();
  ASSERT_EQ(run_cli(common + " cooc --year 2019 --alpha 0.05 --export tsv"), 0);
  const auto rows = io::parse_csv(io::read_file(out / "cooc_metrics.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].fields[0], "2019");
  EXPECT_TRUE(fs::exists(out / "cooc_2019.tsv"));
  EXPECT_TRUE(fs::exists(out / "cooc_2019_backbone.tsv"));
}

TEST(Cli, ExitCodes) {
  const auto out = fixtures::temp_dir("cli_codes");
  const std::string input = " --input " + fixtures::data_file("mini_corpus.jsonl").string() + " --out " + out.string();
  EXPECT_EQ(run_cli(input + " stats"), 0);
  EXPECT_EQ(run_cli(input + " stats --no-such-flag"), 1);
  EXPECT_EQ(run_cli(input + " --denominator sometimes stats"), 1);
  EXPECT_EQ(run_cli(input), 1);  // no subcommand
  EXPECT_EQ(run_cli("--input /nonexistent.jsonl --out " + out.string() + " stats"), 2);
  EXPECT_EQ(run_cli(input + " cooc --year 1850"), 2);
  EXPECT_EQ(run_cli(input + " --alpha 1.5 cooc"), 1);
}

TEST(Cli, ConfigFileFromEnvironment) {
  const auto out = fixtures::temp_dir("cli_config");
  std::ofstream(out / "polis.ini") << "input=" << fixtures::data_file("mini_corpus.jsonl").string() << "\nout="
                                   << (out / "res").string() << "\n";
  const std::string cmd = "POLIS_CONFIG=" + (out / "polis.ini").string() + " " + POLIS_CLI_PATH + " stats >/dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(out / "res" / "summary.csv"));
}
