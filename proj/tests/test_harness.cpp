// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "harness.hpp"
#include "rng.hpp"
#include "scenario.hpp"

using namespace nearfocus;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path("harness_test_out") / name;
  std::filesystem::remove_all(dir);
  return dir;
}

// Small two-user scenario that exercises every strategy in seconds.
ScenarioConfig tiny_run_config() {
  ScenarioConfig cfg = figure_preset(Figure::kRun);
  cfg.antenna_count = 16;
  cfg.users = {{0.3, 10.0}, {0.6, -25.0}};
  cfg.cluster_count = 0;
  cfg.trials = 2;
  cfg.threads = 1;
  cfg.music.fine_r_step_lambda = 30.0;
  cfg.music.coarse_r_step_lambda = 60.0;
  cfg.music.theta_step_deg = 5.0;
  cfg.music.export_spectrum = true;
  return cfg;
}

}  // namespace

TEST_CASE("substream ids keep distinct tag tuples distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t figure = 0; figure < 5; ++figure) {
    for (std::uint64_t param = 0; param < 5; ++param) {
      for (std::uint64_t trial = 0; trial < 10; ++trial) {
        for (std::uint64_t purpose = 0; purpose < 4; ++purpose) {
          seen.insert(substream_seed(1, stream_id(figure, param, trial, purpose)));
        }
      }
    }
  }
  CHECK(seen.size() == 5u * 5u * 10u * 4u);
}

TEST_CASE("master seeds decorrelate whole substream families") {
  CHECK(substream_seed(1, stream_id(0, 0, 0, 0)) != substream_seed(2, stream_id(0, 0, 0, 0)));
  CHECK(substream_seed(1, stream_id(0, 0, 1, 0)) != substream_seed(1, stream_id(0, 1, 0, 0)));
}

TEST_CASE("run pipeline outputs are reproducible and thread-invariant") {
  const ScenarioConfig cfg = tiny_run_config();

  const auto dir_a = fresh_dir("repro_a");
  run_figure(resolve(cfg, Figure::kRun), dir_a.string());

  const auto dir_b = fresh_dir("repro_b");
  run_figure(resolve(cfg, Figure::kRun), dir_b.string());

  ScenarioConfig threaded = cfg;
  threaded.threads = 4;
  const auto dir_c = fresh_dir("repro_threads");
  run_figure(resolve(threaded, Figure::kRun), dir_c.string());

  const std::string trials_a = read_file(dir_a / "run_trials.csv");
  CHECK(trials_a == read_file(dir_b / "run_trials.csv"));
  CHECK(trials_a == read_file(dir_c / "run_trials.csv"));

  const std::string spectrum_a = read_file(dir_a / "run_spectrum.csv");
  CHECK(spectrum_a == read_file(dir_b / "run_spectrum.csv"));
  CHECK(spectrum_a == read_file(dir_c / "run_spectrum.csv"));

  SUBCASE("config echo leads every CSV and parses as one JSON object") {
    std::istringstream lines(trials_a);
    std::string first;
    std::getline(lines, first);
    REQUIRE(first.rfind("# config ", 0) == 0);
    const json echoed = json::parse(first.substr(9));
    CHECK(echoed.at("trials").get<long long>() == 2);
    CHECK(echoed.at("seed").get<std::uint64_t>() == cfg.seed);
    CHECK(echoed.at("antennas").at("count").get<int>() == 16);
    CHECK(!echoed.contains("threads"));

    std::string header;
    std::getline(lines, header);
    CHECK(header == "trial,strategy,sum_se");
  }

  SUBCASE("summary lists every strategy with finite statistics") {
    const json summary = json::parse(read_file(dir_a / "run_summary.json"));
    const json& point = summary.at("point");
    REQUIRE(point.contains("strategies"));
    CHECK(point.at("strategies").size() == cfg.strategies.size());
    for (const auto& entry : point.at("strategies")) {
      CHECK(std::isfinite(entry.at("mean_sum_se").get<double>()));
      CHECK(entry.at("trials").get<long long>() == 2);
    }
  }

  SUBCASE("a different seed changes the trial data") {
    ScenarioConfig reseeded = cfg;
    reseeded.seed = cfg.seed + 1;
    const auto dir_d = fresh_dir("repro_seed");
    run_figure(resolve(reseeded, Figure::kRun), dir_d.string());
    CHECK(trials_a != read_file(dir_d / "run_trials.csv"));
  }
}

TEST_CASE("per-trial draws do not depend on the trial batch") {
  // Running one trial must reproduce the first row of a two-trial run, since
  // every trial derives its streams from (seed, trial) alone.
  ScenarioConfig two = tiny_run_config();
  ScenarioConfig one = two;
  one.trials = 1;

  const auto dir_two = fresh_dir("batch_two");
  run_figure(resolve(two, Figure::kRun), dir_two.string());
  const auto dir_one = fresh_dir("batch_one");
  run_figure(resolve(one, Figure::kRun), dir_one.string());

  auto rows = [](const std::string& text) {
    std::vector<std::string> out;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line[0] != '#') {
        out.push_back(line);
      }
    }
    return out;
  };
  const auto rows_two = rows(read_file(dir_two / "run_trials.csv"));
  const auto rows_one = rows(read_file(dir_one / "run_trials.csv"));
  // Header plus one row per strategy per trial, trial-major.
  const std::size_t per_trial = two.strategies.size();
  REQUIRE(rows_one.size() == 1 + per_trial);
  REQUIRE(rows_two.size() == 1 + 2 * per_trial);
  for (std::size_t i = 0; i < rows_one.size(); ++i) {
    CHECK(rows_one[i] == rows_two[i]);
  }
}

TEST_CASE("first-figure estimator run writes samples and a gamma summary") {
  ScenarioConfig cfg = figure_preset(Figure::kFig1);
  cfg.trials = 300;
  cfg.threads = 1;
  const auto dir = fresh_dir("fig1");
  run_figure(resolve(cfg, Figure::kFig1), dir.string());

  const std::string samples = read_file(dir / "fig1_samples.csv");
  std::istringstream lines(samples);
  std::string first;
  std::getline(lines, first);
  CHECK(first.rfind("# config ", 0) == 0);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "sample_r_over_lambda");

  const json summary = json::parse(read_file(dir / "fig1_summary.json"));
  CHECK(summary.at("wrap_index_lower_bound").get<int>() == 8);
  CHECK(summary.at("trials").get<long long>() == 300);
  CHECK(summary.at("valid_samples").get<long long>() >= 2);
  CHECK(summary.at("selected_at_lower_bound").get<long long>() >= 0);
  CHECK(std::isfinite(summary.at("gamma_shape").get<double>()));
  CHECK(std::isfinite(summary.at("gamma_scale").get<double>()));
}

TEST_CASE("unwritable output locations raise a configuration error") {
  const auto blocker = fresh_dir("blocker");
  std::filesystem::create_directories(blocker.parent_path());
  std::ofstream(blocker).put('x');  // a file where the directory should go
  const ScenarioConfig cfg = tiny_run_config();
  CHECK_THROWS_AS(run_figure(resolve(cfg, Figure::kRun), (blocker / "sub").string()),
                  ConfigError);
}
