#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stagavg/errors.hpp"
#include "stagavg/harness.hpp"

using namespace stagavg;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.problem.name = "l1";
  cfg.problem.dim = 3;
  cfg.trials = 4;
  cfg.seed = 11;
  cfg.k_max = 8;
  cfg.variants = make_variants({"staggered", "constant", "heuristic", "polynomial"}, 0.01, 1.0,
                               3, cfg.k_max);
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sampling schedule") {
  CHECK(sampling_schedule(4) == std::vector<std::uint64_t>{0, 2, 6, 14});
  CHECK(sampling_schedule(1) == std::vector<std::uint64_t>{0});
}

TEST_CASE("stream ids depend on variant kind and trial") {
  CHECK(trial_stream_id(Variant::staggered, 0) != trial_stream_id(Variant::heuristic, 0));
  CHECK(trial_stream_id(Variant::staggered, 0) != trial_stream_id(Variant::staggered, 1));
}

TEST_CASE("experiment summary shape and determinism") {
  const auto cfg = small_config();
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  CHECK(a.rows.size() == 4 * 8);
  CHECK(a.trials == 4);
  for (auto calls : a.oracle_calls_per_trial) CHECK(calls == 255);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(a.rows.front().variant == Variant::staggered);
  CHECK(a.rows.back().variant == Variant::polynomial_decay);
  CHECK(a.rows_for(Variant::heuristic).size() == 8);
}

TEST_CASE("thread count does not change the result") {
  auto cfg = small_config();
  cfg.threads = 1;
  const auto one = to_csv(run_experiment(cfg));
  cfg.threads = 3;
  CHECK(to_csv(run_experiment(cfg)) == one);
}

TEST_CASE("variant order in the config does not matter") {
  auto cfg = small_config();
  const auto forward = to_csv(run_experiment(cfg));
  std::reverse(cfg.variants.begin(), cfg.variants.end());
  CHECK(to_csv(run_experiment(cfg)) == forward);
}

TEST_CASE("single trial has zero stderr and equals the trace") {
  auto cfg = small_config();
  cfg.trials = 1;
  const auto s = run_experiment(cfg);
  for (const auto& row : s.rows) CHECK(row.stderr_gap == 0.0);

  const auto p = make_problem(cfg.problem);
  RandomSource src(cfg.seed, trial_stream_id(Variant::staggered, 0));
  const auto sched = sampling_schedule(cfg.k_max);
  const auto trace = run(p, cfg.variants[0], src, sched);
  const auto rows = s.rows_for(Variant::staggered);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].mean_gap == trace.samples[i].gap_estimate);
    CHECK(rows[i].mean_dist == trace.samples[i].dist);
  }
}

TEST_CASE("w0 override") {
  auto cfg = small_config();
  cfg.w0_fill = 0.0;
  const auto s = run_experiment(cfg);
  CHECK(s.rows.front().mean_gap == 0.0);
  cfg.w0_fill = 10.0;
  CHECK_THROWS_AS(run_experiment(cfg), InvalidArgument);
}

TEST_CASE("config validation") {
  auto cfg = small_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg = small_config();
  cfg.variants.push_back(cfg.variants.front());
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg = small_config();
  cfg.k_max = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  CHECK_THROWS_AS(make_variants({"bogus"}, 0.1, 1.0, 3, 4), InvalidArgument);
}

TEST_CASE("csv format") {
  Summary empty;
  CHECK(to_csv(empty) == "variant,t,mean_gap,stderr_gap,mean_dist\n");
  Summary one;
  one.rows.push_back({Variant::polynomial_decay, 6, 0.1, 0.0, 2.5});
  CHECK(to_csv(one) ==
        "variant,t,mean_gap,stderr_gap,mean_dist\n"
        "polynomial,6,0.10000000000000001,0,2.5\n");
}

TEST_CASE("write_csv and plot script") {
  const auto dir = std::filesystem::temp_directory_path() / "stagavg_unit_harness";
  std::filesystem::create_directories(dir);
  const auto csv = dir / "out.csv";
  const auto s = run_experiment(small_config());
  write_csv(s, csv.string());
  CHECK(slurp(csv) == to_csv(s));

  const auto script = dir / "plot.py";
  emit_plot_script(csv.string(), script.string());
  const auto text = slurp(script);
  CHECK(text.find("set_xscale(\"log\")") != std::string::npos);
  CHECK(text.find("set_yscale(\"log\")") != std::string::npos);

  CHECK_THROWS_AS(write_csv(s, (dir / "missing" / "x.csv").string()), IoError);
  CHECK_THROWS_AS(emit_plot_script((dir / "absent.csv").string(), script.string()), IoError);
  std::filesystem::remove_all(dir);
}
