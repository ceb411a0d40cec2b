#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "stagavg/errors.hpp"
#include "stagavg/problems.hpp"
#include "stagavg/verify.hpp"

using namespace stagavg;

TEST_CASE("report lines") {
  CheckReport r;
  r.name = "x";
  r.verdict = Verdict::pass;
  r.observed = 0.5;
  r.threshold = 1.0;
  r.samples = 3;
  CHECK(to_line(r) == "x,true,0.5,1,3");
  r.verdict = Verdict::inconclusive;
  CHECK(to_line(r) == "x,inconclusive,0.5,1,3");
  CHECK_FALSE(r.passed());
}

TEST_CASE("lemma2 on l1 and a dead-zone interior start") {
  AlgorithmConfig cfg;
  cfg.alpha = 1e-3;
  cfg.horizon = 5000;
  RandomSource src(1, 0);
  const auto r = check_lemma2(make_l1(10, 4.0), cfg, src);
  CHECK(r.passed());
  CHECK(r.samples == 5000);
  CHECK(r.observed <= 0.0);

  // Dead zone of width 1 and a noiseless exact oracle: nothing moves.
  const auto dz = make_deadzone(2, 4.0, 1.0).deterministic();
  cfg.w0 = Point{0.25, -0.25};
  const auto still = check_lemma2(dz, cfg, src);
  CHECK(still.passed());
  CHECK(still.observed == doctest::Approx(-2.0 * 1e-3 * dz.g_bound()));
}

TEST_CASE("drift") {
  RandomSource src(2, 0);
  CHECK(check_drift(make_l1(1, 4.0), 0.01, Point{2.0}, 20000, src).passed());
  const auto exact = check_drift(make_l1(1, 4.0).deterministic(), 0.01, Point{2.0}, 1, src);
  CHECK(exact.passed());
  CHECK(exact.observed == doctest::Approx(1.99));
  CHECK(check_drift(make_asymmetric(1, 4.0), 0.01, Point{-2.0}, 20000, src, 0.5).passed());
  CHECK_THROWS_AS(check_drift(make_l1(1, 4.0), 0.01, Point{0.0}, 20000, src), InvalidArgument);
  CHECK_THROWS_AS(check_drift(make_l1(1, 4.0), 0.01, Point{2.0}, 10, src), InvalidArgument);
  CHECK_THROWS_AS(check_drift(make_asymmetric(1, 4.0), 0.01, Point{2.0}, 2000, src),
                  InvalidArgument);
  // B_G(0.01, 0.5) = 1.62 > 1
  CHECK_THROWS_AS(check_drift(make_asymmetric(1, 4.0), 0.01, Point{1.0}, 2000, src, 0.5),
                  InvalidArgument);
}

TEST_CASE("concentration") {
  RandomSource src(3, 0);
  const auto r = check_concentration(make_l1(1, 4.0), 0.1, 100, 300, src);
  CHECK(r.passed());
  CHECK(r.observed < 1.0);
  CHECK_THROWS_AS(check_concentration(make_l1(1, 4.0), 0.1, 10, 300, src), InvalidArgument);

  // A tiny step makes r·K0/α astronomically large.
  const auto big = check_concentration(make_l1(1, 4.0), 1e-4, 100, 10, src);
  CHECK(big.verdict == Verdict::inconclusive);
}

TEST_CASE("theorem bound needs post-transient samples") {
  ExperimentConfig cfg;
  cfg.problem.dim = 1;
  cfg.trials = 3;
  cfg.k_max = 6;
  cfg.variants = make_variants({"staggered"}, 0.01, 1.0, 3, cfg.k_max);
  const auto p = make_problem(cfg.problem);
  const auto s = run_experiment(p, cfg);
  const auto r = check_theorem_bound(s, p, 0.01);
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK(r.detail.find("k_max >= 12") != std::string::npos);
}

TEST_CASE("frame doubling check") {
  const auto p = make_l1(1, 4.0).deterministic();
  CHECK(check_frame_doubling(p, make_frame_doubling_config(p, 10, 4.0, 1.0)).passed());
  CHECK(check_frame_doubling(p, make_frame_doubling_config(p, 0, 4.0, 1.0)).passed());
  const auto noisy_only =
      ProblemBuilder("noisy", 1)
          .objective([](const Point& w) { return std::abs(w[0]); })
          .projection([](const Point& x) { return Point{std::clamp(x[0], -4.0, 4.0)}; })
          .stoch_subgradient([](const Point& w, RandomSource& src) {
            return Point{(w[0] > 0 ? 1.0 : -1.0) * src.uniform(0.0, 2.0)};
          })
          .dist_to_opt([](const Point& w) { return std::abs(w[0]); })
          .f_star(0.0)
          .g_bound(2.0)
          .structure(PolyhedralInfo{1.0})
          .default_start(Point{4.0})
          .build();
  CHECK_THROWS_AS(check_frame_doubling(noisy_only, make_frame_doubling_config(p, 2, 4.0, 1.0)),
                  UnsupportedMode);
}

TEST_CASE("unknown suite") { CHECK_THROWS_AS(run_suite("everything", 1), InvalidArgument); }
