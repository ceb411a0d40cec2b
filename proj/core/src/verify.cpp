#include "stagavg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stagavg/analysis.hpp"
#include "stagavg/errors.hpp"
#include "stagavg/format.hpp"
#include "stagavg/problems.hpp"

namespace stagavg {
namespace {

constexpr double kStepSlack = 1e-9;
constexpr double kDriftStderr = 4.0;
constexpr double kConcentrationStderr = 5.0;
constexpr double kBoundStderr = 4.0;

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    const double n = static_cast<double>(xs.size());
    m.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

// Constants common to the polyhedral and general analyses.
struct TheoryConstants {
  double sharpness = 0.0;  // L_P or η(S)
  double radius = 0.0;     // α·B_P or B_G(α, S)
  double r_over_alpha = 0.0;
  double rho = 0.0;
  double one_minus_rho = 0.0;
  double d = 0.0;
  double u = 0.0;
  std::uint64_t transient = 0;
  std::string label;
};

TheoryConstants theory_constants(const Problem& p, double alpha, std::optional<double> s,
                                 double dist0) {
  TheoryConstants c;
  const double g = p.g_bound();
  if (const auto* poly = std::get_if<PolyhedralInfo>(&p.structure())) {
    const auto pc = polyhedral_constants(g, poly->l_p);
    c.sharpness = poly->l_p;
    c.radius = alpha * pc.b_p;
    c.r_over_alpha = pc.r_p / alpha;
    c.rho = pc.rho_p;
    c.one_minus_rho = pc.one_minus_rho_p;
    c.d = pc.d_p;
    c.u = pc.u_p;
    c.transient = transient_time_poly(alpha, pc, dist0);
    c.label = "P";
  } else {
    if (!s) throw InvalidArgument("problem '" + p.name() + "' is not polyhedral; S is required");
    const auto& gen = std::get<GeneralInfo>(p.structure());
    const double eta = gen.eta(*s);
    const auto gc = general_constants(g, eta, alpha, *s);
    c.sharpness = eta;
    c.radius = gc.b_g;
    c.r_over_alpha = gc.r_g / alpha;
    c.rho = gc.rho_g;
    c.one_minus_rho = gc.one_minus_rho_g;
    c.d = gc.d_g;
    c.u = gc.u_g;
    c.transient = transient_time_general(alpha, gc, dist0);
    c.label = "G";
  }
  return c;
}

CheckReport make_report(std::string name, bool ok, double observed, double threshold,
                        std::uint64_t samples, std::string detail) {
  CheckReport r;
  r.name = std::move(name);
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  r.observed = observed;
  r.threshold = threshold;
  r.samples = samples;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "true";
    case Verdict::fail: return "false";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_line(const CheckReport& r) {
  return r.name + ',' + std::string(to_string(r.verdict)) + ',' + format_real(r.observed) + ',' +
         format_real(r.threshold) + ',' + std::to_string(r.samples);
}

CheckReport check_lemma2(const Problem& p, const AlgorithmConfig& cfg, RandomSource& src) {
  const double g = p.g_bound();
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_jump = 0.0;
  std::uint64_t steps = 0;
  run(p, cfg, src, {}, [&](const StepEvent& e) {
    const double jump = std::abs(p.dist_to_opt(e.next) - p.dist_to_opt(e.w));
    worst_jump = std::max(worst_jump, jump);
    worst_excess = std::max(worst_excess, jump - 2.0 * e.alpha * g);
    ++steps;
  });
  std::ostringstream detail;
  detail << "max |K_{t+1} - K_t| = " << format_real(worst_jump)
         << ", 2*alpha_0*G = " << format_real(2.0 * step_size(cfg, 0) * g) << " over " << steps
         << " steps";
  return make_report("lemma2/" + p.name(), worst_excess <= kStepSlack, worst_excess,
                     kStepSlack, steps, detail.str());
}

CheckReport check_drift(const Problem& p, double alpha, const Point& w, std::uint64_t n,
                        RandomSource& src, std::optional<double> s) {
  if (!(alpha > 0.0)) throw InvalidArgument("check_drift: alpha must be positive");
  const bool det = p.is_deterministic();
  if (n < (det ? 1u : 1000u)) {
    throw InvalidArgument("check_drift: need n >= 1000 samples (n >= 1 for exact oracles)");
  }
  if (!p.is_feasible(w)) throw InvalidArgument("check_drift: w is not feasible");
  const auto c = theory_constants(p, alpha, s, 0.0);
  const double k = p.dist_to_opt(w);
  if (!(k >= c.radius) || k == 0.0) {
    throw InvalidArgument("check_drift: dist(w, W*) = " + format_real(k) +
                          " is below the required radius " + format_real(c.radius));
  }
  std::vector<double> next(n);
  Point g(p.dim());
  Point stepped(p.dim());
  for (std::uint64_t i = 0; i < n; ++i) {
    p.stoch_subgradient_into(w.coords(), src, g.coords());
    for (std::size_t j = 0; j < p.dim(); ++j) stepped[j] = w[j] - alpha * g[j];
    p.project_in_place(stepped.coords());
    next[i] = p.dist_to_opt(stepped);
  }
  const auto m = moments(next);
  const double threshold = k - alpha * c.sharpness / 2.0 + kDriftStderr * m.stderr_;
  std::ostringstream detail;
  detail << "K = " << format_real(k) << ", E[K'] ~ " << format_real(m.mean) << " +- "
         << format_real(m.stderr_) << ", required decrease alpha*L/2 = "
         << format_real(alpha * c.sharpness / 2.0) << ", radius " << format_real(c.radius);
  return make_report("drift/" + p.name(), m.mean <= threshold, m.mean, threshold, n,
                     detail.str());
}

CheckReport check_concentration(const Problem& p, double alpha, std::uint64_t trials,
                                std::uint64_t rounds, RandomSource& src,
                                const ConcentrationOptions& options) {
  if (trials < 100) throw InvalidArgument("check_concentration: need trials >= 100");
  if (rounds < 1) throw InvalidArgument("check_concentration: need rounds >= 1");
  const Point w0 = options.w0 ? *options.w0 : p.default_start();
  const double k0 = p.dist_to_opt(w0);
  const auto c = theory_constants(p, alpha, options.s, k0);

  std::vector<std::uint64_t> sample_at = options.sample_at;
  if (sample_at.empty()) {
    sample_at.push_back(0);
    for (std::uint64_t t = 1; t < rounds; t *= 2) sample_at.push_back(t);
    if (c.transient < rounds) sample_at.push_back(c.transient);
    sample_at.push_back(rounds - 1);
  }
  std::sort(sample_at.begin(), sample_at.end());
  sample_at.erase(std::unique(sample_at.begin(), sample_at.end()), sample_at.end());

  AlgorithmConfig cfg;
  cfg.variant = Variant::constant_last_iterate;
  cfg.alpha = alpha;
  cfg.horizon = rounds;
  cfg.w0 = w0;

  const std::uint64_t base_seed = src();
  std::vector<std::vector<double>> dists(sample_at.size(), std::vector<double>(trials));
  for (std::uint64_t i = 0; i < trials; ++i) {
    RandomSource trial_src = make_stream(base_seed, i);
    const auto trace = run(p, cfg, trial_src, sample_at);
    for (std::size_t j = 0; j < sample_at.size(); ++j) dists[j][i] = trace.samples[j].dist;
  }

  std::ostringstream detail;
  const double x0 = c.r_over_alpha * k0;
  double worst_ratio = 0.0;
  double worst_k2_ratio = 0.0;
  bool ok = true;
  bool overflow = x0 > kExpGuard || !std::isfinite(c.d);
  std::uint64_t post_transient = 0;

  for (std::size_t j = 0; j < sample_at.size() && !overflow; ++j) {
    const std::uint64_t t = sample_at[j];
    std::vector<double> moment(trials), squared(trials);
    double max_x = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      const double x = c.r_over_alpha * dists[j][i];
      max_x = std::max(max_x, x);
      moment[i] = std::exp(x);
      squared[i] = dists[j][i] * dists[j][i];
    }
    if (max_x > kExpGuard) {
      // log-mean-exp for the diagnostic only
      double lme = 0.0;
      for (std::uint64_t i = 0; i < trials; ++i) {
        lme += std::exp(c.r_over_alpha * dists[j][i] - max_x);
      }
      detail << "overflow at t=" << t << ": log E[e^{rK/alpha}] ~ "
             << format_real(max_x + std::log(lme / static_cast<double>(trials))) << "; ";
      overflow = true;
      break;
    }
    const auto m = moments(moment);
    const double envelope =
        c.d + std::exp(x0 + static_cast<double>(t) * std::log1p(-c.one_minus_rho));
    const double limit = envelope + kConcentrationStderr * m.stderr_;
    worst_ratio = std::max(worst_ratio, m.mean / limit);
    if (m.mean > limit) {
      ok = false;
      detail << "envelope violated at t=" << t << " (" << format_real(m.mean) << " > "
             << format_real(limit) << "); ";
    }
    if (t >= c.transient) {
      ++post_transient;
      const auto k2 = moments(squared);
      const double k2_limit = alpha * alpha * c.u + kConcentrationStderr * k2.stderr_;
      const double ratio = k2.mean / k2_limit;
      worst_k2_ratio = std::max(worst_k2_ratio, ratio);
      if (k2.mean > k2_limit) {
        ok = false;
        detail << "E[K^2] bound violated at t=" << t << "; ";
      }
    }
  }

  CheckReport r = make_report("concentration/" + p.name(), ok, std::max(worst_ratio, worst_k2_ratio),
                              1.0, trials, "");
  if (overflow) r.verdict = Verdict::inconclusive;
  detail << "T_" << c.label << " = " << c.transient << ", D = " << format_real(c.d)
         << ", alpha^2 U = " << format_real(alpha * alpha * c.u)
         << ", max envelope ratio = " << format_real(worst_ratio)
         << ", max E[K^2]/(alpha^2 U) ratio = " << format_real(worst_k2_ratio) << " over "
         << post_transient << " post-transient rounds";
  if (worst_k2_ratio > 0.5) detail << "; NOTE: E[K^2] bound is nearly tight, investigate";
  r.detail = detail.str();
  return r;
}

CheckReport check_theorem_bound(const Summary& summary, const Problem& p, double alpha,
                                const TheoremBoundOptions& options) {
  const double dist0 = options.dist0.value_or(p.dist_to_opt(p.default_start()));
  const auto c = theory_constants(p, alpha, options.s, dist0);
  const double g = p.g_bound();
  const std::string name =
      std::string("bound/") + p.name() + "/" + std::string(to_string(options.variant));

  std::uint64_t checked = 0;
  double worst = 0.0;
  bool ok = true;
  std::ostringstream detail;
  for (const auto& row : summary.rows_for(options.variant)) {
    // t = 2^{k+1} − 2 closes the block that started at 2^k − 1.
    if (!is_restart_round(row.t + 1) || row.t == 0) continue;
    const std::uint64_t block_len = (row.t + 2) / 2;
    const std::uint64_t block_start = block_len - 1;
    if (block_start < c.transient) continue;
    ++checked;
    const double limit = gap_bound(alpha, block_len, g, c.u) + kBoundStderr * row.stderr_gap;
    worst = std::max(worst, row.mean_gap / limit);
    if (!(row.mean_gap <= limit)) {
      ok = false;
      detail << "t=" << row.t << ": " << format_real(row.mean_gap) << " > "
             << format_real(limit) << "; ";
    }
  }
  const unsigned k_hat = first_post_transient_block(c.transient);
  detail << "T_" << c.label << " = " << c.transient << ", floor alpha*G^2/2 = "
         << format_real(alpha * g * g / 2.0) << ", U = " << format_real(c.u) << ", "
         << checked << " post-transient rounds";
  CheckReport r = make_report(name, ok, worst, 1.0, checked, detail.str());
  if (checked == 0) {
    r.verdict = Verdict::inconclusive;
    r.detail += "; first post-transient block starts at 2^" + std::to_string(k_hat) +
                " - 1, sampled when k_max >= " + std::to_string(k_hat + 1);
  }
  return r;
}

CheckReport check_frame_doubling(const Problem& p, const FrameDoublingConfig& fd) {
  const auto result = frame_doubling_run(p, fd);
  const Problem det = p.deterministic();
  bool ok = true;
  double worst = 0.0;
  std::ostringstream detail;
  for (std::size_t i = 0; i < result.per_frame_dists.size(); ++i) {
    // frame index i + 1: bound θ·2^{−i}
    const double bound = std::ldexp(fd.theta, -static_cast<int>(i));
    worst = std::max(worst, result.per_frame_dists[i] / bound);
    if (!(result.per_frame_dists[i] <= bound)) {
      ok = false;
      detail << "frame " << i + 1 << ": " << format_real(result.per_frame_dists[i]) << " > "
             << format_real(bound) << "; ";
    }
  }
  const double gap = det.objective(result.final_point) - det.f_star();
  const double gap_limit = std::ldexp(fd.theta * fd.lipschitz_h, -static_cast<int>(fd.frames));
  worst = std::max(worst, gap / gap_limit);
  if (!(gap <= gap_limit)) {
    ok = false;
    detail << "final gap " << format_real(gap) << " > " << format_real(gap_limit) << "; ";
  }
  detail << "theta = " << format_real(fd.theta) << ", frame_len = " << fd.frame_len
         << ", rounds = " << result.rounds << ", final dist = "
         << format_real(result.per_frame_dists.back());
  return make_report("frame/" + p.name(), ok, worst, 1.0, result.rounds, detail.str());
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> run_suite(std::string_view suite, std::uint64_t seed) {
  std::vector<CheckReport> out;
  std::uint64_t stream = 0;
  auto next_src = [&] { return make_stream(seed, stream++); };

  if (suite == "lemma2") {
    auto lemma2 = [&](const Problem& p, double alpha, std::uint64_t horizon) {
      AlgorithmConfig cfg;
      cfg.alpha = alpha;
      cfg.horizon = horizon;
      auto src = next_src();
      out.push_back(check_lemma2(p, cfg, src));
    };
    lemma2(make_l1(100, 4.0), 1e-4, 100000);
    lemma2(make_deadzone(100, 4.0, 1e-6), 1e-3, 20000);
    lemma2(make_asymmetric(100, 4.0), 1e-3, 20000);
  } else if (suite == "drift") {
    auto drift = [&](const Problem& p, double alpha, double w, std::uint64_t n,
                     std::optional<double> s = std::nullopt) {
      auto src = next_src();
      auto r = check_drift(p, alpha, Point{w}, n, src, s);
      r.name += (p.is_deterministic() ? "/exact@w=" : "@w=") + format_real(w);
      out.push_back(std::move(r));
    };
    drift(make_l1(1, 4.0), 0.01, 2.0, 100000);
    drift(make_l1(1, 4.0).deterministic(), 0.01, 2.0, 1);
    drift(make_deadzone(1, 4.0, 1e-6), 0.01, -2.0, 100000);
    drift(make_asymmetric(1, 4.0), 0.01, 2.0, 100000, 0.5);
    drift(make_asymmetric(1, 4.0), 0.01, -2.0, 100000, 0.5);
  } else if (suite == "concentration") {
    auto conc = [&](const Problem& p, double alpha, std::uint64_t rounds,
                    ConcentrationOptions opts = {}) {
      auto src = next_src();
      auto r = check_concentration(p, alpha, 200, rounds, src, opts);
      if (opts.w0) r.name += "@K0=" + format_real(p.dist_to_opt(*opts.w0));
      out.push_back(std::move(r));
    };
    conc(make_l1(1, 4.0), 0.1, 400);
    conc(make_deadzone(1, 4.0, 1e-6), 0.1, 400);
    ConcentrationOptions at_opt;
    at_opt.w0 = Point{0.0};
    conc(make_l1(1, 4.0), 0.1, 400, at_opt);
    ConcentrationOptions general;
    general.s = 0.5;
    conc(make_asymmetric(1, 4.0), 0.1, 800, general);
  } else if (suite == "bounds") {
    auto bound = [&](const Problem& p, double alpha, unsigned k_max, std::optional<double> s) {
      ExperimentConfig cfg;
      cfg.trials = 10;
      cfg.seed = seed ^ (0x9E3779B97F4A7C15ull * ++stream);
      cfg.k_max = k_max;
      cfg.variants = make_variants({"staggered"}, alpha, 1.0, 3, k_max);
      const auto summary = run_experiment(p, cfg);
      TheoremBoundOptions opts;
      opts.s = s;
      out.push_back(check_theorem_bound(summary, p, alpha, opts));
    };
    bound(make_l1(1, 4.0), 0.01, 13, std::nullopt);
    bound(make_deadzone(1, 4.0, 1e-6), 0.01, 13, std::nullopt);
    bound(make_asymmetric(1, 4.0), 0.01, 14, 0.5);
  } else if (suite == "frame") {
    auto frame = [&](const Problem& p, std::uint64_t m, double h) {
      const Problem det = p.deterministic();
      const double z = det.dist_to_opt(det.default_start());
      out.push_back(check_frame_doubling(det, make_frame_doubling_config(det, m, z, h)));
    };
    frame(make_l1(1, 4.0), 10, 1.0);
    frame(make_deadzone(1, 4.0, 1e-6), 10, 1.0);
    frame(make_l1(10, 4.0), 8, std::sqrt(10.0));
  } else {
    throw InvalidArgument("unknown verify suite '" + std::string(suite) +
                          "' (expected drift, lemma2, concentration, bounds or frame)");
  }
  return out;
}

}  // namespace stagavg
