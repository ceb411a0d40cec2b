#include "stagavg/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "stagavg/analysis.hpp"
#include "stagavg/errors.hpp"

namespace stagavg {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::staggered: return "staggered";
    case Variant::constant_last_iterate: return "constant";
    case Variant::heuristic: return "heuristic";
    case Variant::polynomial_decay: return "polynomial";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw InvalidArgument("unknown variant '" + std::string(name) +
                        "' (expected staggered, constant, heuristic or polynomial)");
}

void validate(const AlgorithmConfig& cfg) {
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
    throw InvalidArgument("alpha must be positive and finite");
  }
  if (cfg.horizon < 1) throw InvalidArgument("horizon must be >= 1");
  if (cfg.variant == Variant::heuristic && (!(cfg.heuristic_c > 0.0) || !std::isfinite(cfg.heuristic_c))) {
    throw InvalidArgument("heuristic c must be positive and finite");
  }
  if (cfg.variant == Variant::polynomial_decay && cfg.decay_eta < 1) {
    throw InvalidArgument("decay eta must be >= 1");
  }
}

Point subgradient_step(const Problem& p, const Point& w, double alpha,
                       const SubgradientSample& sample) {
  require_same_dim(p.dim(), w.dim(), "subgradient_step");
  require_same_dim(p.dim(), sample.vector.dim(), "subgradient_step");
  Point next = w;
  for (std::size_t i = 0; i < next.dim(); ++i) next[i] -= alpha * sample.vector[i];
  p.project_in_place(next.coords());
  return next;
}

std::vector<std::uint64_t> restart_indices(std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (unsigned k = 0; k < 64; ++k) {
    const std::uint64_t t = (std::uint64_t{1} << k) - 1;
    if (t >= horizon) break;
    out.push_back(t);
  }
  return out;
}

void averager_absorb(AveragerState& state, std::uint64_t t, std::span<const double> w_t) {
  if (is_restart_round(t)) {
    state.k = static_cast<unsigned>(std::bit_width(t));  // t + 1 = 2^k
    state.avg = Point(std::vector<double>(w_t.begin(), w_t.end()));
    state.count = 1;
    return;
  }
  const std::uint64_t block_start = (std::uint64_t{1} << state.k) - 1;
  if (state.count == 0 || t != block_start + state.count) {
    throw ContractViolation("averager_update: round " + std::to_string(t) +
                            " does not follow the last absorbed round");
  }
  require_same_dim(state.avg.dim(), w_t.size(), "averager_update");
  // (t − 2^k + 1)/(t − 2^k + 2)·avg + 1/(t − 2^k + 2)·w_t
  const double n = static_cast<double>(state.count + 1);
  const double keep = static_cast<double>(state.count) / n;
  const double take = 1.0 / n;
  for (std::size_t i = 0; i < w_t.size(); ++i) {
    state.avg[i] = keep * state.avg[i] + take * w_t[i];
  }
  ++state.count;
}

AveragerState averager_update(AveragerState state, std::uint64_t t, const Point& w_t) {
  averager_absorb(state, t, w_t.coords());
  return state;
}

double step_size(const AlgorithmConfig& cfg, std::uint64_t t) noexcept {
  if (cfg.variant == Variant::heuristic) {
    return std::max(cfg.alpha, cfg.heuristic_c / (static_cast<double>(t) + 1.0));
  }
  return cfg.alpha;
}

namespace {

void decay_absorb(std::span<double> avg, std::uint64_t t, std::span<const double> w_t,
                  std::uint64_t decay_eta) {
  const double eta = static_cast<double>(decay_eta);
  const double take = (eta + 1.0) / (static_cast<double>(t) + eta + 1.0);
  const double keep = 1.0 - take;
  for (std::size_t i = 0; i < avg.size(); ++i) avg[i] = keep * avg[i] + take * w_t[i];
}

bool finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Point polynomial_decay_update(const Point& avg, std::uint64_t t, const Point& w_t,
                              std::uint64_t decay_eta) {
  if (t == 0) return w_t;
  require_same_dim(avg.dim(), w_t.dim(), "polynomial_decay_update");
  Point out = avg;
  decay_absorb(out.coords(), t, w_t.coords(), decay_eta);
  return out;
}

Trace run(const Problem& p, const AlgorithmConfig& cfg, RandomSource& src,
          std::span<const std::uint64_t> sample_at, const StepObserver& observer) {
  validate(cfg);
  const Point start = cfg.w0 ? *cfg.w0 : p.default_start();
  require_same_dim(p.dim(), start.dim(), "run: w0");
  if (!start.all_finite() || !p.is_feasible(start)) {
    throw InvalidArgument("run: w0 is not feasible for problem '" + p.name() + "'");
  }
  for (std::size_t i = 0; i < sample_at.size(); ++i) {
    if (sample_at[i] >= cfg.horizon || (i > 0 && sample_at[i] <= sample_at[i - 1])) {
      throw InvalidArgument("run: sample rounds must be strictly increasing and < horizon");
    }
  }

  const std::size_t n = p.dim();
  std::vector<double> w(start.coords().begin(), start.coords().end());
  std::vector<double> next(n), g(n);
  AveragerState block;
  std::vector<double> decayed;

  Trace trace;
  trace.samples.reserve(sample_at.size());
  std::size_t next_sample = 0;

  for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
    std::span<const double> estimate = w;
    switch (cfg.variant) {
      case Variant::staggered:
      case Variant::heuristic:
        averager_absorb(block, t, w);
        estimate = block.avg.coords();
        break;
      case Variant::polynomial_decay:
        if (t == 0) {
          decayed = w;
        } else {
          decay_absorb(decayed, t, w, cfg.decay_eta);
        }
        estimate = decayed;
        break;
      case Variant::constant_last_iterate:
        break;
    }

    if (next_sample < sample_at.size() && sample_at[next_sample] == t) {
      TraceSample s;
      s.t = t;
      s.gap_estimate = p.objective(estimate) - p.f_star();
      s.gap_iterate = p.objective(w) - p.f_star();
      s.dist = p.dist_to_opt(w);
      if (!std::isfinite(s.gap_estimate) || !std::isfinite(s.gap_iterate) ||
          !std::isfinite(s.dist)) {
        throw NumericFailure(t, "non-finite diagnostic");
      }
      trace.samples.push_back(s);
      ++next_sample;
    }

    const double alpha = step_size(cfg, t);
    p.stoch_subgradient_into(w, src, g);
    ++trace.oracle_calls;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = w[i] - alpha * g[i];
      sq += g[i] * g[i];
    }
    p.project_in_place(next);
    if (!finite(next)) throw NumericFailure(t, "non-finite iterate");
    if (observer) observer(StepEvent{t, w, next, alpha, std::sqrt(sq)});
    w.swap(next);
  }
  return trace;
}

// ---------------------------------------------------------------------------

FrameDoublingConfig make_frame_doubling_config(const Problem& p, std::uint64_t frames, double z,
                                               double lipschitz_h, std::optional<Point> w0) {
  const auto* poly = std::get_if<PolyhedralInfo>(&p.structure());
  if (!poly) {
    throw UnsupportedMode("frame doubling needs a polyhedral problem; '" + p.name() + "' is not");
  }
  const Problem det = p.deterministic();
  const auto params = frame_doubling_params(polyhedral_constants(det.g_bound(), poly->l_p), z);
  FrameDoublingConfig fd;
  fd.frames = frames;
  fd.z = z;
  fd.theta = params.theta;
  fd.frame_len = params.frame_len;
  fd.lipschitz_h = lipschitz_h;
  fd.w0 = std::move(w0);
  return fd;
}

FrameDoublingResult frame_doubling_run(const Problem& p, const FrameDoublingConfig& fd) {
  if (!p.has_deterministic_oracle()) {
    throw UnsupportedMode("frame doubling needs the exact subgradient; problem '" + p.name() +
                          "' is stochastic-only");
  }
  if (!(fd.z > 0.0) || !(fd.theta >= fd.z) || fd.frame_len < 1 || !(fd.lipschitz_h > 0.0)) {
    throw InvalidArgument("frame doubling: need z > 0, theta >= z, frame_len >= 1, H > 0");
  }
  if (fd.frames > 1000) throw InvalidArgument("frame doubling: too many frames");
  const Problem det = p.deterministic();
  const Point start = fd.w0 ? *fd.w0 : det.default_start();
  require_same_dim(det.dim(), start.dim(), "frame_doubling_run: w0");
  if (!det.is_feasible(start)) throw InvalidArgument("frame doubling: w0 is not feasible");
  if (det.dist_to_opt(start) > fd.z) {
    throw InvalidArgument("frame doubling: dist(w0, W*) exceeds Z");
  }

  const std::size_t n = det.dim();
  std::vector<double> w(start.coords().begin(), start.coords().end());
  std::vector<double> g(n);
  RandomSource unused(0, 0);

  FrameDoublingResult result;
  result.per_frame_dists.push_back(det.dist_to_opt(w));
  for (std::uint64_t i = 1; i <= fd.frames; ++i) {
    const double alpha = std::ldexp(1.0, -static_cast<int>(i));
    for (std::uint64_t r = 0; r < fd.frame_len; ++r) {
      det.stoch_subgradient_into(w, unused, g);
      for (std::size_t j = 0; j < n; ++j) w[j] -= alpha * g[j];
      det.project_in_place(w);
      if (!finite(w)) throw NumericFailure(result.rounds, "non-finite iterate in frame doubling");
      ++result.rounds;
    }
    result.per_frame_dists.push_back(det.dist_to_opt(w));
  }
  result.final_point = Point(std::move(w));
  return result;
}

}  // namespace stagavg
