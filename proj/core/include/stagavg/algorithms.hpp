#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stagavg/point.hpp"
#include "stagavg/problem.hpp"
#include "stagavg/random.hpp"

namespace stagavg {

enum class Variant {
  staggered,             ///< constant step, block averages restarted at 2^k − 1
  constant_last_iterate, ///< constant step, reports w_t itself
  heuristic,             ///< step max(α, c/(t+1)), staggered block averages
  polynomial_decay,      ///< constant step, polynomial-decay average
};

inline constexpr Variant kAllVariants[] = {Variant::staggered, Variant::constant_last_iterate,
                                           Variant::heuristic, Variant::polynomial_decay};

/// CLI / CSV name: staggered, constant, heuristic, polynomial.
std::string_view to_string(Variant v) noexcept;
/// Throws InvalidArgument on unknown names.
Variant parse_variant(std::string_view name);

struct AlgorithmConfig {
  Variant variant = Variant::staggered;
  double alpha = 1e-4;
  double heuristic_c = 1.0;         ///< heuristic only
  std::uint64_t decay_eta = 3;      ///< polynomial_decay only
  std::uint64_t horizon = 1;        ///< total rounds (= oracle calls)
  std::optional<Point> w0;          ///< defaults to Problem::default_start()
};

/// Throws InvalidArgument when a field is out of range.
void validate(const AlgorithmConfig& cfg);

/// Running block average of the staggered estimator.
/// After absorbing w_t: count = t − 2^k + 2.
struct AveragerState {
  unsigned k = 0;
  Point avg;
  std::uint64_t count = 0;  ///< 0 means nothing absorbed yet
};

/// One sampled diagnostic record of a run.
struct TraceSample {
  std::uint64_t t = 0;
  double gap_estimate = 0.0;  ///< F(estimator) − F*
  double gap_iterate = 0.0;   ///< F(w_t) − F*
  double dist = 0.0;          ///< ‖w_t − w_t*‖
};

struct Trace {
  std::vector<TraceSample> samples;
  std::uint64_t oracle_calls = 0;
};

/// Seen by a run observer after every step w_t → w_{t+1}.
struct StepEvent {
  std::uint64_t t;
  std::span<const double> w;
  std::span<const double> next;
  double alpha;
  double sample_norm;
};
using StepObserver = std::function<void(const StepEvent&)>;

/// Π_W[w − α·ĝ].
Point subgradient_step(const Problem& p, const Point& w, double alpha,
                       const SubgradientSample& sample);

inline bool is_restart_round(std::uint64_t t) noexcept { return ((t + 1) & t) == 0; }

/// All t < horizon of the form 2^k − 1, ascending.
std::vector<std::uint64_t> restart_indices(std::uint64_t horizon);

/// Folds w_t into the block average, or restarts the block when t = 2^k − 1.
/// Throws ContractViolation unless t immediately follows the last absorbed
/// round (or is a restart round).
AveragerState averager_update(AveragerState state, std::uint64_t t, const Point& w_t);
void averager_absorb(AveragerState& state, std::uint64_t t, std::span<const double> w_t);

double step_size(const AlgorithmConfig& cfg, std::uint64_t t) noexcept;

/// Polynomial-decay average for t ≥ 1:
///   avg ← (1 − (η+1)/(t+η+1))·avg + ((η+1)/(t+η+1))·w_t.
/// At t = 0 the average is w_0.
Point polynomial_decay_update(const Point& avg, std::uint64_t t, const Point& w_t,
                              std::uint64_t decay_eta);

/// Runs `cfg.horizon` rounds of the projected stochastic subgradient method
/// and records diagnostics at each round in `sample_at` (strictly increasing,
/// all < horizon). The estimator is sampled after absorbing w_t.
///
/// Throws InvalidArgument for an infeasible start or a bad schedule, and
/// NumericFailure if a non-finite value appears.
Trace run(const Problem& p, const AlgorithmConfig& cfg, RandomSource& src,
          std::span<const std::uint64_t> sample_at, const StepObserver& observer = {});

// ---------------------------------------------------------------------------
// Deterministic frame doubling.

struct FrameDoublingConfig {
  std::uint64_t frames = 1;        ///< M
  double z = 1.0;                  ///< known bound on ‖w_0 − w_0*‖
  double theta = 1.0;              ///< max(√U_P, Z)
  std::uint64_t frame_len = 1;     ///< rounds per frame
  double lipschitz_h = 1.0;        ///< H
  std::optional<Point> w0;
};

struct FrameDoublingResult {
  Point final_point;                 ///< w_[M+1]
  std::vector<double> per_frame_dists; ///< ‖w_[i] − w_[i]*‖ for i = 1..M+1
  std::uint64_t rounds = 0;
};

/// Derives θ and the frame length from the polyhedral constants of the
/// deterministic view of `p`. Throws UnsupportedMode if `p` is not polyhedral
/// or lacks an exact oracle.
FrameDoublingConfig make_frame_doubling_config(const Problem& p, std::uint64_t frames, double z,
                                               double lipschitz_h,
                                               std::optional<Point> w0 = std::nullopt);

/// Frame i = 1..M runs `frame_len` rounds with step 2^{−i} from the last
/// iterate of the previous frame, using the exact subgradient.
FrameDoublingResult frame_doubling_run(const Problem& p, const FrameDoublingConfig& fd);

}  // namespace stagavg
