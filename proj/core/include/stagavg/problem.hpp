#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stagavg/point.hpp"
#include "stagavg/random.hpp"

namespace stagavg {

/// F(w) − F* ≥ l_p · dist(w, W*) on the whole feasible set.
struct PolyhedralInfo {
  double l_p = 1.0;
};

/// Curvature profile η(S) for problems without a global sharpness constant.
/// `eta` throws InvalidArgument outside the range where it is known.
struct GeneralInfo {
  std::function<double(double)> eta;
  double s_max = std::numeric_limits<double>::infinity();
};

using Structure = std::variant<PolyhedralInfo, GeneralInfo>;

/// Convex objective over a closed convex set together with its oracles and
/// known optimum.
///
/// Immutable after construction and cheap to copy (shared state); safe to use
/// from concurrent trials since all randomness comes from the caller's
/// RandomSource.
class Problem {
 public:
  // In-place forms used by the hot loop.
  using ObjectiveFn = std::function<double(std::span<const double>)>;
  using ProjectFn = std::function<void(std::span<double>)>;
  using DetOracleFn = std::function<void(std::span<const double>, std::span<double>)>;
  using StochOracleFn =
      std::function<void(std::span<const double>, RandomSource&, std::span<double>)>;
  using DistFn = std::function<double(std::span<const double>)>;
  using SamplerFn = std::function<void(RandomSource&, std::span<double>)>;

  const std::string& name() const noexcept;
  std::size_t dim() const noexcept;

  double objective(const Point& w) const;
  double f_star() const noexcept;
  double dist_to_opt(const Point& w) const;
  double g_bound() const noexcept;
  const Structure& structure() const noexcept;
  bool is_polyhedral() const noexcept;

  Point project(const Point& x) const;
  bool is_feasible(const Point& w) const;

  bool has_deterministic_oracle() const noexcept;
  Point det_subgradient(const Point& w) const;
  SubgradientSample stoch_subgradient(const Point& w, RandomSource& src) const;

  /// True when the stochastic oracle is the exact subgradient.
  bool is_deterministic() const noexcept;
  /// Copy whose stochastic oracle returns the exact subgradient and whose
  /// g_bound is the deterministic bound. Throws UnsupportedMode if the problem
  /// has no deterministic oracle.
  Problem deterministic() const;

  /// Default start w_0 (the corner of the box for the built-in problems).
  Point default_start() const;
  /// Random feasible point, for Monte-Carlo validation.
  Point sample_feasible(RandomSource& src) const;

  // Allocation-free variants.
  double objective(std::span<const double> w) const;
  double dist_to_opt(std::span<const double> w) const;
  void project_in_place(std::span<double> x) const;
  void stoch_subgradient_into(std::span<const double> w, RandomSource& src,
                              std::span<double> out) const;

 private:
  friend class ProblemBuilder;
  struct Impl;
  explicit Problem(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Assembles a Problem from closures and declared constants.
///
///   auto p = ProblemBuilder("quad", 2)
///                .objective([](const Point& w) { ... })
///                .projection([](const Point& x) { ... })
///                ...
///                .build();
///
/// objective, projection, dist_to_opt, g_bound, structure and at least one
/// oracle are required. When only the deterministic oracle is given the
/// problem is deterministic.
class ProblemBuilder {
 public:
  ProblemBuilder(std::string name, std::size_t dim);

  ProblemBuilder& objective(std::function<double(const Point&)> f);
  ProblemBuilder& projection(std::function<Point(const Point&)> project);
  ProblemBuilder& det_subgradient(std::function<Point(const Point&)> g);
  ProblemBuilder& stoch_subgradient(std::function<Point(const Point&, RandomSource&)> g);
  ProblemBuilder& dist_to_opt(std::function<double(const Point&)> dist);
  ProblemBuilder& sampler(std::function<Point(RandomSource&)> sample);

  ProblemBuilder& objective_in_place(Problem::ObjectiveFn f);
  ProblemBuilder& projection_in_place(Problem::ProjectFn project);
  ProblemBuilder& det_subgradient_in_place(Problem::DetOracleFn g);
  ProblemBuilder& stoch_subgradient_in_place(Problem::StochOracleFn g);
  ProblemBuilder& dist_to_opt_in_place(Problem::DistFn dist);
  ProblemBuilder& sampler_in_place(Problem::SamplerFn sample);

  ProblemBuilder& f_star(double value);
  ProblemBuilder& g_bound(double g);
  /// Bound on ‖g(w)‖ for the exact subgradient; defaults to g_bound.
  ProblemBuilder& det_g_bound(double g);
  ProblemBuilder& structure(Structure s);
  ProblemBuilder& default_start(Point w0);

  /// Throws InvalidArgument when a required piece is missing.
  Problem build() const;

 private:
  std::string name_;
  std::size_t dim_;
  Problem::ObjectiveFn objective_;
  Problem::ProjectFn project_;
  Problem::DetOracleFn det_;
  Problem::StochOracleFn stoch_;
  Problem::DistFn dist_;
  Problem::SamplerFn sampler_;
  std::optional<double> f_star_;
  std::optional<double> g_bound_;
  std::optional<double> det_g_bound_;
  std::optional<Structure> structure_;
  std::optional<Point> default_start_;
};

struct ValidationOptions {
  std::uint64_t points = 2000;
  std::uint64_t oracle_draws = 2000;
  double tolerance = 1e-12;
  /// Standard errors allowed in the unbiasedness check.
  double stderr_slack = 4.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Monte-Carlo audit of a problem's declared invariants: F ≥ F*, idempotent
/// and non-expansive projection, ‖ĝ‖ ≤ G, unbiased oracle (when the exact
/// subgradient is available), dist = 0 ⇔ gap = 0, and the sharpness
/// inequality of the declared structure.
ValidationReport validate_problem(const Problem& p, RandomSource& src,
                                  const ValidationOptions& options = {});

}  // namespace stagavg
