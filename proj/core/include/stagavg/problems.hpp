#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "stagavg/problem.hpp"

namespace stagavg {

/// F(w) = ‖w‖₁ on [−h, h]^dim. The oracle scales the whole subgradient by a
/// single X ~ U[0, 2] per call. L_P = 1, G = 2√dim.
Problem make_l1(std::size_t dim, double half_width);

/// Separable F with Fᵢ(x) = −x for x < 0 and x² for x ≥ 0, on [−h, h]^dim.
/// The oracle adds independent Y ~ U[−1, 1] per coordinate. Not polyhedral:
/// η(S) = min(S, 1) for S ∈ (0, h].
Problem make_asymmetric(std::size_t dim, double half_width);

/// Separable dead-zone ℓ1: Fᵢ(x) = max(|x| − δ/2, 0), so W* = [−δ/2, δ/2]^dim.
/// Additive per-coordinate Y ~ U[−1, 1] noise. L_P = 1, G = 2√dim.
Problem make_deadzone(std::size_t dim, double half_width, double delta);

/// objective(w) − f_star. `w` is expected to be feasible.
double evaluate_gap(const Problem& p, const Point& w);

/// Name-based selection used by the CLI and config files.
struct ProblemSpec {
  std::string name = "l1";  // l1 | asym | deadzone
  std::size_t dim = 100;
  double half_width = 4.0;
  double delta = 1e-6;
};

Problem make_problem(const ProblemSpec& spec);

bool is_known_problem(std::string_view name) noexcept;

}  // namespace stagavg
