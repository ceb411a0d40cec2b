#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stagavg/problem.hpp"

namespace stagavg {

// Every exponential constant is also kept in log form. When an exponent
// exceeds kExpGuard the linear value is reported as +inf and `overflow` is set;
// the bounds stay valid but become vacuous.
inline constexpr double kExpGuard = 700.0;

/// Exponential-moment constants for a drift of −β outside radius γ.
struct ConcentrationConstants {
  double r = 0.0;
  double rho = 0.0;
  double one_minus_rho = 0.0;
  double d = 0.0;
  double log_d = 0.0;
  bool overflow = false;
};

struct PolyhedralConstants {
  double g = 0.0;
  double l_p = 0.0;
  double b_p = 0.0;
  double r_p = 0.0;
  double rho_p = 0.0;
  double one_minus_rho_p = 0.0;  ///< computed directly, not as 1 − rho_p
  double d_p = 0.0;
  double u_p = 0.0;
  double log_d_p = 0.0;
  double log_u_p = 0.0;
  bool overflow = false;
};

struct GeneralConstants {
  double g = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double s = 0.0;
  double b_g = 0.0;
  double r_g = 0.0;
  double rho_g = 0.0;
  double one_minus_rho_g = 0.0;
  double d_g = 0.0;
  double u_g = 0.0;
  double log_d_g = 0.0;
  double log_u_g = 0.0;
  bool overflow = false;
};

/// r = 3β/(12α²G² + 2αGβ), ρ = 1 − rβ/2, D = (e^{2αGr} − ρ)e^{rγ}/(1 − ρ).
/// Requires 0 < β ≤ 2αG.
ConcentrationConstants concentration_constants(double beta, double gamma, double alpha, double g);

PolyhedralConstants polyhedral_constants(double g, double l_p);

/// ⌈r_P·dist0 / (α·log(1/ρ_P))⌉
std::uint64_t transient_time_poly(double alpha, const PolyhedralConstants& pc, double dist0);

/// Constants for curvature η(S); D_G uses the exponent r_G·B_G/α.
GeneralConstants general_constants(double g, double eta_s, double alpha, double s);

std::uint64_t transient_time_general(double alpha, const GeneralConstants& gc, double dist0);

/// αG²/2 + αU/(2T)
double gap_bound(double alpha, std::uint64_t t_avg, double g, double u);

struct FrameParams {
  double theta = 0.0;
  std::uint64_t frame_len = 1;
};

/// θ = max(√U_P, Z), frame length ⌈2r_Pθ / log(1/ρ_P)⌉.
FrameParams frame_doubling_params(const PolyhedralConstants& pc, double z);

/// Smallest k with 2^k − 1 ≥ transient: the first staggered block that starts
/// after the transient time.
unsigned first_post_transient_block(std::uint64_t transient);

struct SweepPoint {
  double s = 0.0;
  double eta = 0.0;
  std::uint64_t transient = 0;
  std::uint64_t block_len = 0;  ///< 2^k for the first post-transient block
  double bound = 0.0;           ///< gap bound at the end of that block
};

/// Evaluates T_G and the first post-transient gap bound over a list of S
/// values so callers can pick the best S. Values where η is unavailable are
/// skipped.
std::vector<SweepPoint> sweep_general(double g, const std::function<double(double)>& eta,
                                      double alpha, double dist0,
                                      const std::vector<double>& s_values);

/// Every theory constant for a (problem, α, S) tuple.
struct ConstantsReport {
  std::string problem;
  std::size_t dim = 0;
  bool polyhedral = true;
  double alpha = 0.0;
  double g = 0.0;
  double dist0 = 0.0;
  std::optional<PolyhedralConstants> poly;
  std::optional<GeneralConstants> general;
  std::uint64_t transient = 0;
  unsigned first_block_k = 0;
  double floor = 0.0;        ///< αG²/2
  double first_bound = 0.0;  ///< bound at the end of the first post-transient block
  std::optional<FrameParams> frame;  ///< deterministic view, polyhedral only
};

/// For GeneralInfo problems `s` is required. `dist0` defaults to the distance
/// of the problem's default start.
ConstantsReport constants_report(const Problem& p, double alpha, std::optional<double> s = {},
                                 std::optional<double> dist0 = {});

std::string format_human(const ConstantsReport& report);
/// `key,value` lines with a header.
std::string format_csv(const ConstantsReport& report);

}  // namespace stagavg
