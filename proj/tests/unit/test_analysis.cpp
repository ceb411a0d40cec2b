#include <cmath>

#include "doctest.h"
#include "stagavg/analysis.hpp"
#include "stagavg/errors.hpp"
#include "stagavg/problems.hpp"

using namespace stagavg;

namespace {

// Reference values: tests/oracles/constants_oracle.py (mpmath, 50 digits).
void check_rel(double got, double want, double rel) {
  CHECK(std::abs(got - want) <= rel * std::abs(want));
}

}  // namespace

TEST_CASE("polyhedral constants for G = L = 1") {
  const auto c = polyhedral_constants(1.0, 1.0);
  CHECK(c.b_p == 1.0);
  check_rel(c.r_p, 3.0 / 26.0, 1e-15);
  check_rel(c.rho_p, 101.0 / 104.0, 1e-15);
  check_rel(c.one_minus_rho_p, 3.0 / 104.0, 1e-15);
  check_rel(c.d_p, 11.221227393900573694, 1e-13);
  check_rel(c.u_p, 1835.8999373948417371, 1e-13);
  CHECK_FALSE(c.overflow);
  CHECK(transient_time_poly(0.1, c, 10.0) == 395);
  const auto fp = frame_doubling_params(c, 4.0);
  check_rel(fp.theta, 42.847402924737944228, 1e-13);
  CHECK(fp.frame_len == 338);
}

TEST_CASE("polyhedral constants for the l1 experiments") {
  const auto c = polyhedral_constants(20.0, 1.0);
  CHECK(c.b_p == 400.0);
  check_rel(c.r_p, 3.112033195020746888e-4, 1e-14);
  check_rel(c.rho_p, 0.99992219917012448133, 1e-15);
  check_rel(c.d_p, 183.47485650415134174, 1e-12);
  check_rel(c.u_p, 3809594361.1084850061, 1e-12);
  CHECK(transient_time_poly(1e-3, c, 40.0) == 159994);
  CHECK(transient_time_poly(1e-4, c, 40.0) == 1599938);

  const auto d = polyhedral_constants(2.0, 1.0);
  check_rel(d.r_p, 0.03, 1e-15);
  check_rel(d.rho_p, 0.9925, 1e-15);
  check_rel(d.d_p, 20.294470017183245023, 1e-13);
  check_rel(d.u_p, 47321.044482629433384, 1e-13);
  CHECK(transient_time_poly(0.1, d, 4.0) == 160);
}

TEST_CASE("general constants") {
  const auto c = general_constants(90.0, 0.5, 1e-3, 0.5);
  check_rel(c.b_g, 16.2, 1e-15);
  check_rel(c.r_g, 7.7124787906833256209e-6, 1e-14);
  check_rel(c.rho_g, 0.99999903594015116458, 1e-15);
  check_rel(c.d_g, 1633.905555563613802, 1e-11);
  check_rel(c.u_g, 54971134465990.945895, 1e-11);
  CHECK(transient_time_general(1e-3, c, 40.0) == 320000);

  // α = S = η = G = 1 collapses onto the polyhedral formulas.
  const auto g = general_constants(1.0, 1.0, 1.0, 1.0);
  const auto p = polyhedral_constants(1.0, 1.0);
  check_rel(g.d_g, p.d_p, 1e-14);
  check_rel(g.u_g, p.u_p, 1e-14);
}

TEST_CASE("concentration constants reproduce the polyhedral ones") {
  for (double alpha : {1e-4, 1e-2, 0.3}) {
    for (double g : {1.0, 2.0, 20.0}) {
      for (double l : {0.5, 1.0}) {
        const auto pc = polyhedral_constants(g, l);
        const auto cc = concentration_constants(alpha * l / 2.0, alpha * pc.b_p, alpha, g);
        check_rel(cc.r * alpha, pc.r_p, 1e-12);
        check_rel(cc.rho, pc.rho_p, 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(concentration_constants(3.0, 1.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(concentration_constants(0.0, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("overflow is reported, not propagated as NaN") {
  const auto c = general_constants(90.0, 0.5, 1e-9, 4.0);
  CHECK(c.overflow);
  CHECK(std::isinf(c.d_g));
  CHECK(std::isinf(c.u_g));
  CHECK(std::isfinite(c.log_u_g));
}

TEST_CASE("gap bound and block index") {
  CHECK(gap_bound(0.1, 10, 2.0, 100.0) == doctest::Approx(0.2 + 0.5));
  CHECK(first_post_transient_block(0) == 0);
  CHECK(first_post_transient_block(1) == 1);
  CHECK(first_post_transient_block(3) == 2);
  CHECK(first_post_transient_block(4) == 3);
  CHECK(first_post_transient_block(159994) == 18);
  CHECK(first_post_transient_block(320000) == 19);
}

TEST_CASE("S sweep") {
  const auto p = make_asymmetric(100, 4.0);
  const auto& info = std::get<GeneralInfo>(p.structure());
  const auto pts = sweep_general(p.g_bound(), info.eta, 1e-3, 40.0, {0.1, 0.5, 1.0, 100.0});
  CHECK(pts.size() == 3);
  CHECK(pts[1].transient == 320000);
  CHECK(pts[1].block_len == (std::uint64_t{1} << 19));
}

TEST_CASE("constants report") {
  const auto r = constants_report(make_l1(100, 4.0), 1e-3);
  CHECK(r.transient == 159994);
  CHECK(r.first_block_k == 18);
  CHECK(r.floor == doctest::Approx(0.2));
  CHECK(r.frame.has_value());
  const auto csv = format_csv(r);
  CHECK(csv.rfind("key,value\n", 0) == 0);
  CHECK(csv.find("T_P,159994\n") != std::string::npos);
  CHECK(format_human(r).find("U_P") != std::string::npos);
  CHECK_THROWS_AS(constants_report(make_asymmetric(2, 4.0), 1e-3), InvalidArgument);
  CHECK(constants_report(make_asymmetric(100, 4.0), 1e-3, 0.5).transient == 320000);
}
