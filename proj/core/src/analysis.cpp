#include "stagavg/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "stagavg/errors.hpp"
#include "stagavg/format.hpp"

namespace stagavg {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

struct ExpConstants {
  double d, log_d, u, log_u;
  bool overflow;
};

// D = (e^{x} − ρ)·e^{y}/(1 − ρ) and U = 2(D + 1)/r², evaluated so that
// e^{x} − ρ = expm1(x) + (1 − ρ) keeps full precision when x is small.
ExpConstants exp_constants(double x, double y, double one_minus_rho, double r) {
  ExpConstants c{};
  const double head = std::expm1(x) + one_minus_rho;
  c.log_d = (x > kExpGuard ? x + std::log1p(-(1.0 - one_minus_rho) * std::exp(-x))
                           : std::log(head)) +
            y - std::log(one_minus_rho);
  c.overflow = x > kExpGuard || y > kExpGuard || c.log_d > kExpGuard;
  // log(D + 1) = logaddexp(log D, 0)
  const double log_d_plus_1 =
      c.log_d > 0.0 ? c.log_d + std::log1p(std::exp(-c.log_d)) : std::log1p(std::exp(c.log_d));
  c.log_u = std::log(2.0) + log_d_plus_1 - 2.0 * std::log(r);
  if (c.overflow) {
    c.d = std::numeric_limits<double>::infinity();
    c.u = std::numeric_limits<double>::infinity();
  } else {
    c.d = head * std::exp(y) / one_minus_rho;
    c.u = 2.0 * (c.d + 1.0) / (r * r);
  }
  return c;
}

std::uint64_t ceil_to_rounds(double value) {
  if (!(value > 0.0)) return 0;
  const double c = std::ceil(value);
  if (c >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(c);
}

}  // namespace

ConcentrationConstants concentration_constants(double beta, double gamma, double alpha, double g) {
  require_positive(alpha, "alpha");
  require_positive(g, "g");
  if (!(beta > 0.0) || beta > 2.0 * alpha * g) {
    throw InvalidArgument("concentration_constants: beta must lie in (0, 2*alpha*G]");
  }
  if (!std::isfinite(gamma)) throw InvalidArgument("concentration_constants: gamma must be finite");
  ConcentrationConstants c;
  c.r = 3.0 * beta / (12.0 * alpha * alpha * g * g + 2.0 * alpha * g * beta);
  c.one_minus_rho = c.r * beta / 2.0;
  c.rho = 1.0 - c.one_minus_rho;
  const auto e = exp_constants(2.0 * alpha * g * c.r, c.r * gamma, c.one_minus_rho, c.r);
  c.d = e.d;
  c.log_d = e.log_d;
  c.overflow = e.overflow;
  return c;
}

PolyhedralConstants polyhedral_constants(double g, double l_p) {
  require_positive(g, "g");
  require_positive(l_p, "l_p");
  PolyhedralConstants c;
  c.g = g;
  c.l_p = l_p;
  const double denom = 24.0 * g * g + 2.0 * l_p * g;
  c.b_p = std::max(l_p / 2.0, g * g / l_p);
  c.r_p = 3.0 * l_p / denom;
  c.one_minus_rho_p = 3.0 * l_p * l_p / (4.0 * denom);
  c.rho_p = 1.0 - c.one_minus_rho_p;
  const auto e = exp_constants(2.0 * g * c.r_p, c.r_p * c.b_p, c.one_minus_rho_p, c.r_p);
  c.d_p = e.d;
  c.u_p = e.u;
  c.log_d_p = e.log_d;
  c.log_u_p = e.log_u;
  c.overflow = e.overflow;
  return c;
}

std::uint64_t transient_time_poly(double alpha, const PolyhedralConstants& pc, double dist0) {
  require_positive(alpha, "alpha");
  if (!(dist0 >= 0.0)) throw InvalidArgument("transient_time_poly: dist0 must be >= 0");
  return ceil_to_rounds(pc.r_p * dist0 / (alpha * -std::log1p(-pc.one_minus_rho_p)));
}

GeneralConstants general_constants(double g, double eta_s, double alpha, double s) {
  require_positive(g, "g");
  require_positive(eta_s, "eta(S)");
  require_positive(alpha, "alpha");
  require_positive(s, "S");
  GeneralConstants c;
  c.g = g;
  c.eta = eta_s;
  c.alpha = alpha;
  c.s = s;
  const double denom = 24.0 * g * g + 2.0 * eta_s * g;
  c.b_g = std::max({alpha * eta_s / 2.0, s, alpha * g * g / eta_s});
  c.r_g = 3.0 * eta_s / denom;
  c.one_minus_rho_g = 3.0 * eta_s * eta_s / (4.0 * denom);
  c.rho_g = 1.0 - c.one_minus_rho_g;
  const auto e = exp_constants(2.0 * g * c.r_g, c.r_g * c.b_g / alpha, c.one_minus_rho_g, c.r_g);
  c.d_g = e.d;
  c.u_g = e.u;
  c.log_d_g = e.log_d;
  c.log_u_g = e.log_u;
  c.overflow = e.overflow;
  return c;
}

std::uint64_t transient_time_general(double alpha, const GeneralConstants& gc, double dist0) {
  require_positive(alpha, "alpha");
  if (!(dist0 >= 0.0)) throw InvalidArgument("transient_time_general: dist0 must be >= 0");
  return ceil_to_rounds(gc.r_g * dist0 / (alpha * -std::log1p(-gc.one_minus_rho_g)));
}

double gap_bound(double alpha, std::uint64_t t_avg, double g, double u) {
  return alpha * g * g / 2.0 + alpha * u / (2.0 * static_cast<double>(t_avg));
}

FrameParams frame_doubling_params(const PolyhedralConstants& pc, double z) {
  require_positive(z, "z");
  FrameParams f;
  f.theta = std::max(std::sqrt(pc.u_p), z);
  f.frame_len = std::max<std::uint64_t>(
      1, ceil_to_rounds(2.0 * pc.r_p * f.theta / -std::log1p(-pc.one_minus_rho_p)));
  return f;
}

unsigned first_post_transient_block(std::uint64_t transient) {
  if (transient == 0) return 0;
  if (transient >= (std::uint64_t{1} << 63)) return 64;
  // smallest k with 2^k ≥ transient + 1
  return static_cast<unsigned>(std::bit_width(transient));
}

std::vector<SweepPoint> sweep_general(double g, const std::function<double(double)>& eta,
                                      double alpha, double dist0,
                                      const std::vector<double>& s_values) {
  std::vector<SweepPoint> out;
  for (double s : s_values) {
    double e = 0.0;
    try {
      e = eta(s);
    } catch (const InvalidArgument&) {
      continue;
    }
    const auto gc = general_constants(g, e, alpha, s);
    SweepPoint pt;
    pt.s = s;
    pt.eta = e;
    pt.transient = transient_time_general(alpha, gc, dist0);
    const unsigned k = first_post_transient_block(pt.transient);
    pt.block_len = k >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << k);
    pt.bound = gap_bound(alpha, pt.block_len, g, gc.u_g);
    out.push_back(pt);
  }
  return out;
}

ConstantsReport constants_report(const Problem& p, double alpha, std::optional<double> s,
                                 std::optional<double> dist0) {
  require_positive(alpha, "alpha");
  ConstantsReport r;
  r.problem = p.name();
  r.dim = p.dim();
  r.alpha = alpha;
  r.g = p.g_bound();
  r.dist0 = dist0.value_or(p.dist_to_opt(p.default_start()));
  r.floor = alpha * r.g * r.g / 2.0;
  double u = 0.0;
  if (const auto* poly = std::get_if<PolyhedralInfo>(&p.structure())) {
    r.polyhedral = true;
    r.poly = polyhedral_constants(r.g, poly->l_p);
    r.transient = transient_time_poly(alpha, *r.poly, r.dist0);
    u = r.poly->u_p;
    if (p.has_deterministic_oracle()) {
      const auto det = p.deterministic();
      r.frame = frame_doubling_params(polyhedral_constants(det.g_bound(), poly->l_p),
                                      std::max(r.dist0, std::numeric_limits<double>::min()));
    }
  } else {
    r.polyhedral = false;
    if (!s) throw InvalidArgument("constants_report: problem '" + p.name() + "' needs S");
    const auto& gen = std::get<GeneralInfo>(p.structure());
    r.general = general_constants(r.g, gen.eta(*s), alpha, *s);
    r.transient = transient_time_general(alpha, *r.general, r.dist0);
    u = r.general->u_g;
  }
  r.first_block_k = first_post_transient_block(r.transient);
  const std::uint64_t block =
      r.first_block_k >= 64 ? std::numeric_limits<std::uint64_t>::max()
                            : (std::uint64_t{1} << r.first_block_k);
  r.first_bound = gap_bound(alpha, block, r.g, u);
  return r;
}

namespace {

std::vector<std::pair<std::string, std::string>> report_fields(const ConstantsReport& r) {
  std::vector<std::pair<std::string, std::string>> f;
  auto add = [&f](std::string k, std::string v) { f.emplace_back(std::move(k), std::move(v)); };
  add("problem", r.problem);
  add("dim", std::to_string(r.dim));
  add("structure", r.polyhedral ? "polyhedral" : "general");
  add("alpha", format_real(r.alpha));
  add("G", format_real(r.g));
  add("dist0", format_real(r.dist0));
  if (r.poly) {
    const auto& c = *r.poly;
    add("L_P", format_real(c.l_p));
    add("B_P", format_real(c.b_p));
    add("r_P", format_real(c.r_p));
    add("rho_P", format_real(c.rho_p));
    add("D_P", format_real(c.d_p));
    add("U_P", format_real(c.u_p));
    add("log_U_P", format_real(c.log_u_p));
    add("overflow", c.overflow ? "true" : "false");
    add("T_P", std::to_string(r.transient));
  } else if (r.general) {
    const auto& c = *r.general;
    add("S", format_real(c.s));
    add("eta_S", format_real(c.eta));
    add("B_G", format_real(c.b_g));
    add("r_G", format_real(c.r_g));
    add("rho_G", format_real(c.rho_g));
    add("D_G", format_real(c.d_g));
    add("U_G", format_real(c.u_g));
    add("log_U_G", format_real(c.log_u_g));
    add("overflow", c.overflow ? "true" : "false");
    add("T_G", std::to_string(r.transient));
  }
  add("first_block_k", std::to_string(r.first_block_k));
  add("floor", format_real(r.floor));
  add("first_block_bound", format_real(r.first_bound));
  if (r.frame) {
    add("frame_theta", format_real(r.frame->theta));
    add("frame_len", std::to_string(r.frame->frame_len));
  }
  return f;
}

}  // namespace

std::string format_human(const ConstantsReport& report) {
  const auto fields = report_fields(report);
  std::size_t width = 0;
  for (const auto& [k, v] : fields) width = std::max(width, k.size());
  std::ostringstream os;
  for (const auto& [k, v] : fields) {
    os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  }
  return os.str();
}

std::string format_csv(const ConstantsReport& report) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : report_fields(report)) out += k + ',' + v + '\n';
  return out;
}

}  // namespace stagavg
