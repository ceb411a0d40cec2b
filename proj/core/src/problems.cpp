#include "stagavg/problems.hpp"

#include <algorithm>
#include <cmath>

#include "stagavg/errors.hpp"

namespace stagavg {
namespace {

void check_box_args(const char* who, std::size_t dim, double half_width) {
  if (dim < 1) throw InvalidArgument(std::string(who) + ": dim must be >= 1");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidArgument(std::string(who) + ": half_width must be positive and finite");
  }
}

Problem::ProjectFn clamp_to_box(double half_width) {
  return [half_width](std::span<double> x) {
    for (double& v : x) v = std::clamp(v, -half_width, half_width);
  };
}

Problem::SamplerFn uniform_in_box(double half_width) {
  return [half_width](RandomSource& src, std::span<double> out) {
    for (double& v : out) v = src.uniform(-half_width, half_width);
  };
}

double euclidean(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return std::sqrt(s);
}

inline double sign_or_zero(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

Problem make_l1(std::size_t dim, double half_width) {
  check_box_args("make_l1", dim, half_width);
  const double root_dim = std::sqrt(static_cast<double>(dim));
  return ProblemBuilder("l1", dim)
      .objective_in_place([](std::span<const double> w) {
        double s = 0.0;
        for (double v : w) s += std::abs(v);
        return s;
      })
      .projection_in_place(clamp_to_box(half_width))
      .det_subgradient_in_place([](std::span<const double> w, std::span<double> out) {
        for (std::size_t i = 0; i < w.size(); ++i) out[i] = sign_or_zero(w[i]);
      })
      .stoch_subgradient_in_place(
          [](std::span<const double> w, RandomSource& src, std::span<double> out) {
            const double x = src.uniform(0.0, 2.0);
            for (std::size_t i = 0; i < w.size(); ++i) out[i] = sign_or_zero(w[i]) * x;
          })
      .dist_to_opt_in_place(euclidean)
      .sampler_in_place(uniform_in_box(half_width))
      .f_star(0.0)
      .g_bound(2.0 * root_dim)
      .det_g_bound(root_dim)
      .structure(PolyhedralInfo{1.0})
      .default_start(Point(dim, half_width))
      .build();
}

Problem make_asymmetric(std::size_t dim, double half_width) {
  check_box_args("make_asymmetric", dim, half_width);
  const double root_dim = std::sqrt(static_cast<double>(dim));
  // |gᵢ| ≤ max(1, 2h) and |Y| ≤ 1.
  const double coord_bound = std::max(1.0, 2.0 * half_width);
  GeneralInfo info;
  info.s_max = half_width * root_dim;
  info.eta = [half_width](double s) {
    if (!(s > 0.0) || s > half_width) {
      throw InvalidArgument("asym: eta(S) is only available for S in (0, half_width]");
    }
    return std::min(s, 1.0);
  };
  return ProblemBuilder("asym", dim)
      .objective_in_place([](std::span<const double> w) {
        double s = 0.0;
        for (double v : w) s += v < 0.0 ? -v : v * v;
        return s;
      })
      .projection_in_place(clamp_to_box(half_width))
      .det_subgradient_in_place([](std::span<const double> w, std::span<double> out) {
        for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] < 0.0 ? -1.0 : 2.0 * w[i];
      })
      .stoch_subgradient_in_place(
          [](std::span<const double> w, RandomSource& src, std::span<double> out) {
            for (std::size_t i = 0; i < w.size(); ++i) {
              out[i] = (w[i] < 0.0 ? -1.0 : 2.0 * w[i]) + src.uniform(-1.0, 1.0);
            }
          })
      .dist_to_opt_in_place(euclidean)
      .sampler_in_place(uniform_in_box(half_width))
      .f_star(0.0)
      .g_bound((coord_bound + 1.0) * root_dim)
      .det_g_bound(coord_bound * root_dim)
      .structure(std::move(info))
      .default_start(Point(dim, half_width))
      .build();
}

Problem make_deadzone(std::size_t dim, double half_width, double delta) {
  check_box_args("make_deadzone", dim, half_width);
  if (!(delta > 0.0) || !(delta < 2.0 * half_width)) {
    throw InvalidArgument("make_deadzone: delta must lie in (0, 2 * half_width)");
  }
  const double root_dim = std::sqrt(static_cast<double>(dim));
  const double edge = delta / 2.0;
  auto subgradient = [edge](double x) { return x >= edge ? 1.0 : (x <= -edge ? -1.0 : 0.0); };
  return ProblemBuilder("deadzone", dim)
      .objective_in_place([edge](std::span<const double> w) {
        double s = 0.0;
        for (double v : w) {
          if (v >= edge) {
            s += v - edge;
          } else if (v <= -edge) {
            s += -v - edge;
          }
        }
        return s;
      })
      .projection_in_place(clamp_to_box(half_width))
      .det_subgradient_in_place([subgradient](std::span<const double> w, std::span<double> out) {
        for (std::size_t i = 0; i < w.size(); ++i) out[i] = subgradient(w[i]);
      })
      .stoch_subgradient_in_place(
          [subgradient](std::span<const double> w, RandomSource& src, std::span<double> out) {
            for (std::size_t i = 0; i < w.size(); ++i) {
              out[i] = subgradient(w[i]) + src.uniform(-1.0, 1.0);
            }
          })
      .dist_to_opt_in_place([edge](std::span<const double> w) {
        double s = 0.0;
        for (double v : w) {
          const double excess = std::max(std::abs(v) - edge, 0.0);
          s += excess * excess;
        }
        return std::sqrt(s);
      })
      .sampler_in_place(uniform_in_box(half_width))
      .f_star(0.0)
      .g_bound(2.0 * root_dim)
      .det_g_bound(root_dim)
      .structure(PolyhedralInfo{1.0})
      .default_start(Point(dim, half_width))
      .build();
}

double evaluate_gap(const Problem& p, const Point& w) {
  require_same_dim(p.dim(), w.dim(), "evaluate_gap");
  return p.objective(w) - p.f_star();
}

bool is_known_problem(std::string_view name) noexcept {
  return name == "l1" || name == "asym" || name == "deadzone";
}

Problem make_problem(const ProblemSpec& spec) {
  if (spec.name == "l1") return make_l1(spec.dim, spec.half_width);
  if (spec.name == "asym") return make_asymmetric(spec.dim, spec.half_width);
  if (spec.name == "deadzone") return make_deadzone(spec.dim, spec.half_width, spec.delta);
  throw InvalidArgument("unknown problem '" + spec.name + "' (expected l1, asym or deadzone)");
}

}  // namespace stagavg
