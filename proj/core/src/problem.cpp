#include "stagavg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stagavg/errors.hpp"

namespace stagavg {

struct Problem::Impl {
  std::string name;
  std::size_t dim = 0;
  ObjectiveFn objective;
  ProjectFn project;
  DetOracleFn det;
  StochOracleFn stoch;
  DistFn dist;
  SamplerFn sampler;
  double f_star = 0.0;
  double g_bound = 0.0;
  double det_g_bound = 0.0;
  Structure structure;
  Point default_start;
  bool deterministic = false;
};

const std::string& Problem::name() const noexcept { return impl_->name; }
std::size_t Problem::dim() const noexcept { return impl_->dim; }
double Problem::f_star() const noexcept { return impl_->f_star; }
double Problem::g_bound() const noexcept { return impl_->g_bound; }
const Structure& Problem::structure() const noexcept { return impl_->structure; }
bool Problem::is_polyhedral() const noexcept {
  return std::holds_alternative<PolyhedralInfo>(impl_->structure);
}
bool Problem::has_deterministic_oracle() const noexcept { return static_cast<bool>(impl_->det); }
bool Problem::is_deterministic() const noexcept { return impl_->deterministic; }

double Problem::objective(std::span<const double> w) const {
  require_same_dim(impl_->dim, w.size(), "objective");
  return impl_->objective(w);
}

double Problem::objective(const Point& w) const { return objective(w.coords()); }

double Problem::dist_to_opt(std::span<const double> w) const {
  require_same_dim(impl_->dim, w.size(), "dist_to_opt");
  return impl_->dist(w);
}

double Problem::dist_to_opt(const Point& w) const { return dist_to_opt(w.coords()); }

void Problem::project_in_place(std::span<double> x) const {
  require_same_dim(impl_->dim, x.size(), "project");
  impl_->project(x);
}

Point Problem::project(const Point& x) const {
  Point out = x;
  project_in_place(out.coords());
  return out;
}

bool Problem::is_feasible(const Point& w) const {
  if (w.dim() != impl_->dim) return false;
  return project(w) == w;
}

Point Problem::det_subgradient(const Point& w) const {
  if (!impl_->det) {
    throw UnsupportedMode("problem '" + impl_->name + "' has no deterministic subgradient oracle");
  }
  require_same_dim(impl_->dim, w.dim(), "det_subgradient");
  Point g(impl_->dim);
  impl_->det(w.coords(), g.coords());
  return g;
}

void Problem::stoch_subgradient_into(std::span<const double> w, RandomSource& src,
                                     std::span<double> out) const {
  require_same_dim(impl_->dim, w.size(), "stoch_subgradient");
  require_same_dim(impl_->dim, out.size(), "stoch_subgradient");
  impl_->stoch(w, src, out);
}

SubgradientSample Problem::stoch_subgradient(const Point& w, RandomSource& src) const {
  Point g(impl_->dim);
  stoch_subgradient_into(w.coords(), src, g.coords());
  return SubgradientSample::from(std::move(g));
}

Problem Problem::deterministic() const {
  if (impl_->deterministic) return *this;
  if (!impl_->det) {
    throw UnsupportedMode("problem '" + impl_->name + "' has no deterministic subgradient oracle");
  }
  auto impl = std::make_shared<Impl>(*impl_);
  impl->deterministic = true;
  impl->g_bound = impl_->det_g_bound;
  impl->stoch = [det = impl_->det](std::span<const double> w, RandomSource&,
                                    std::span<double> out) { det(w, out); };
  return Problem(std::move(impl));
}

Point Problem::default_start() const { return impl_->default_start; }

Point Problem::sample_feasible(RandomSource& src) const {
  Point w(impl_->dim);
  impl_->sampler(src, w.coords());
  return w;
}

// ---------------------------------------------------------------------------

ProblemBuilder::ProblemBuilder(std::string name, std::size_t dim)
    : name_(std::move(name)), dim_(dim) {}

ProblemBuilder& ProblemBuilder::objective(std::function<double(const Point&)> f) {
  return objective_in_place([f = std::move(f)](std::span<const double> w) {
    return f(Point(std::vector<double>(w.begin(), w.end())));
  });
}

ProblemBuilder& ProblemBuilder::projection(std::function<Point(const Point&)> project) {
  return projection_in_place([project = std::move(project)](std::span<double> x) {
    const Point p = project(Point(std::vector<double>(x.begin(), x.end())));
    require_same_dim(x.size(), p.dim(), "projection");
    std::copy(p.coords().begin(), p.coords().end(), x.begin());
  });
}

ProblemBuilder& ProblemBuilder::det_subgradient(std::function<Point(const Point&)> g) {
  return det_subgradient_in_place(
      [g = std::move(g)](std::span<const double> w, std::span<double> out) {
        const Point v = g(Point(std::vector<double>(w.begin(), w.end())));
        require_same_dim(out.size(), v.dim(), "det_subgradient");
        std::copy(v.coords().begin(), v.coords().end(), out.begin());
      });
}

ProblemBuilder& ProblemBuilder::stoch_subgradient(
    std::function<Point(const Point&, RandomSource&)> g) {
  return stoch_subgradient_in_place(
      [g = std::move(g)](std::span<const double> w, RandomSource& src, std::span<double> out) {
        const Point v = g(Point(std::vector<double>(w.begin(), w.end())), src);
        require_same_dim(out.size(), v.dim(), "stoch_subgradient");
        std::copy(v.coords().begin(), v.coords().end(), out.begin());
      });
}

ProblemBuilder& ProblemBuilder::dist_to_opt(std::function<double(const Point&)> dist) {
  return dist_to_opt_in_place([dist = std::move(dist)](std::span<const double> w) {
    return dist(Point(std::vector<double>(w.begin(), w.end())));
  });
}

ProblemBuilder& ProblemBuilder::sampler(std::function<Point(RandomSource&)> sample) {
  return sampler_in_place([sample = std::move(sample)](RandomSource& src, std::span<double> out) {
    const Point v = sample(src);
    require_same_dim(out.size(), v.dim(), "sampler");
    std::copy(v.coords().begin(), v.coords().end(), out.begin());
  });
}

ProblemBuilder& ProblemBuilder::objective_in_place(Problem::ObjectiveFn f) {
  objective_ = std::move(f);
  return *this;
}
ProblemBuilder& ProblemBuilder::projection_in_place(Problem::ProjectFn project) {
  project_ = std::move(project);
  return *this;
}
ProblemBuilder& ProblemBuilder::det_subgradient_in_place(Problem::DetOracleFn g) {
  det_ = std::move(g);
  return *this;
}
ProblemBuilder& ProblemBuilder::stoch_subgradient_in_place(Problem::StochOracleFn g) {
  stoch_ = std::move(g);
  return *this;
}
ProblemBuilder& ProblemBuilder::dist_to_opt_in_place(Problem::DistFn dist) {
  dist_ = std::move(dist);
  return *this;
}
ProblemBuilder& ProblemBuilder::sampler_in_place(Problem::SamplerFn sample) {
  sampler_ = std::move(sample);
  return *this;
}
ProblemBuilder& ProblemBuilder::f_star(double value) {
  f_star_ = value;
  return *this;
}
ProblemBuilder& ProblemBuilder::g_bound(double g) {
  g_bound_ = g;
  return *this;
}
ProblemBuilder& ProblemBuilder::det_g_bound(double g) {
  det_g_bound_ = g;
  return *this;
}
ProblemBuilder& ProblemBuilder::structure(Structure s) {
  structure_ = std::move(s);
  return *this;
}
ProblemBuilder& ProblemBuilder::default_start(Point w0) {
  default_start_ = std::move(w0);
  return *this;
}

Problem ProblemBuilder::build() const {
  auto missing = [this](const char* what) {
    return InvalidArgument("problem '" + name_ + "': missing " + what);
  };
  if (dim_ == 0) throw InvalidArgument("problem '" + name_ + "': dimension must be >= 1");
  if (!objective_) throw missing("objective");
  if (!project_) throw missing("projection");
  if (!dist_) throw missing("dist_to_opt");
  if (!stoch_ && !det_) throw missing("subgradient oracle");
  if (!f_star_) throw missing("f_star");
  if (!g_bound_) throw missing("g_bound");
  if (!structure_) throw missing("structure");
  if (!(*g_bound_ > 0.0) || !std::isfinite(*g_bound_)) {
    throw InvalidArgument("problem '" + name_ + "': g_bound must be positive and finite");
  }
  if (const auto* poly = std::get_if<PolyhedralInfo>(&*structure_); poly && !(poly->l_p > 0.0)) {
    throw InvalidArgument("problem '" + name_ + "': l_p must be positive");
  }
  if (const auto* gen = std::get_if<GeneralInfo>(&*structure_); gen && !gen->eta) {
    throw missing("eta(S)");
  }

  auto impl = std::make_shared<Problem::Impl>();
  impl->name = name_;
  impl->dim = dim_;
  impl->objective = objective_;
  impl->project = project_;
  impl->det = det_;
  impl->dist = dist_;
  impl->f_star = *f_star_;
  impl->g_bound = *g_bound_;
  impl->det_g_bound = det_g_bound_.value_or(*g_bound_);
  impl->structure = *structure_;
  if (stoch_) {
    impl->stoch = stoch_;
  } else {
    impl->deterministic = true;
    impl->stoch = [det = det_](std::span<const double> w, RandomSource&, std::span<double> out) {
      det(w, out);
    };
  }
  if (sampler_) {
    impl->sampler = sampler_;
  } else {
    // Unit cube pushed through the projection.
    impl->sampler = [project = project_](RandomSource& src, std::span<double> out) {
      for (double& x : out) x = src.uniform(-1.0, 1.0);
      project(out);
    };
  }
  if (default_start_) {
    require_same_dim(dim_, default_start_->dim(), "default_start");
    impl->default_start = *default_start_;
  } else {
    impl->default_start = Point(dim_);
    project_(impl->default_start.coords());
  }
  return Problem(std::move(impl));
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ValidationReport validate_problem(const Problem& p, RandomSource& src,
                                  const ValidationOptions& options) {
  ValidationReport report;
  auto fail = [&report](std::string msg) {
    report.ok = false;
    report.failures.push_back(std::move(msg));
  };
  const double tol = options.tolerance;
  const double gap_tol = tol * std::max(1.0, std::abs(p.f_star()));

  // Points scaled toward the origin so that near-optimal regions are visited.
  auto sample_point = [&](std::uint64_t i) {
    Point w = p.sample_feasible(src);
    if (i % 2 == 1) {
      w *= std::pow(10.0, -static_cast<double>(i % 17) / 2.0);
      w = p.project(w);
    }
    return w;
  };

  double worst_g = 0.0;
  std::vector<double> probe_s;
  if (const auto* gen = std::get_if<GeneralInfo>(&p.structure())) {
    for (double s : {0.1, 0.5, 1.0}) {
      if (s < gen->s_max) probe_s.push_back(s);
    }
  }

  for (std::uint64_t i = 0; i < options.points; ++i) {
    const Point w = sample_point(i);
    const double gap = p.objective(w) - p.f_star();
    const double dist = p.dist_to_opt(w);
    if (gap < -gap_tol) fail("objective below f_star at sample " + std::to_string(i));
    if (!(dist >= 0.0)) fail("negative or NaN dist_to_opt at sample " + std::to_string(i));
    if (dist == 0.0 && gap > gap_tol) {
      fail("dist_to_opt is 0 but gap is " + fmt(gap) + " at sample " + std::to_string(i));
    }
    if (gap <= 0.0 && dist > tol) {
      fail("gap is 0 but dist_to_opt is " + fmt(dist) + " at sample " + std::to_string(i));
    }

    if (const auto* poly = std::get_if<PolyhedralInfo>(&p.structure())) {
      if (gap < poly->l_p * dist - gap_tol) {
        fail("sharpness F - F* >= l_p * dist violated at sample " + std::to_string(i));
      }
    } else {
      const auto& gen = std::get<GeneralInfo>(p.structure());
      for (double s : probe_s) {
        double eta = 0.0;
        try {
          eta = gen.eta(s);
        } catch (const InvalidArgument&) {
          continue;
        }
        if (!(eta > 0.0)) fail("eta(" + fmt(s) + ") is not positive");
        if (dist >= s && gap < eta * dist - gap_tol) {
          fail("F - F* >= eta(S) * dist violated for S = " + fmt(s) + " at sample " +
               std::to_string(i));
        }
      }
    }

    // Projection: idempotent and non-expansive on pairs that leave the set.
    Point x = p.sample_feasible(src) * src.uniform(0.0, 3.0);
    Point y = p.sample_feasible(src) * src.uniform(0.0, 3.0);
    const Point px = p.project(x);
    const Point py = p.project(y);
    if (p.project(px) != px) fail("projection not idempotent at sample " + std::to_string(i));
    if (distance(px, py) > distance(x, y) * (1.0 + tol)) {
      fail("projection expands distances at sample " + std::to_string(i));
    }

    const auto g = p.stoch_subgradient(w, src);
    worst_g = std::max(worst_g, g.norm);
  }
  if (worst_g > p.g_bound()) {
    fail("oracle norm " + fmt(worst_g) + " exceeds g_bound " + fmt(p.g_bound()));
  }

  if (p.has_deterministic_oracle() && options.oracle_draws >= 2) {
    const std::size_t n = p.dim();
    for (int probe = 0; probe < 4; ++probe) {
      const Point w = sample_point(static_cast<std::uint64_t>(probe));
      const Point g = p.det_subgradient(w);
      std::vector<double> mean(n, 0.0), m2(n, 0.0);
      for (std::uint64_t k = 0; k < options.oracle_draws; ++k) {
        const auto s = p.stoch_subgradient(w, src);
        if (s.norm > p.g_bound()) {
          fail("oracle norm " + fmt(s.norm) + " exceeds g_bound " + fmt(p.g_bound()));
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double delta = s.vector[j] - mean[j];
          mean[j] += delta / static_cast<double>(k + 1);
          m2[j] += delta * (s.vector[j] - mean[j]);
        }
      }
      const double draws = static_cast<double>(options.oracle_draws);
      for (std::size_t j = 0; j < n; ++j) {
        const double se = std::sqrt(m2[j] / (draws - 1.0) / draws);
        if (std::abs(mean[j] - g[j]) > options.stderr_slack * se + tol * (1.0 + std::abs(g[j]))) {
          fail("oracle biased at coordinate " + std::to_string(j) + ": mean " + fmt(mean[j]) +
               " vs subgradient " + fmt(g[j]));
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace stagavg
