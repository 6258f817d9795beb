#include "agora/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace agora {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

void check_rho_range(double rho, double mu) {
  if (!(rho > 0.0 && rho < mu / 2.0))
    throw std::invalid_argument("rho violates 0 < ρ < μ/2");
}

void check_delta_range(double delta) {
  if (!(delta > 0.0 && delta <= 0.5))
    throw std::invalid_argument("delta violates 0 < δ ≤ 1/2");
}

// vol(B^m_rho) = pi^{m/2} rho^m / Gamma(m/2 + 1)
double ball_volume(int m, double rho) {
  return std::pow(kPi, m / 2.0) * std::pow(rho, m) / std::tgamma(m / 2.0 + 1.0);
}

}  // namespace

std::string to_string(ManifoldShape s) {
  switch (s) {
    case ManifoldShape::circle: return "circle";
    case ManifoldShape::sphere: return "sphere";
    case ManifoldShape::segment: return "segment";
  }
  throw std::logic_error("unreachable");
}

ManifoldShape manifold_shape_from_string(const std::string& s) {
  if (s == "circle") return ManifoldShape::circle;
  if (s == "sphere") return ManifoldShape::sphere;
  if (s == "segment") return ManifoldShape::segment;
  throw std::invalid_argument("unknown manifold shape: " + s);
}

ManifoldSpec ManifoldSpec::circle(double R, double positive_fraction) {
  ManifoldSpec s;
  s.shape = ManifoldShape::circle;
  s.extent = R;
  s.ambient_dim = 2;
  s.intrinsic_dim = 1;
  s.mu = R;
  s.volume = kTwoPi * R;
  s.positive_fraction = positive_fraction;
  s.label_rule = "angle in [0, 2*pi*p) -> 1";
  validate_manifold_spec(s);
  return s;
}

ManifoldSpec ManifoldSpec::sphere(double R, double positive_fraction) {
  ManifoldSpec s;
  s.shape = ManifoldShape::sphere;
  s.extent = R;
  s.ambient_dim = 3;
  s.intrinsic_dim = 2;
  s.mu = R;
  s.volume = 4.0 * kPi * R * R;
  s.positive_fraction = positive_fraction;
  s.label_rule = "polar cap of measure p (z >= R*(1-2p)) -> 1";
  validate_manifold_spec(s);
  return s;
}

ManifoldSpec ManifoldSpec::segment(double L, double positive_fraction, double mu_cap) {
  ManifoldSpec s;
  s.shape = ManifoldShape::segment;
  s.extent = L;
  s.ambient_dim = 1;
  s.intrinsic_dim = 1;
  s.mu = mu_cap;
  s.volume = L;
  s.positive_fraction = positive_fraction;
  s.label_rule = "x < p*L -> 1";
  validate_manifold_spec(s);
  return s;
}

void validate_manifold_spec(const ManifoldSpec& spec) {
  if (!(spec.extent > 0.0)) throw std::invalid_argument("manifold size must be positive");
  if (!(spec.mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(spec.volume > 0.0)) throw std::invalid_argument("volume must be positive");
  if (!(spec.positive_fraction > 0.0 && spec.positive_fraction <= 1.0))
    throw std::invalid_argument("positive_fraction violates 0 < p ≤ 1");
}

int ManifoldSpec::param_count() const {
  return shape == ManifoldShape::sphere ? 2 : 1;
}

Eigen::VectorXd ManifoldSpec::point_at(const double* u) const {
  Eigen::VectorXd x(ambient_dim);
  switch (shape) {
    case ManifoldShape::circle: {
      const double phi = kTwoPi * u[0];
      x << extent * std::cos(phi), extent * std::sin(phi);
      return x;
    }
    case ManifoldShape::sphere: {
      // z uniform in [-R, R] gives uniform surface area (Archimedes).
      const double z = extent * (1.0 - 2.0 * u[0]);
      const double r = std::sqrt(std::max(0.0, extent * extent - z * z));
      const double phi = kTwoPi * u[1];
      x << r * std::cos(phi), r * std::sin(phi), z;
      return x;
    }
    case ManifoldShape::segment: {
      x << extent * u[0];
      return x;
    }
  }
  throw std::logic_error("unreachable");
}

int ManifoldSpec::label(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  switch (shape) {
    case ManifoldShape::circle: {
      double phi = std::atan2(x[1], x[0]);
      if (phi < 0.0) phi += kTwoPi;
      return phi < kTwoPi * positive_fraction ? 1 : 0;
    }
    case ManifoldShape::sphere: {
      const double norm = x.norm();
      const double z = norm > 0.0 ? x[2] / norm * extent : 0.0;
      return z >= extent * (1.0 - 2.0 * positive_fraction) ? 1 : 0;
    }
    case ManifoldShape::segment:
      return x[0] < positive_fraction * extent ? 1 : 0;
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd sample_manifold_point(const ManifoldSpec& spec, Rng& rng) {
  double u[2] = {0.0, 0.0};
  const int pc = spec.param_count();
  for (int i = 0; i < pc; ++i) u[i] = uniform01(rng);
  return spec.point_at(u);
}

Dataset sample_manifold(const ManifoldSpec& spec, long n, Rng& rng,
                        const std::string& id) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  Dataset d;
  d.id = id;
  d.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    LabeledPoint p;
    p.x = sample_manifold_point(spec, rng);
    p.y = spec.label(p.x);
    d.points.push_back(std::move(p));
  }
  return d;
}

Eigen::VectorXd sample_manifold_point_in(const ManifoldSpec& spec, double lo,
                                         double hi, Rng& rng) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0))
    throw std::invalid_argument("region violates 0 ≤ lo < hi ≤ 1");
  double u[2] = {0.0, 0.0};
  u[0] = lo + (hi - lo) * uniform01(rng);
  if (spec.param_count() > 1) u[1] = uniform01(rng);
  return spec.point_at(u);
}

Dataset sample_manifold_region(const ManifoldSpec& spec, long n, double lo,
                               double hi, Rng& rng, const std::string& id) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  Dataset d;
  d.id = id;
  d.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    LabeledPoint p;
    p.x = sample_manifold_point_in(spec, lo, hi, rng);
    p.y = spec.label(p.x);
    d.points.push_back(std::move(p));
  }
  return d;
}

double beta(const ManifoldSpec& spec, double rho) {
  check_rho_range(rho, spec.mu);
  const int m = spec.intrinsic_dim;
  const double c = std::cos(std::asin(rho / (2.0 * spec.mu)));
  return spec.volume / (std::pow(c, m) * ball_volume(m, rho));
}

long niyogi_smale_n(const ManifoldSpec& spec, double rho, double delta) {
  check_rho_range(rho, spec.mu);
  check_delta_range(delta);
  const double rhs =
      beta(spec, rho / 4.0) * (std::log(beta(spec, rho / 8.0)) + std::log(1.0 / delta));
  // smallest integer strictly greater than rhs
  return static_cast<long>(std::floor(rhs)) + 1;
}

double lambda_rho(double rho, double mu) {
  check_rho_range(rho, mu);
  return (rho * std::sqrt(kPi) / 4.0) *
         std::sqrt(1.0 - rho * rho / (64.0 * mu * mu));
}

double epsilon_bound(const ManifoldSpec& spec, double rho) {
  check_rho_range(rho, spec.mu);
  const int m = spec.intrinsic_dim;
  const double lam = lambda_rho(rho, spec.mu);
  return std::sqrt(std::pow(lam, m) / (std::tgamma(m / 2.0 + 1.0) * spec.volume));
}

double d_bound(const ManifoldSpec& spec, double rho) {
  check_rho_range(rho, spec.mu);
  const int m = spec.intrinsic_dim;
  const double lam = lambda_rho(rho, spec.mu);
  const double q = rho * rho / (spec.mu * spec.mu);
  const double inner = std::pow(2.0, m) * std::pow((64.0 - q) / (256.0 - q), m / 2.0) *
                       std::tgamma(m / 2.0 + 1.0) * spec.volume / std::pow(lam, m);
  return std::log(inner);
}

long hanneke_n(double d, double epsilon, double delta, double c) {
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("epsilon violates 0 < ε ≤ 1/2");
  check_delta_range(delta);
  if (!(c >= std::log(2.0))) throw std::invalid_argument("c must be at least ln(2)");
  const double v = c * (d + std::log(1.0 / delta)) / (epsilon * epsilon);
  return static_cast<long>(std::ceil(v));
}

long kappa_bound(long size_X, long size_Delta, double c_frac, long size_E,
                 double delta) {
  if (size_X < 0 || size_Delta < 0)
    throw std::invalid_argument("set sizes must be nonnegative");
  if (!(c_frac > 0.0 && c_frac < 1.0))
    throw std::invalid_argument("c violates 0 < c < 1");
  if (size_E < 1) throw std::invalid_argument("size_E must be at least 1");
  check_delta_range(delta);
  const double denom =
      static_cast<double>(size_X) * (1.0 - c_frac) + 2.0 * static_cast<double>(size_Delta);
  if (!(denom > 0.0)) throw std::invalid_argument("kappa denominator must be positive");
  const double v = (static_cast<double>(size_X + size_Delta) / denom) *
                   std::log(static_cast<double>(size_E) / delta);
  return static_cast<long>(std::ceil(v));
}

std::vector<Eigen::VectorXd> manifold_mesh(const ManifoldSpec& spec, long mesh_n) {
  if (mesh_n < 1) throw std::invalid_argument("mesh_n must be at least 1");
  std::vector<Eigen::VectorXd> mesh;
  mesh.reserve(static_cast<std::size_t>(mesh_n));
  // Golden-ratio offset in the second parameter gives an equidistributed
  // (Fibonacci) lattice on the sphere; redundant for one-parameter shapes.
  constexpr double kGolden = 0.61803398874989484820458683436563812;
  for (long i = 0; i < mesh_n; ++i) {
    const double u0 = (static_cast<double>(i) + 0.5) / static_cast<double>(mesh_n);
    const double u1 = std::fmod(static_cast<double>(i) * kGolden, 1.0);
    const double u[2] = {u0, u1};
    mesh.push_back(spec.point_at(u));
  }
  return mesh;
}

CoverResult cover_check(const std::vector<Eigen::VectorXd>& points,
                        const ManifoldSpec& spec, double rho, long mesh_n) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (mesh_n < 100) throw std::invalid_argument("mesh_n must be at least 100");
  if (points.empty()) return {false, 1.0};
  const auto mesh = manifold_mesh(spec, mesh_n);
  const double r2 = rho * rho;
  long uncovered = 0;
  for (const auto& mp : mesh) {
    bool hit = false;
    for (const auto& p : points) {
      if ((mp - p).squaredNorm() <= r2) {
        hit = true;
        break;
      }
    }
    if (!hit) ++uncovered;
  }
  return {uncovered == 0,
          static_cast<double>(uncovered) / static_cast<double>(mesh_n)};
}

BoundsReport make_bounds_report(const ManifoldSpec& spec, double rho, double delta,
                                long e_size, double c_frac, long size_delta) {
  BoundsReport r;
  r.rho = rho;
  r.delta = delta;
  r.beta_q = beta(spec, rho);
  r.lambda_rho = lambda_rho(rho, spec.mu);
  r.n_min = niyogi_smale_n(spec, rho, delta);
  r.epsilon_min = epsilon_bound(spec, rho);
  r.d_min = d_bound(spec, rho);
  r.kappa_min = kappa_bound(e_size, size_delta, c_frac, e_size, delta);
  return r;
}

}  // namespace agora
