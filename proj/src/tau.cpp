#include "agora/tau.hpp"

#include <cmath>
#include <stdexcept>

namespace agora {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Largest angular offset whose chord is still <= r: 2 asin(r / 2R).
double arc_for_chord(double r, double R) {
  const double s = r / (2.0 * R);
  if (s >= 1.0) return 3.14159265358979323846264338327950288;
  return 2.0 * std::asin(s);
}

Eigen::VectorXd faithful_draw(const TauFunction& tf, const Eigen::Ref<const Eigen::VectorXd>& x,
                              Rng& rng) {
  const ManifoldSpec& spec = tf.spec;
  const double r = tf.radius();
  switch (spec.shape) {
    case ManifoldShape::circle: {
      const double R = spec.extent;
      const double dmax = arc_for_chord(r, R);
      const double base = std::atan2(x[1], x[0]);
      const double off = (2.0 * uniform01(rng) - 1.0) * dmax;
      Eigen::VectorXd out(2);
      out << R * std::cos(base + off), R * std::sin(base + off);
      return out;
    }
    case ManifoldShape::sphere: {
      const double R = spec.extent;
      const double tmax = arc_for_chord(r, R);
      // uniform on the geodesic cap: cos t uniform in [cos tmax, 1]
      const double ct = 1.0 - uniform01(rng) * (1.0 - std::cos(tmax));
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double psi = kTwoPi * uniform01(rng);
      const Eigen::Vector3d n = Eigen::Vector3d(x[0], x[1], x[2]).normalized();
      // frame orthogonal to n, seeded from its least-aligned axis
      int least = 0;
      for (int i = 1; i < 3; ++i)
        if (std::abs(n[i]) < std::abs(n[least])) least = i;
      const Eigen::Vector3d e1 = n.cross(Eigen::Vector3d::Unit(least)).normalized();
      const Eigen::Vector3d e2 = n.cross(e1);
      const Eigen::Vector3d out =
          R * (ct * n + st * (std::cos(psi) * e1 + std::sin(psi) * e2));
      return out;
    }
    case ManifoldShape::segment: {
      const double L = spec.extent;
      const double lo = std::max(0.0, x[0] - r);
      const double hi = std::min(L, x[0] + r);
      if (!(hi > lo)) throw std::runtime_error("tau support exhausted");
      Eigen::VectorXd out(1);
      out << lo + (hi - lo) * uniform01(rng);
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd ambient_draw(const TauFunction& tf, const Eigen::Ref<const Eigen::VectorXd>& x,
                             Rng& rng) {
  const int n = static_cast<int>(x.size());
  // uniform in the ball: Gaussian direction, radius r * u^{1/n}
  Eigen::VectorXd dir(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) dir[i] = normal01(rng);
    norm = dir.norm();
  } while (norm == 0.0);
  const double rad = tf.radius() * std::pow(uniform01(rng), 1.0 / static_cast<double>(n));
  return x + (rad / norm) * dir;
}

}  // namespace

std::string to_string(TauMode m) {
  return m == TauMode::faithful ? "faithful" : "ambient";
}

TauMode tau_mode_from_string(const std::string& s) {
  if (s == "faithful") return TauMode::faithful;
  if (s == "ambient") return TauMode::ambient;
  throw std::invalid_argument("unknown tau mode: " + s);
}

TauFunction::TauFunction(double rho_, TauMode mode_, ManifoldSpec spec_, int max_rejections_)
    : rho(rho_), mode(mode_), spec(std::move(spec_)), max_rejections(max_rejections_) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (max_rejections < 1) throw std::invalid_argument("max_rejections must be at least 1");
}

Eigen::VectorXd tau_sample(const TauFunction& tf, const Eigen::Ref<const Eigen::VectorXd>& x,
                           Rng& rng) {
  for (int attempt = 0; attempt < tf.max_rejections; ++attempt) {
    Eigen::VectorXd out = tf.mode == TauMode::faithful ? faithful_draw(tf, x, rng)
                                                       : ambient_draw(tf, x, rng);
    if (!(out.array() == x.array()).all()) return out;
  }
  throw std::runtime_error("tau support exhausted");
}

std::vector<Eigen::VectorXd> build_M(const ClassifierHandle& f_best, const Dataset& E,
                                     const TauFunction& tf, RngStream stream,
                                     long* dropped_out) {
  const CoordSet e_coords(E);
  Rng predict_rng = stream.child("predict").engine();
  const RngStream tau_stream = stream.child("tau");
  std::vector<Eigen::VectorXd> m_set;
  long dropped = 0;
  for (std::size_t i = 0; i < E.points.size(); ++i) {
    const auto& p = E.points[i];
    if (f_best.predict(p.x, predict_rng) == p.y) continue;
    Rng tau_rng = tau_stream.child(static_cast<std::uint64_t>(i)).engine();
    bool kept = false;
    for (int attempt = 0; attempt < tf.max_rejections; ++attempt) {
      Eigen::VectorXd cand = tau_sample(tf, p.x, tau_rng);
      if (e_coords.contains(cand)) continue;
      m_set.push_back(std::move(cand));
      kept = true;
      break;
    }
    if (!kept) ++dropped;
  }
  if (dropped_out) *dropped_out = dropped;
  return m_set;
}

std::vector<Eigen::VectorXd> generate_E_tilde(const Dataset& E, const TauFunction& tf,
                                              long kappa, RngStream stream) {
  if (kappa < 1) throw std::invalid_argument("kappa must be at least 1");
  const CoordSet e_coords(E);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(kappa) * E.points.size());
  for (long j = 0; j < kappa; ++j) {
    const RngStream round = stream.child(static_cast<std::uint64_t>(j));
    for (std::size_t i = 0; i < E.points.size(); ++i) {
      Rng rng = round.child(static_cast<std::uint64_t>(i)).engine();
      for (int attempt = 0; attempt < tf.max_rejections; ++attempt) {
        Eigen::VectorXd cand = tau_sample(tf, E.points[i].x, rng);
        if (e_coords.contains(cand)) continue;
        out.push_back(std::move(cand));
        break;
      }
    }
  }
  return out;
}

}  // namespace agora
