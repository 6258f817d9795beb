#pragma once

// Synthetic manifolds with known condition number, volume, and label rule,
// uniform samplers over them, and the closed-form sample-complexity bounds.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "agora/core.hpp"
#include "agora/random.hpp"

namespace agora {

enum class ManifoldShape { circle, sphere, segment };

std::string to_string(ManifoldShape s);
ManifoldShape manifold_shape_from_string(const std::string& s);

// A manifold is parametrized by points u in [0,1)^param_count mapped
// area-uniformly onto the surface; samplers and the deterministic mesh both
// go through point_at so tests can force exact locations.
struct ManifoldSpec {
  ManifoldShape shape = ManifoldShape::circle;
  double extent = 1.0;  // R for circle/sphere, L for segment
  int ambient_dim = 2;
  int intrinsic_dim = 1;  // m
  double mu = 1.0;
  double volume = 0.0;
  double positive_fraction = 0.5;  // p: measure fraction labeled 1
  std::string label_rule;

  static ManifoldSpec circle(double R, double positive_fraction = 0.5);
  static ManifoldSpec sphere(double R, double positive_fraction = 0.5);
  // A straight segment has infinite reach; mu is capped at a configured
  // finite value to keep the bound formulas evaluable.
  static ManifoldSpec segment(double L, double positive_fraction = 0.5,
                              double mu_cap = 1e6);

  int param_count() const;
  Eigen::VectorXd point_at(const double* u) const;
  int label(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

void validate_manifold_spec(const ManifoldSpec& spec);

Eigen::VectorXd sample_manifold_point(const ManifoldSpec& spec, Rng& rng);
Dataset sample_manifold(const ManifoldSpec& spec, long n, Rng& rng,
                        const std::string& id = "");

// Restricted-support sampler: the first parameter is confined to [lo, hi),
// giving a sub-arc (circle), band (sphere), or sub-interval (segment).
Eigen::VectorXd sample_manifold_point_in(const ManifoldSpec& spec, double lo,
                                         double hi, Rng& rng);
Dataset sample_manifold_region(const ManifoldSpec& spec, long n, double lo,
                               double hi, Rng& rng, const std::string& id = "");

// beta(rho) = vol / (cos^m(asin(rho/2mu)) vol(B^m_rho)). Valid only on
// 0 < rho < mu/2; out-of-range input throws.
double beta(const ManifoldSpec& spec, double rho);

// Smallest n with n > beta(rho/4) (ln beta(rho/8) + ln(1/delta)).
long niyogi_smale_n(const ManifoldSpec& spec, double rho, double delta);

// (rho sqrt(pi)/4) (1 - rho^2/64mu^2)^{1/2}
double lambda_rho(double rho, double mu);

// (lambda^m / (Gamma(m/2+1) vol))^{1/2}, leading constant 1
double epsilon_bound(const ManifoldSpec& spec, double rho);

// ln(2^m ((64 - rho^2/mu^2)/(256 - rho^2/mu^2))^{m/2} Gamma(m/2+1) vol / lambda^m)
double d_bound(const ManifoldSpec& spec, double rho);

// ceil(c (d + ln(1/delta)) / epsilon^2), requires c >= ln 2
long hanneke_n(double d, double epsilon, double delta, double c);

// ceil(((size_X + size_Delta) / (size_X (1-c) + 2 size_Delta)) ln(size_E/delta))
long kappa_bound(long size_X, long size_Delta, double c_frac, long size_E,
                 double delta);

struct CoverResult {
  bool covered = false;
  double uncovered_fraction = 1.0;
};

// mesh_n deterministic equispaced points on the manifold.
std::vector<Eigen::VectorXd> manifold_mesh(const ManifoldSpec& spec, long mesh_n);

// covered iff every mesh point is within rho of some input point. Empty
// input is a valid query (nothing covered), not an error.
CoverResult cover_check(const std::vector<Eigen::VectorXd>& points,
                        const ManifoldSpec& spec, double rho, long mesh_n);

struct BoundsReport {
  double rho = 0;
  double delta = 0;
  double beta_q = 0;
  double lambda_rho = 0;
  long n_min = 0;
  double epsilon_min = 0;
  double d_min = 0;
  long kappa_min = 0;
};

BoundsReport make_bounds_report(const ManifoldSpec& spec, double rho, double delta,
                                long e_size, double c_frac = 0.5,
                                long size_delta = 0);

}  // namespace agora
