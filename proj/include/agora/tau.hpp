#pragma once

// Perturbation sampling: x -> x~ uniform in the radius rho/4 ball around x,
// either on the manifold (faithful) or in ambient space, plus construction
// of the misclassified set M and the kappa-round expansion of E.

#include <Eigen/Dense>
#include <vector>

#include "agora/core.hpp"
#include "agora/geometry.hpp"
#include "agora/random.hpp"

namespace agora {

enum class TauMode { faithful, ambient };

std::string to_string(TauMode m);
TauMode tau_mode_from_string(const std::string& s);

struct TauFunction {
  double rho;
  TauMode mode;
  ManifoldSpec spec;  // consulted in faithful mode only
  int max_rejections;

  TauFunction(double rho_, TauMode mode_, ManifoldSpec spec_, int max_rejections_ = 64);

  double radius() const { return rho / 4.0; }
};

// One perturbation draw: ||x~ - x|| <= rho/4 and x~ != x; faithful mode
// stays on the manifold. Throws "tau support exhausted" if max_rejections
// draws all collide with x.
Eigen::VectorXd tau_sample(const TauFunction& tf, const Eigen::Ref<const Eigen::VectorXd>& x,
                           Rng& rng);

// One tau sample per point of E misclassified by f_best, in E order.
// Samples landing exactly on an E coordinate are re-drawn; a point whose
// draws are exhausted is dropped (counted in dropped_out), not fatal.
// Streams: prediction uses stream/"predict", point i uses stream/"tau"/i.
std::vector<Eigen::VectorXd> build_M(const ClassifierHandle& f_best, const Dataset& E,
                                     const TauFunction& tf, RngStream stream,
                                     long* dropped_out = nullptr);

// kappa rounds of one tau sample per E point, exact E duplicates excluded;
// at most kappa * |E| vectors, collected in (round, point) order.
std::vector<Eigen::VectorXd> generate_E_tilde(const Dataset& E, const TauFunction& tf,
                                              long kappa, RngStream stream);

}  // namespace agora
