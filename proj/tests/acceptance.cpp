// Acceptance gate: ten product criteria, one pass/fail line each, nonzero
// exit iff any fail. Monte Carlo criteria reuse the named verify suites at
// their documented trial counts; numeric criteria check against the
// high-precision reference in mp_oracle.hpp.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "agora/agora.hpp"
#include "agora/harness.hpp"
#include "agora/models.hpp"
#include "agora/trainer.hpp"
#include "mp_oracle.hpp"

using namespace agora;

namespace {

int failures = 0;

void report(int num, const char* label, bool ok, const std::string& detail = "") {
  std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", num, label);
  if (!ok && !detail.empty()) std::printf("     %s\n", detail.c_str());
  if (!ok) ++failures;
}

void criterion_suite(int num, const char* label, const char* suite) {
  const SuiteResult r = run_suite(suite, 0, 1, default_workers());
  std::string detail;
  for (const ClaimResult& c : r.claims)
    if (!c.pass) detail += (detail.empty() ? "" : "; ") + c.name + ": " + c.detail;
  report(num, label, r.pass(), detail);
}

bool rejects(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::invalid_argument&) {
    return true;
  }
  return false;
}

// --- criterion 7: formula fidelity against the high-precision reference ---

void criterion_formulas() {
  int bad = 0;
  std::string first;
  const auto flag = [&](const char* what, long i) {
    ++bad;
    if (first.empty()) first = std::string(what) + " at grid point " + std::to_string(i);
  };

  for (long i = 0; i < 100; ++i) {
    const double size = 0.5 + 0.375 * static_cast<double>(i % 5);
    ManifoldSpec spec = ManifoldSpec::circle(size, 0.5);
    mp_oracle::Surface surf = mp_oracle::circle(size);
    if (i % 3 == 1) {
      spec = ManifoldSpec::sphere(size, 0.5);
      surf = mp_oracle::sphere(size);
    } else if (i % 3 == 2) {
      spec = ManifoldSpec::segment(size, 0.5, 2.0);
      surf = mp_oracle::segment(size, 2.0);
    }
    const double frac = (static_cast<double>(i) + 0.5) / 100.0;
    const double rho = 0.98 * frac * spec.mu / 2.0;
    const double delta = 0.05 + 0.004 * static_cast<double>(i);

    if (mp_oracle::rel_err(beta(spec, rho), mp_oracle::beta(surf, rho)) > 1e-12)
      flag("beta", i);
    if (niyogi_smale_n(spec, rho, delta) != mp_oracle::niyogi_smale_n(surf, rho, delta))
      flag("niyogi_smale_n", i);
    if (mp_oracle::rel_err(lambda_rho(rho, spec.mu), mp_oracle::lambda_rho(rho, spec.mu)) >
        1e-12)
      flag("lambda_rho", i);
    if (mp_oracle::rel_err(epsilon_bound(spec, rho), mp_oracle::epsilon_bound(surf, rho)) >
        1e-12)
      flag("epsilon_bound", i);
    if (mp_oracle::rel_err(d_bound(spec, rho), mp_oracle::d_bound(surf, rho)) > 1e-12)
      flag("d_bound", i);

    const double hd = 0.5 + 0.1 * static_cast<double>(i);
    const double heps = 0.01 + 0.004 * static_cast<double>(i);
    const double hc = std::log(2.0) * (1.0 + static_cast<double>(i) / 50.0);
    if (hanneke_n(hd, heps, delta, hc) != mp_oracle::hanneke_n(hd, heps, delta, hc))
      flag("hanneke_n", i);

    const long sx = 10 + 7 * i;
    const long sd = (i % 4 == 0) ? 0 : 3 * i;
    const double kc = 0.05 + 0.009 * static_cast<double>(i);
    const long se = 50 + 11 * i;
    if (kappa_bound(sx, sd, kc, se, delta) != mp_oracle::kappa_bound(sx, sd, kc, se, delta))
      flag("kappa_bound", i);

    const long k = i + 1;
    if (mp_oracle::rel_err(per_iteration_floor(k), mp_oracle::per_iteration_floor(k)) >
        1e-12)
      flag("per_iteration_floor", i);
    const auto [rl, rh] = approx_ratio_bound(k);
    const auto [ol, oh] = mp_oracle::approx_ratio_bound(k);
    if (mp_oracle::rel_err(rl, ol) > 1e-12 || mp_oracle::rel_err(rh, oh) > 1e-12)
      flag("approx_ratio_bound", i);

    const long tc = 1 + i % 7;
    const long ts = 1 + i % 5;
    const long ds = 10 + 3 * i;
    const long es = 5 + 2 * i;
    const double sb = 0.25 * static_cast<double>(i % 9);
    const bool square = (i % 2) == 1;
    const RuntimePrediction p = runtime_bound_poly(
        tc, ts, ds, es, sb,
        square ? std::function<double(double)>([](double x) { return x * x; })
               : std::function<double(double)>([](double x) { return x; }));
    const mp_oracle::RuntimeTerms op = mp_oracle::runtime_bound_poly(
        tc, ts, ds, es, sb,
        square ? std::function<mp_oracle::Real(mp_oracle::Real)>(
                     [](mp_oracle::Real x) { return x * x; })
               : std::function<mp_oracle::Real(mp_oracle::Real)>(
                     [](mp_oracle::Real x) { return x; }));
    if (mp_oracle::rel_err(p.total, op.total) > 1e-12 ||
        mp_oracle::rel_err(p.train_term, op.train) > 1e-12 ||
        mp_oracle::rel_err(p.sort_select_term, op.sort_select) > 1e-12 ||
        mp_oracle::rel_err(p.socrates_term, op.socrates) > 1e-12)
      flag("runtime_bound_poly", i);

    const double fb = 0.5 + 0.25 * static_cast<double>(i % 6);
    const long bm = 1 + i % 32;
    const double L = 0.25 * static_cast<double>(1 + i % 4);
    const double G = 0.5 + 0.5 * static_cast<double>(i % 3);
    const double zeta = 0.25 + 0.25 * static_cast<double>(i % 5);
    const RuntimePrediction s = runtime_bound_sgd(tc, ts, es, sb, fb, bm, L, G, zeta);
    const mp_oracle::RuntimeTerms os =
        mp_oracle::runtime_bound_sgd(tc, ts, es, sb, fb, bm, L, G, zeta);
    if (mp_oracle::rel_err(s.total, os.total) > 1e-12) flag("runtime_bound_sgd", i);
  }

  // documented range checks must reject out-of-range input
  const ManifoldSpec circ = ManifoldSpec::circle(1.0, 0.5);
  const auto ident = [](double x) { return x; };
  const std::vector<std::pair<const char*, std::function<void()>>> rejections = {
      {"beta rho=0", [&] { beta(circ, 0.0); }},
      {"beta rho>=mu/2", [&] { beta(circ, 0.5); }},
      {"niyogi delta=0", [&] { niyogi_smale_n(circ, 0.2, 0.0); }},
      {"niyogi delta>1/2", [&] { niyogi_smale_n(circ, 0.2, 0.6); }},
      {"lambda rho=0", [&] { lambda_rho(0.0, 1.0); }},
      {"lambda mu=0", [&] { lambda_rho(0.2, 0.0); }},
      {"epsilon rho out", [&] { epsilon_bound(circ, 0.5); }},
      {"d_bound rho out", [&] { d_bound(circ, 0.5); }},
      {"hanneke c<ln2", [&] { hanneke_n(4.0, 0.1, 0.1, 0.5); }},
      {"hanneke eps>1/2", [&] { hanneke_n(4.0, 0.6, 0.1, 1.0); }},
      {"hanneke eps=0", [&] { hanneke_n(4.0, 0.0, 0.1, 1.0); }},
      {"hanneke d<=0", [&] { hanneke_n(0.0, 0.1, 0.1, 1.0); }},
      {"kappa c=0", [&] { kappa_bound(10, 0, 0.0, 10, 0.1); }},
      {"kappa c=1", [&] { kappa_bound(10, 0, 1.0, 10, 0.1); }},
      {"kappa negative size", [&] { kappa_bound(-1, 0, 0.5, 10, 0.1); }},
      {"kappa empty E", [&] { kappa_bound(10, 0, 0.5, 0, 0.1); }},
      {"floor k=0", [&] { per_iteration_floor(0); }},
      {"ratio k=0", [&] { approx_ratio_bound(0); }},
      {"poly theta_count=0", [&] { runtime_bound_poly(0, 1, 1, 1, 1.0, ident); }},
      {"poly s_bar<0", [&] { runtime_bound_poly(1, 1, 1, 1, -1.0, ident); }},
      {"poly t_f null", [&] { runtime_bound_poly(1, 1, 1, 1, 1.0, nullptr); }},
      {"sgd f_bar<0", [&] { runtime_bound_sgd(1, 1, 1, 1.0, -1.0, 1, 1, 1, 1); }},
      {"sgd batch_max=0", [&] { runtime_bound_sgd(1, 1, 1, 1.0, 1.0, 0, 1, 1, 1); }},
      {"sgd L=0", [&] { runtime_bound_sgd(1, 1, 1, 1.0, 1.0, 1, 0, 1, 1); }},
      {"sgd G=0", [&] { runtime_bound_sgd(1, 1, 1, 1.0, 1.0, 1, 1, 0, 1); }},
      {"sgd zeta=0", [&] { runtime_bound_sgd(1, 1, 1, 1.0, 1.0, 1, 1, 1, 0); }},
  };
  std::string missed;
  for (const auto& [name, fn] : rejections)
    if (!rejects(fn)) {
      ++bad;
      if (missed.empty()) missed = name;
    }

  std::string detail;
  if (bad > 0)
    detail = std::to_string(bad) + " mismatches; first: " + (first.empty() ? missed : first);
  report(7, "formula fidelity against the high-precision reference", bad == 0, detail);
}

// --- criterion 9: byte-identical traces across worker counts ---

void criterion_determinism() {
  bool ok = true;
  std::string detail;
  for (double noise : {0.0, 1.0 / 3.0}) {
    ExperimentConfig c = idealized_config(1, noise);
    std::string base;
    for (int w : {1, 4, 8}) {
      c.workers = w;
      const std::string t = trace_csv(run_agora(build_input(c)).trace);
      if (base.empty()) {
        base = t;
      } else if (t != base) {
        ok = false;
        detail = "trace diverged at workers=" + std::to_string(w) +
                 " noise=" + std::to_string(noise);
      }
    }
  }
  report(9, "byte-identical traces for workers 1, 4, 8", ok, detail);
}

// --- criterion 10: analytic gradients and the separable benchmark ---

double grad_rel_err(const std::function<double(const Eigen::VectorXd&)>& loss,
                    const Eigen::VectorXd& w, const Eigen::VectorXd& grad) {
  const double h = 1e-5;
  double worst = 0.0;
  for (long i = 0; i < w.size(); ++i) {
    Eigen::VectorXd wp = w;
    Eigen::VectorXd wm = w;
    wp[i] += h;
    wm[i] -= h;
    const double fd = (loss(wp) - loss(wm)) / (2.0 * h);
    const double denom = std::max({1.0, std::abs(fd), std::abs(grad[i])});
    worst = std::max(worst, std::abs(fd - grad[i]) / denom);
  }
  return worst;
}

void criterion_gradients() {
  std::mt19937_64 g(2024);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::bernoulli_distribution bd(0.5);
  double worst = 0.0;

  for (int t = 0; t < 100; ++t) {
    const long m = 1 + t % 4;
    const long n = 1 + t % 8;
    Eigen::MatrixXd X(n, m);
    Eigen::VectorXd y(n);
    for (long r = 0; r < n; ++r) {
      for (long c = 0; c < m; ++c) X(r, c) = nd(g);
      y[r] = bd(g) ? 1.0 : 0.0;
    }
    Eigen::VectorXd w(m + 1);
    for (long i = 0; i <= m; ++i) w[i] = nd(g);
    const auto [loss, grad] = logistic_loss_grad(w, X, y);
    (void)loss;
    worst = std::max(worst, grad_rel_err(
                                [&](const Eigen::VectorXd& v) {
                                  return logistic_loss_grad(v, X, y).first;
                                },
                                w, grad));
  }

  for (int t = 0; t < 100; ++t) {
    const long m = 1 + t % 3;
    const long hidden = 1 + t % 4;
    const long n = 1 + t % 6;
    Eigen::MatrixXd X(n, m);
    Eigen::VectorXd y(n);
    for (long r = 0; r < n; ++r) {
      for (long c = 0; c < m; ++c) X(r, c) = nd(g);
      y[r] = bd(g) ? 1.0 : 0.0;
    }
    Eigen::VectorXd w(MlpModel::weight_count(static_cast<int>(m), static_cast<int>(hidden)));
    for (long i = 0; i < w.size(); ++i) w[i] = 0.5 * nd(g);
    const auto [loss, grad] = mlp_loss_grad(static_cast<int>(m), static_cast<int>(hidden), w, X, y);
    (void)loss;
    worst = std::max(
        worst, grad_rel_err(
                   [&](const Eigen::VectorXd& v) {
                     return mlp_loss_grad(static_cast<int>(m), static_cast<int>(hidden), v, X, y)
                         .first;
                   },
                   w, grad));
  }

  // margin-separated one-dimensional set: shuffling SGD must nail it
  Dataset d;
  for (int i = 0; i < 32; ++i) {
    Eigen::VectorXd x(1);
    x << 0.05 + 0.012 * i;
    d.points.push_back({x, 1});
  }
  for (int i = 0; i < 32; ++i) {
    Eigen::VectorXd x(1);
    x << 0.57 + 0.012 * i;
    d.points.push_back({x, 0});
  }
  HyperparamSet theta;
  theta.atoms = {{"eta", "1.0"}, {"batch_size", "8"}, {"seed", "3"}, {"epochs", "500"}};
  const ClassifierHandle f0(std::make_shared<LogisticModel>(LogisticModel::zeros(1)));
  const ClassifierHandle trained = train_model(f0, d, theta);
  long correct = 0;
  for (const auto& p : d.points)
    if (model_predict(trained.get(), p.x) == p.y) ++correct;
  const bool separable_ok = correct == static_cast<long>(d.size());

  const bool ok = worst <= 1e-6 && separable_ok;
  std::string detail;
  if (worst > 1e-6) detail = "worst gradient mismatch " + std::to_string(worst);
  if (!separable_ok)
    detail += std::string(detail.empty() ? "" : "; ") + "separable benchmark missed " +
              std::to_string(d.size() - static_cast<std::size_t>(correct)) + " points";
  report(10, "analytic gradients and separable convergence", ok, detail);
}

}  // namespace

int main() {
  criterion_suite(1, "per-iteration accuracy floors (suite lemma5)", "lemma5");
  criterion_suite(2, "approximation ratio bracket (suite corollary1)", "corollary1");
  criterion_suite(3, "dominance over one-shot enumeration (suite theorem2)", "theorem2");
  criterion_suite(4, "augment-retrain never hurts (suite lemma4)", "lemma4");
  criterion_suite(5, "covering sample size (suite thm1)", "thm1");
  criterion_suite(6, "perturbation cover rounds (suite lemma3)", "lemma3");
  criterion_formulas();
  criterion_suite(8, "runtime accounting within bounds (suite runtime)", "runtime");
  criterion_determinism();
  criterion_gradients();

  if (failures == 0) {
    std::printf("all 10 criteria pass\n");
    return 0;
  }
  std::printf("%d criteria failing\n", failures);
  return 1;
}
