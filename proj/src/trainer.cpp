#include "agora/trainer.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>

#include "agora/models.hpp"
#include "agora/random.hpp"

namespace agora {

namespace {

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for " + key + ": " + v);
  }
  if (pos != v.size()) throw std::invalid_argument("bad value for " + key + ": " + v);
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for " + key + ": " + v);
  }
  if (pos != v.size()) throw std::invalid_argument("bad value for " + key + ": " + v);
  return out;
}

std::string require(const HyperparamSet& theta, const std::string& key) {
  const auto v = theta.find(key);
  if (!v) throw std::invalid_argument("missing hyperparameter: " + key);
  return *v;
}

bool is_gradient_kind(ClassifierKind k) {
  return k == ClassifierKind::logistic || k == ClassifierKind::mlp;
}

ClassifierHandle sgd_train(const ClassifierHandle& f, const Dataset& D,
                           const TrainConfig& cfg) {
  const int m = f.dim();
  if (D.dim() != m) throw std::invalid_argument("dimension mismatch");

  const auto order = canonical_order(D);
  const Eigen::Index n = static_cast<Eigen::Index>(D.size());
  Eigen::MatrixXd X(n, m);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X.row(i) = D.points[order[static_cast<std::size_t>(i)]].x;
    y[i] = D.points[order[static_cast<std::size_t>(i)]].y;
  }

  const bool mlp = f.kind() == ClassifierKind::mlp;
  const int hidden = mlp ? dynamic_cast<const MlpModel&>(f.get()).hidden() : 0;
  Eigen::VectorXd w = mlp ? MlpModel::init(m, hidden, cfg.seed).weights()
                          : Eigen::VectorXd::Zero(m + 1);

  const RngStream shuffle = RngStream::root(cfg.seed).child("shuffle");
  const Eigen::Index B = static_cast<Eigen::Index>(cfg.batch_size);
  for (long e = 0; e < cfg.epochs; ++e) {
    Rng erng = shuffle.child(static_cast<std::uint64_t>(e)).engine();
    const auto perm = permutation(static_cast<std::size_t>(n), erng);
    for (Eigen::Index start = 0; start < n; start += B) {
      const Eigen::Index len = std::min(B, n - start);
      Eigen::MatrixXd Xb(len, m);
      Eigen::VectorXd yb(len);
      for (Eigen::Index i = 0; i < len; ++i) {
        const auto src = perm[static_cast<std::size_t>(start + i)];
        Xb.row(i) = X.row(static_cast<Eigen::Index>(src));
        yb[i] = y[static_cast<Eigen::Index>(src)];
      }
      const auto [loss, grad] = mlp ? mlp_loss_grad(m, hidden, w, Xb, yb)
                                    : logistic_loss_grad(w, Xb, yb);
      (void)loss;
      w -= cfg.eta * grad;
    }
  }

  if (mlp)
    return ClassifierHandle(std::make_shared<MlpModel>(m, hidden, std::move(w)));
  return ClassifierHandle(std::make_shared<LogisticModel>(m, std::move(w)));
}

}  // namespace

TrainConfig decode_theta(const HyperparamSet& theta) {
  TrainConfig cfg;
  cfg.eta = parse_double("eta", require(theta, "eta"));
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  cfg.batch_size = static_cast<long>(parse_int("batch_size", require(theta, "batch_size")));
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  cfg.seed = static_cast<std::uint64_t>(parse_int("seed", require(theta, "seed")));
  cfg.epochs = static_cast<long>(parse_int("epochs", require(theta, "epochs")));
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  for (const auto& a : theta.atoms) {
    if (a.key == "eta" || a.key == "batch_size" || a.key == "seed" || a.key == "epochs")
      continue;
    if (a.key == "L") {
      cfg.L = parse_double("L", a.value);
      if (!(cfg.L > 0.0)) throw std::invalid_argument("L must be positive");
      continue;
    }
    if (a.key == "G") {
      cfg.G = parse_double("G", a.value);
      if (!(cfg.G > 0.0)) throw std::invalid_argument("G must be positive");
      continue;
    }
    cfg.extra.push_back(a);
  }
  return cfg;
}

ClassifierHandle train_model(const ClassifierHandle& f, const Dataset& D,
                             const HyperparamSet& theta) {
  if (D.empty()) throw std::invalid_argument("empty training set");
  switch (f.kind()) {
    case ClassifierKind::random:
      return ClassifierHandle(std::make_shared<RandomClassifier>(
          RandomClassifier::from_dataset(D, f.dim())));
    case ClassifierKind::ball_memory:
      return ClassifierHandle(std::make_shared<BallMemoryClassifier>(
          memory_train(dynamic_cast<const BallMemoryClassifier&>(f.get()), D)));
    case ClassifierKind::oracle:
    case ClassifierKind::noisy_oracle:
      return f;
    case ClassifierKind::logistic:
    case ClassifierKind::mlp:
      return sgd_train(f, D, decode_theta(theta));
  }
  throw std::logic_error("unreachable");
}

long measure_train_steps(const ClassifierHandle& f, const Dataset& D,
                         const HyperparamSet& theta) {
  if (D.empty()) throw std::invalid_argument("empty training set");
  if (is_gradient_kind(f.kind()))
    return decode_theta(theta).epochs * static_cast<long>(D.size());
  if (f.kind() == ClassifierKind::oracle || f.kind() == ClassifierKind::noisy_oracle)
    return 0;
  return static_cast<long>(D.size());
}

std::vector<std::size_t> canonical_order(const Dataset& d) {
  std::vector<std::size_t> idx(d.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = d.points[a];
    const auto& pb = d.points[b];
    for (Eigen::Index i = 0; i < pa.x.size(); ++i) {
      if (pa.x[i] < pb.x[i]) return true;
      if (pa.x[i] > pb.x[i]) return false;
    }
    return pa.y < pb.y;
  });
  return idx;
}

}  // namespace agora
