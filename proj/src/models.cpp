#include "agora/models.hpp"

#include <cmath>
#include <stdexcept>

namespace agora {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) - y z, evaluated without overflow
double ce_loss(double z, double y) {
  return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

void check_dim(int expect, Eigen::Index got) {
  if (expect != static_cast<int>(got))
    throw std::invalid_argument("dimension mismatch");
}

}  // namespace

RandomClassifier::RandomClassifier(double p_pos, int dim) : p_pos_(p_pos), dim_(dim) {
  if (!(p_pos >= 0.0 && p_pos <= 1.0))
    throw std::invalid_argument("p_pos violates 0 ≤ p ≤ 1");
}

RandomClassifier RandomClassifier::from_dataset(const Dataset& d, int dim) {
  if (d.empty()) throw std::invalid_argument("empty dataset");
  long pos = 0;
  for (const auto& p : d.points) pos += p.y;
  return RandomClassifier(static_cast<double>(pos) / static_cast<double>(d.size()),
                          dim == 0 ? d.dim() : dim);
}

int RandomClassifier::predict(const Eigen::Ref<const Eigen::VectorXd>&, Rng& rng) const {
  return bernoulli(rng, p_pos_) ? 1 : 0;
}

int random_predict(const RandomClassifier& rc, const Eigen::Ref<const Eigen::VectorXd>& x,
                   Rng& rng) {
  return rc.predict(x, rng);
}

BallMemoryClassifier::BallMemoryClassifier(double match_radius, double fallback_p_pos,
                                           int dim)
    : match_radius_(match_radius), fallback_p_(fallback_p_pos), dim_(dim) {
  if (!(match_radius > 0.0)) throw std::invalid_argument("match_radius must be positive");
  if (!(fallback_p_pos >= 0.0 && fallback_p_pos <= 1.0))
    throw std::invalid_argument("fallback_p_pos violates 0 ≤ p ≤ 1");
}

BallMemoryClassifier BallMemoryClassifier::restore(double match_radius,
                                                   double fallback_p_pos,
                                                   bool fallback_frozen,
                                                   std::vector<LabeledPoint> memory,
                                                   int dim) {
  BallMemoryClassifier bm(match_radius, fallback_p_pos, dim);
  bm.fallback_frozen_ = fallback_frozen;
  bm.memory_ = std::move(memory);
  return bm;
}

std::pair<bool, int> BallMemoryClassifier::match(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double r2 = match_radius_ * match_radius_;
  double best = r2;
  int label = 0;
  bool found = false;
  for (const auto& e : memory_) {
    const double d2 = (e.x - x).squaredNorm();
    // <= on the first hit, then strict improvement: earliest entry wins ties
    if (d2 <= best && (!found || d2 < best)) {
      best = d2;
      label = e.y;
      found = true;
    }
  }
  return {found, label};
}

int BallMemoryClassifier::predict(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  Rng& rng) const {
  const auto [found, label] = match(x);
  if (found) return label;
  return bernoulli(rng, fallback_p_) ? 1 : 0;
}

BallMemoryClassifier memory_train(const BallMemoryClassifier& bm, const Dataset& d) {
  BallMemoryClassifier out = bm;
  if (!out.fallback_frozen_ && !d.empty()) {
    long pos = 0;
    for (const auto& p : d.points) pos += p.y;
    out.fallback_p_ = static_cast<double>(pos) / static_cast<double>(d.size());
    out.fallback_frozen_ = true;
  }
  for (const auto& p : d.points) {
    if (out.match(p.x).first) continue;
    out.memory_.push_back(p);
  }
  return out;
}

OracleSocrates::OracleSocrates(ManifoldSpec spec, double noise_rate)
    : spec_(std::move(spec)), noise_rate_(noise_rate) {
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0 / 3.0))
    throw std::invalid_argument("noise_rate violates 0 ≤ q ≤ 1/3");
}

int OracleSocrates::predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const {
  const int y = spec_.label(x);
  if (noise_rate_ == 0.0) return y;
  return bernoulli(rng, noise_rate_) ? 1 - y : y;
}

int socrates_label(const OracleSocrates& s, const Eigen::Ref<const Eigen::VectorXd>& x,
                   Rng& rng) {
  return s.predict(x, rng);
}

LogisticModel::LogisticModel(int m, Eigen::VectorXd weights)
    : m_(m), w_(std::move(weights)) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (w_.size() != m + 1) throw std::invalid_argument("logistic weights must have size m+1");
}

LogisticModel LogisticModel::zeros(int m) {
  return LogisticModel(m, Eigen::VectorXd::Zero(m + 1));
}

double LogisticModel::score(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dim(m_, x.size());
  return sigmoid(w_.head(m_).dot(x) + w_[m_]);
}

int LogisticModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng&) const {
  check_dim(m_, x.size());
  return w_.head(m_).dot(x) + w_[m_] >= 0.0 ? 1 : 0;
}

long MlpModel::weight_count(int m, int hidden) {
  return static_cast<long>(hidden) * m + hidden + hidden + 1;
}

MlpModel::MlpModel(int m, int hidden, Eigen::VectorXd weights)
    : m_(m), hidden_(hidden), w_(std::move(weights)) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (hidden < 1) throw std::invalid_argument("hidden must be at least 1");
  if (w_.size() != weight_count(m, hidden))
    throw std::invalid_argument("mlp weights have wrong size");
}

MlpModel MlpModel::init(int m, int hidden, std::uint64_t seed) {
  Rng rng = RngStream::root(seed).child("mlp_init").engine();
  const long n = weight_count(m, hidden);
  const long first_layer = static_cast<long>(hidden) * m + hidden;
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(m));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  Eigen::VectorXd w(n);
  for (long i = 0; i < n; ++i) {
    const double b = i < first_layer ? bound1 : bound2;
    w[i] = (2.0 * uniform01(rng) - 1.0) * b;
  }
  return MlpModel(m, hidden, std::move(w));
}

double MlpModel::score(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dim(m_, x.size());
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMat> W1(w_.data(), hidden_, m_);
  const auto b1 = w_.segment(static_cast<long>(hidden_) * m_, hidden_);
  const auto w2 = w_.segment(static_cast<long>(hidden_) * m_ + hidden_, hidden_);
  const double b2 = w_[w_.size() - 1];
  const Eigen::VectorXd a = ((W1 * x + b1).array().tanh()).matrix();
  return sigmoid(w2.dot(a) + b2);
}

int MlpModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng&) const {
  return score(x) >= 0.5 ? 1 : 0;
}

int model_predict(const Classifier& f, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Rng unused(0);
  return f.predict(x, unused);
}

std::pair<double, Eigen::VectorXd> logistic_loss_grad(const Eigen::VectorXd& w,
                                                      const Eigen::MatrixXd& X,
                                                      const Eigen::VectorXd& y) {
  const Eigen::Index n = X.rows();
  const Eigen::Index m = X.cols();
  if (w.size() != m + 1) throw std::invalid_argument("logistic weights must have size m+1");
  if (y.size() != n) throw std::invalid_argument("label count must match row count");
  if (n == 0) throw std::invalid_argument("empty batch");
  const Eigen::VectorXd z =
      (X * w.head(m)).array() + w[m];
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) loss += ce_loss(z[i], y[i]);
  loss /= static_cast<double>(n);
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = sigmoid(z[i]);
  const Eigen::VectorXd diff = (p - y) / static_cast<double>(n);
  Eigen::VectorXd grad(m + 1);
  grad.head(m) = X.transpose() * diff;
  grad[m] = diff.sum();
  return {loss, std::move(grad)};
}

std::pair<double, Eigen::VectorXd> mlp_loss_grad(int m, int hidden,
                                                 const Eigen::VectorXd& w,
                                                 const Eigen::MatrixXd& X,
                                                 const Eigen::VectorXd& y) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Index n = X.rows();
  if (X.cols() != m) throw std::invalid_argument("dimension mismatch");
  if (w.size() != MlpModel::weight_count(m, hidden))
    throw std::invalid_argument("mlp weights have wrong size");
  if (y.size() != n) throw std::invalid_argument("label count must match row count");
  if (n == 0) throw std::invalid_argument("empty batch");

  const long w1_size = static_cast<long>(hidden) * m;
  const Eigen::Map<const RowMat> W1(w.data(), hidden, m);
  const auto b1 = w.segment(w1_size, hidden);
  const auto w2 = w.segment(w1_size + hidden, hidden);
  const double b2 = w[w.size() - 1];

  // A: hidden x n activations
  Eigen::MatrixXd pre = W1 * X.transpose();
  pre.colwise() += b1;
  const Eigen::MatrixXd A = pre.array().tanh().matrix();
  const Eigen::VectorXd z = (A.transpose() * w2).array() + b2;

  double loss = 0.0;
  Eigen::VectorXd dz(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    loss += ce_loss(z[i], y[i]);
    dz[i] = (sigmoid(z[i]) - y[i]) / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);

  Eigen::VectorXd grad(w.size());
  // dA = w2 dz^T; dPre = dA .* (1 - A^2)
  const Eigen::MatrixXd dpre =
      (w2 * dz.transpose()).array() * (1.0 - A.array().square());
  Eigen::Map<RowMat>(grad.data(), hidden, m) = dpre * X;
  grad.segment(w1_size, hidden) = dpre.rowwise().sum();
  grad.segment(w1_size + hidden, hidden) = A * dz;
  grad[grad.size() - 1] = dz.sum();
  return {loss, std::move(grad)};
}

namespace {

nlohmann::ordered_json manifold_to_json(const ManifoldSpec& spec) {
  nlohmann::ordered_json j;
  j["shape"] = to_string(spec.shape);
  j["size"] = spec.extent;
  j["positive_fraction"] = spec.positive_fraction;
  if (spec.shape == ManifoldShape::segment) j["mu_cap"] = spec.mu;
  return j;
}

ManifoldSpec manifold_from_json(const nlohmann::ordered_json& j) {
  const ManifoldShape shape = manifold_shape_from_string(j.at("shape").get<std::string>());
  const double size = j.at("size").get<double>();
  const double p = j.at("positive_fraction").get<double>();
  switch (shape) {
    case ManifoldShape::circle: return ManifoldSpec::circle(size, p);
    case ManifoldShape::sphere: return ManifoldSpec::sphere(size, p);
    case ManifoldShape::segment:
      return ManifoldSpec::segment(size, p, j.value("mu_cap", 1e6));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

nlohmann::ordered_json save_checkpoint(const ClassifierHandle& f) {
  nlohmann::ordered_json j;
  const Classifier& c = f.get();
  j["kind"] = to_string(c.kind());
  j["m"] = c.dim();
  j["weights"] = nlohmann::ordered_json::array();
  j["architecture"] = nlohmann::ordered_json::array();
  switch (c.kind()) {
    case ClassifierKind::random: {
      const auto& rc = dynamic_cast<const RandomClassifier&>(c);
      j["p_pos"] = rc.p_pos();
      break;
    }
    case ClassifierKind::ball_memory: {
      const auto& bm = dynamic_cast<const BallMemoryClassifier&>(c);
      // memory rides in weights as flat (x..., y) records
      auto& w = j["weights"];
      for (const auto& e : bm.memory()) {
        for (Eigen::Index i = 0; i < e.x.size(); ++i) w.push_back(e.x[i]);
        w.push_back(static_cast<double>(e.y));
      }
      j["match_radius"] = bm.match_radius();
      j["p_pos"] = bm.fallback_p_pos();
      j["fallback_frozen"] = bm.fallback_frozen();
      break;
    }
    case ClassifierKind::oracle:
    case ClassifierKind::noisy_oracle: {
      const auto& s = dynamic_cast<const OracleSocrates&>(c);
      j["architecture"] = manifold_to_json(s.spec());
      j["noise_rate"] = s.noise_rate();
      break;
    }
    case ClassifierKind::logistic: {
      const auto& lm = dynamic_cast<const LogisticModel&>(c);
      for (Eigen::Index i = 0; i < lm.weights().size(); ++i)
        j["weights"].push_back(lm.weights()[i]);
      break;
    }
    case ClassifierKind::mlp: {
      const auto& mm = dynamic_cast<const MlpModel&>(c);
      for (Eigen::Index i = 0; i < mm.weights().size(); ++i)
        j["weights"].push_back(mm.weights()[i]);
      j["architecture"] = {mm.dim(), mm.hidden()};
      break;
    }
  }
  return j;
}

ClassifierHandle load_checkpoint(const nlohmann::ordered_json& j) {
  const ClassifierKind kind = classifier_kind_from_string(j.at("kind").get<std::string>());
  const int m = j.at("m").get<int>();
  switch (kind) {
    case ClassifierKind::random:
      return ClassifierHandle(
          std::make_shared<RandomClassifier>(j.at("p_pos").get<double>(), m));
    case ClassifierKind::ball_memory: {
      const auto& w = j.at("weights");
      if (m < 1 && !w.empty())
        throw std::invalid_argument("ball_memory checkpoint needs m ≥ 1");
      const std::size_t stride = static_cast<std::size_t>(m) + 1;
      if (w.size() % stride != 0)
        throw std::invalid_argument("ball_memory weights length must be a multiple of m+1");
      std::vector<LabeledPoint> memory;
      for (std::size_t i = 0; i < w.size(); i += stride) {
        LabeledPoint p;
        p.x.resize(m);
        for (int k = 0; k < m; ++k) p.x[k] = w[i + static_cast<std::size_t>(k)].get<double>();
        p.y = static_cast<int>(w[i + stride - 1].get<double>());
        memory.push_back(std::move(p));
      }
      return ClassifierHandle(std::make_shared<BallMemoryClassifier>(
          BallMemoryClassifier::restore(j.at("match_radius").get<double>(),
                                        j.at("p_pos").get<double>(),
                                        j.value("fallback_frozen", false),
                                        std::move(memory), m)));
    }
    case ClassifierKind::oracle:
    case ClassifierKind::noisy_oracle:
      return ClassifierHandle(std::make_shared<OracleSocrates>(
          manifold_from_json(j.at("architecture")), j.value("noise_rate", 0.0)));
    case ClassifierKind::logistic: {
      const auto& w = j.at("weights");
      Eigen::VectorXd wv(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) wv[static_cast<long>(i)] = w[i].get<double>();
      return ClassifierHandle(std::make_shared<LogisticModel>(m, std::move(wv)));
    }
    case ClassifierKind::mlp: {
      const auto& arch = j.at("architecture");
      const int hidden = arch.at(1).get<int>();
      const auto& w = j.at("weights");
      Eigen::VectorXd wv(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) wv[static_cast<long>(i)] = w[i].get<double>();
      return ClassifierHandle(std::make_shared<MlpModel>(m, hidden, std::move(wv)));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace agora
