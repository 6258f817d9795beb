#pragma once

// Concrete classifiers: the idealized constructions (input-ignoring random
// predictor, radius-limited memorizer, manifold oracle) and two trainable
// gradient models (logistic, one-hidden-layer tanh MLP).

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "agora/core.hpp"
#include "agora/geometry.hpp"
#include "agora/random.hpp"

#include "json.hpp"

namespace agora {

// Bernoulli(p_pos) regardless of input.
class RandomClassifier final : public Classifier {
 public:
  explicit RandomClassifier(double p_pos, int dim = 0);
  static RandomClassifier from_dataset(const Dataset& d, int dim = 0);

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const override;
  ClassifierKind kind() const override { return ClassifierKind::random; }
  int dim() const override { return dim_; }
  double p_pos() const { return p_pos_; }

 private:
  double p_pos_;
  int dim_;
};

int random_predict(const RandomClassifier& rc, const Eigen::Ref<const Eigen::VectorXd>& x,
                   Rng& rng);

// Nearest memorized entry within match_radius decides the label; otherwise
// a Bernoulli(fallback_p_pos) draw. Entries are never evicted or relabeled:
// training only appends (first write wins). The fallback rate freezes at
// the first training so later augmentation cannot perturb it.
class BallMemoryClassifier final : public Classifier {
 public:
  explicit BallMemoryClassifier(double match_radius, double fallback_p_pos = 0.5,
                                int dim = 0);
  // Checkpoint restore: adopts the entry list verbatim.
  static BallMemoryClassifier restore(double match_radius, double fallback_p_pos,
                                      bool fallback_frozen,
                                      std::vector<LabeledPoint> memory, int dim = 0);

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const override;
  ClassifierKind kind() const override { return ClassifierKind::ball_memory; }
  int dim() const override { return dim_; }

  const std::vector<LabeledPoint>& memory() const { return memory_; }
  double match_radius() const { return match_radius_; }
  double fallback_p_pos() const { return fallback_p_; }
  bool fallback_frozen() const { return fallback_frozen_; }

  // Returns prediction without the fallback draw: {matched, label}.
  std::pair<bool, int> match(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  friend BallMemoryClassifier memory_train(const BallMemoryClassifier& bm, const Dataset& d);

 private:
  std::vector<LabeledPoint> memory_;
  double match_radius_;
  double fallback_p_;
  bool fallback_frozen_ = false;
  int dim_;
};

// Appends every (x, y) of d not already within match_radius of a memory
// entry, in d order; existing entries untouched.
BallMemoryClassifier memory_train(const BallMemoryClassifier& bm, const Dataset& d);

// Ground-truth labeler: the manifold label rule, each answer independently
// flipped with probability noise_rate. noise_rate = 0 never touches the rng.
class OracleSocrates final : public Classifier {
 public:
  OracleSocrates(ManifoldSpec spec, double noise_rate = 0.0);

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const override;
  ClassifierKind kind() const override {
    return noise_rate_ == 0.0 ? ClassifierKind::oracle : ClassifierKind::noisy_oracle;
  }
  int dim() const override { return spec_.ambient_dim; }
  double noise_rate() const { return noise_rate_; }
  const ManifoldSpec& spec() const { return spec_; }

 private:
  ManifoldSpec spec_;
  double noise_rate_;
};

int socrates_label(const OracleSocrates& s, const Eigen::Ref<const Eigen::VectorXd>& x,
                   Rng& rng);

// score = sigmoid(w . [x; 1]); label 1 iff score >= 0.5.
class LogisticModel final : public Classifier {
 public:
  LogisticModel(int m, Eigen::VectorXd weights);
  static LogisticModel zeros(int m);

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const override;
  ClassifierKind kind() const override { return ClassifierKind::logistic; }
  int dim() const override { return m_; }

  double score(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  const Eigen::VectorXd& weights() const { return w_; }

 private:
  int m_;
  Eigen::VectorXd w_;  // m feature weights then bias
};

// One tanh hidden layer of width h; weights flattened as
// [W1 (h x m, row-major), b1 (h), w2 (h), b2]. label 1 iff score >= 0.5.
class MlpModel final : public Classifier {
 public:
  MlpModel(int m, int hidden, Eigen::VectorXd weights);
  // Deterministic uniform [-1/sqrt(fan_in), +1/sqrt(fan_in)] init from seed.
  static MlpModel init(int m, int hidden, std::uint64_t seed);
  static long weight_count(int m, int hidden);

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const override;
  ClassifierKind kind() const override { return ClassifierKind::mlp; }
  int dim() const override { return m_; }
  int hidden() const { return hidden_; }

  double score(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  const Eigen::VectorXd& weights() const { return w_; }

 private:
  int m_;
  int hidden_;
  Eigen::VectorXd w_;
};

int model_predict(const Classifier& f, const Eigen::Ref<const Eigen::VectorXd>& x);

// Mean logistic loss over the batch and its gradient in w.
// X is n x m (rows are points), y holds 0/1 labels.
std::pair<double, Eigen::VectorXd> logistic_loss_grad(const Eigen::VectorXd& w,
                                                      const Eigen::MatrixXd& X,
                                                      const Eigen::VectorXd& y);

std::pair<double, Eigen::VectorXd> mlp_loss_grad(int m, int hidden,
                                                 const Eigen::VectorXd& w,
                                                 const Eigen::MatrixXd& X,
                                                 const Eigen::VectorXd& y);

// Checkpoint record: {kind, m, weights, architecture, match_radius?,
// p_pos?, noise_rate?}. Memory entries and the manifold of an oracle ride
// along so a checkpoint restores a working classifier.
nlohmann::ordered_json save_checkpoint(const ClassifierHandle& f);
ClassifierHandle load_checkpoint(const nlohmann::ordered_json& j);

}  // namespace agora
