#pragma once

// Core value types: labeled datasets, hyperparameter sets, and the
// classifier handle everything else trains and evaluates.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "agora/random.hpp"

namespace agora {

struct ManifoldSpec;  // geometry.hpp

struct LabeledPoint {
  Eigen::VectorXd x;
  int y = 0;  // 0 or 1
};

// Finite ordered sample. Order is part of the value: training consumes
// points in stored order unless a kind explicitly canonicalizes.
struct Dataset {
  std::vector<LabeledPoint> points;
  std::string id;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().x.size()); }
};

void validate_dataset(const Dataset& d);  // finite coords, labels in {0,1}, uniform dim

// Exact-coordinate identity. -0.0 is canonicalized to 0.0 so the key agrees
// with numeric equality.
std::string coord_key(const Eigen::Ref<const Eigen::VectorXd>& x);

// Set of coordinate keys for fast exact-membership tests.
class CoordSet {
 public:
  CoordSet() = default;
  explicit CoordSet(const Dataset& d);
  void insert(const Eigen::Ref<const Eigen::VectorXd>& x) { keys_.insert(coord_key(x)); }
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return keys_.count(coord_key(x)) > 0;
  }
  std::size_t size() const { return keys_.size(); }

 private:
  std::unordered_set<std::string> keys_;
};

struct HyperparamAtom {
  std::string key;
  std::string value;
  bool operator==(const HyperparamAtom&) const = default;
};

// One candidate configuration theta: a set of atoms with distinct keys plus
// a stable integer id used for deterministic tie-breaking.
struct HyperparamSet {
  std::vector<HyperparamAtom> atoms;
  int id = 0;

  bool contains(const HyperparamAtom& a) const;
  std::optional<std::string> find(const std::string& key) const;
  std::size_t size() const { return atoms.size(); }
};

void validate_hyperparam_set(const HyperparamSet& s);  // keys distinct

// The search space Theta: distinct candidate sets with distinct ids.
struct HyperparamSpace {
  std::vector<HyperparamSet> sets;
  std::size_t size() const { return sets.size(); }
};

void validate_hyperparam_space(const HyperparamSpace& sp);

enum class ClassifierKind { random, ball_memory, oracle, noisy_oracle, logistic, mlp };

std::string to_string(ClassifierKind k);
ClassifierKind classifier_kind_from_string(const std::string& s);

// Binary classifier over R^m. predict draws from rng only if the kind is
// stochastic; deterministic kinds leave rng untouched.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const = 0;
  virtual ClassifierKind kind() const = 0;
  virtual int dim() const = 0;  // 0 means any dimension
};

// Shared immutable handle. Training returns a new handle; existing handles
// are never mutated.
class ClassifierHandle {
 public:
  ClassifierHandle() = default;
  explicit ClassifierHandle(std::shared_ptr<const Classifier> p) : p_(std::move(p)) {}

  bool valid() const { return static_cast<bool>(p_); }
  const Classifier& get() const {
    if (!p_) throw std::logic_error("empty classifier handle");
    return *p_;
  }
  int predict(const Eigen::Ref<const Eigen::VectorXd>& x, Rng& rng) const {
    return get().predict(x, rng);
  }
  ClassifierKind kind() const { return get().kind(); }
  int dim() const { return get().dim(); }

 private:
  std::shared_ptr<const Classifier> p_;
};

// Empirical error of f on E: fraction of points with prediction != label.
// Throws std::invalid_argument("empty evaluation set") when E is empty.
double err(const ClassifierHandle& f, const Dataset& E, Rng& rng);

// acc = 1 - err, evaluated in one pass with the same draws.
double acc(const ClassifierHandle& f, const Dataset& E, Rng& rng);

// Monte Carlo estimate of the true error of f against the manifold's label
// rule: n_mc fresh points, labeled by the rule, scored against f.
double estimate_true_error(const ClassifierHandle& f, const ManifoldSpec& spec,
                           long n_mc, Rng& rng);

// D followed by the additions that are not already present, original order,
// first occurrence wins. Exact coordinate identity; labels do not matter
// for membership.
Dataset dataset_union_dedup(const Dataset& d, const std::vector<LabeledPoint>& additions);

// CSV with header x0,...,x{m-1},y. Coordinates round-trip exactly.
void write_dataset_csv(const Dataset& d, std::ostream& out);
Dataset read_dataset_csv(std::istream& in, const std::string& id = "");
void write_dataset_csv_file(const Dataset& d, const std::string& path);
Dataset read_dataset_csv_file(const std::string& path, const std::string& id = "");

}  // namespace agora
