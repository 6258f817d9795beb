#include "agora/core.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "agora/geometry.hpp"

namespace agora {

void validate_dataset(const Dataset& d) {
  const int m = d.dim();
  for (const auto& p : d.points) {
    if (p.x.size() != m)
      throw std::invalid_argument("dataset has mixed dimensions");
    if (!p.x.allFinite())
      throw std::invalid_argument("dataset has non-finite coordinates");
    if (p.y != 0 && p.y != 1)
      throw std::invalid_argument("dataset labels must be 0 or 1");
  }
}

std::string coord_key(const Eigen::Ref<const Eigen::VectorXd>& x) {
  std::string key(static_cast<std::size_t>(x.size()) * sizeof(double), '\0');
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double v = x[i];
    if (v == 0.0) v = 0.0;  // -0.0 and 0.0 compare equal, share one key
    std::memcpy(key.data() + static_cast<std::size_t>(i) * sizeof(double), &v, sizeof(double));
  }
  return key;
}

CoordSet::CoordSet(const Dataset& d) {
  for (const auto& p : d.points) keys_.insert(coord_key(p.x));
}

bool HyperparamSet::contains(const HyperparamAtom& a) const {
  for (const auto& b : atoms)
    if (b == a) return true;
  return false;
}

std::optional<std::string> HyperparamSet::find(const std::string& key) const {
  for (const auto& a : atoms)
    if (a.key == key) return a.value;
  return std::nullopt;
}

void validate_hyperparam_set(const HyperparamSet& s) {
  for (std::size_t i = 0; i < s.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < s.atoms.size(); ++j)
      if (s.atoms[i].key == s.atoms[j].key)
        throw std::invalid_argument("duplicate hyperparameter key: " + s.atoms[i].key);
}

void validate_hyperparam_space(const HyperparamSpace& sp) {
  for (const auto& s : sp.sets) validate_hyperparam_set(s);
  for (std::size_t i = 0; i < sp.sets.size(); ++i)
    for (std::size_t j = i + 1; j < sp.sets.size(); ++j) {
      if (sp.sets[i].id == sp.sets[j].id)
        throw std::invalid_argument("duplicate hyperparameter set id");
      if (sp.sets[i].atoms == sp.sets[j].atoms)
        throw std::invalid_argument("duplicate hyperparameter set");
    }
}

std::string to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::random: return "random";
    case ClassifierKind::ball_memory: return "ball_memory";
    case ClassifierKind::oracle: return "oracle";
    case ClassifierKind::noisy_oracle: return "noisy_oracle";
    case ClassifierKind::logistic: return "logistic";
    case ClassifierKind::mlp: return "mlp";
  }
  throw std::logic_error("unreachable");
}

ClassifierKind classifier_kind_from_string(const std::string& s) {
  if (s == "random") return ClassifierKind::random;
  if (s == "ball_memory") return ClassifierKind::ball_memory;
  if (s == "oracle") return ClassifierKind::oracle;
  if (s == "noisy_oracle") return ClassifierKind::noisy_oracle;
  if (s == "logistic") return ClassifierKind::logistic;
  if (s == "mlp") return ClassifierKind::mlp;
  throw std::invalid_argument("unknown classifier kind: " + s);
}

double err(const ClassifierHandle& f, const Dataset& E, Rng& rng) {
  if (E.empty()) throw std::invalid_argument("empty evaluation set");
  long wrong = 0;
  for (const auto& p : E.points)
    if (f.predict(p.x, rng) != p.y) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(E.size());
}

double acc(const ClassifierHandle& f, const Dataset& E, Rng& rng) {
  return 1.0 - err(f, E, rng);
}

double estimate_true_error(const ClassifierHandle& f, const ManifoldSpec& spec,
                           long n_mc, Rng& rng) {
  if (n_mc <= 0) throw std::invalid_argument("n_mc must be positive");
  long wrong = 0;
  for (long i = 0; i < n_mc; ++i) {
    const Eigen::VectorXd x = sample_manifold_point(spec, rng);
    const int y = spec.label(x);
    if (f.predict(x, rng) != y) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(n_mc);
}

Dataset dataset_union_dedup(const Dataset& d, const std::vector<LabeledPoint>& additions) {
  Dataset out = d;
  CoordSet seen(d);
  for (const auto& p : additions) {
    if (seen.contains(p.x)) continue;
    seen.insert(p.x);
    out.points.push_back(p);
  }
  return out;
}

void write_dataset_csv(const Dataset& d, std::ostream& out) {
  const int m = d.dim();
  for (int i = 0; i < m; ++i) out << 'x' << i << ',';
  out << "y\n";
  char buf[64];
  for (const auto& p : d.points) {
    for (int i = 0; i < m; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p.x[i]);
      out << buf << ',';
    }
    out << p.y << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in, const std::string& id) {
  Dataset d;
  d.id = id;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty dataset file");
  int m = 0;
  {
    std::stringstream header(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(header, col, ',')) cols.push_back(col);
    if (cols.empty() || cols.back() != "y")
      throw std::invalid_argument("dataset header must end in y");
    m = static_cast<int>(cols.size()) - 1;
    for (int i = 0; i < m; ++i)
      if (cols[static_cast<std::size_t>(i)] != "x" + std::to_string(i))
        throw std::invalid_argument("dataset header column " + std::to_string(i) +
                                    " must be x" + std::to_string(i));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    LabeledPoint p;
    p.x.resize(m);
    for (int i = 0; i < m; ++i) {
      if (!std::getline(row, cell, ','))
        throw std::invalid_argument("dataset row has too few columns");
      std::size_t pos = 0;
      p.x[i] = std::stod(cell, &pos);
      if (pos != cell.size()) throw std::invalid_argument("bad coordinate: " + cell);
    }
    if (!std::getline(row, cell, ','))
      throw std::invalid_argument("dataset row has too few columns");
    if (cell != "0" && cell != "1")
      throw std::invalid_argument("dataset labels must be 0 or 1");
    p.y = cell == "1" ? 1 : 0;
    if (std::getline(row, cell, ','))
      throw std::invalid_argument("dataset row has too many columns");
    d.points.push_back(std::move(p));
  }
  validate_dataset(d);
  return d;
}

void write_dataset_csv_file(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_dataset_csv(d, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset_csv_file(const std::string& path, const std::string& id) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_dataset_csv(in, id.empty() ? path : id);
}

}  // namespace agora
