#include "agora/agora.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "agora/models.hpp"
#include "agora/parallel.hpp"
#include "agora/trainer.hpp"

namespace agora {

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

struct ThetaResult {
  ClassifierHandle model;
  double accuracy = 0.0;
  long train_steps = 0;
};

// Train + evaluate one theta. The evaluation stream is keyed by
// (iteration, theta id) only, so enumerate_baseline can reproduce the
// first iteration exactly.
ThetaResult run_theta(const AgoraInput& in, const Dataset& D, const HyperparamSet& theta,
                      const RngStream& eval_iter_stream) {
  ThetaResult r;
  r.model = train_model(in.timaeus, D, theta);
  r.train_steps = measure_train_steps(in.timaeus, D, theta);
  Rng eval = eval_iter_stream.child(static_cast<std::uint64_t>(theta.id)).engine();
  r.accuracy = acc(r.model, in.E, eval);
  return r;
}

std::vector<ThetaResult> map_thetas(const AgoraInput& in, const Dataset& D,
                                    const HyperparamSpace& Theta,
                                    const RngStream& eval_iter_stream) {
  std::vector<ThetaResult> out(Theta.size());
  parallel_for(in.workers, Theta.size(), [&](std::size_t i) {
    out[i] = run_theta(in, D, Theta.sets[i], eval_iter_stream);
  });
  return out;
}

}  // namespace

void sort_score_table(ScoreTable& q) {
  std::sort(q.rows.begin(), q.rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    if (a.accuracy != b.accuracy) return a.accuracy < b.accuracy;
    return a.theta.id < b.theta.id;
  });
}

std::string to_string(MSource m) {
  return m == MSource::incumbent ? "incumbent" : "iteration_best";
}

MSource m_source_from_string(const std::string& s) {
  if (s == "incumbent") return MSource::incumbent;
  if (s == "iteration_best") return MSource::iteration_best;
  throw std::invalid_argument("unknown m_source: " + s);
}

void validate_agora_input(const AgoraInput& input) {
  if (!input.timaeus.valid()) throw std::invalid_argument("timaeus must be set");
  if (!input.socrates.valid()) throw std::invalid_argument("socrates must be set");
  if (input.D.empty()) throw std::invalid_argument("empty training set");
  if (input.E.empty()) throw std::invalid_argument("empty evaluation set");
  validate_dataset(input.D);
  validate_dataset(input.E);
  if (input.D.dim() != input.E.dim()) throw std::invalid_argument("dimension mismatch");
  if (input.timaeus.dim() != 0 && input.timaeus.dim() != input.D.dim())
    throw std::invalid_argument("dimension mismatch");
  if (input.Theta.size() == 0) throw std::invalid_argument("Theta must be nonempty");
  validate_hyperparam_space(input.Theta);
  for (const auto& s : input.Theta.sets) {
    if (s.atoms.empty()) throw std::invalid_argument("hyperparameter sets must be nonempty");
    if (s.id < 0) throw std::invalid_argument("hyperparameter set ids must be nonnegative");
    for (const auto& a : s.atoms)
      if (a.key.find_first_of(",\n") != std::string::npos ||
          a.value.find_first_of(",\n") != std::string::npos)
        throw std::invalid_argument("hyperparameter atoms must not contain commas or newlines");
  }
  const CoordSet d_coords(input.D);
  for (const auto& p : input.E.points)
    if (d_coords.contains(p.x)) throw std::invalid_argument("D and E must be disjoint");
  if (input.workers < 1) throw std::invalid_argument("workers must be at least 1");
}

HyperparamAtom select_pruning_atom(const ScoreTable& q_sorted) {
  if (q_sorted.rows.empty()) throw std::invalid_argument("empty score table");
  const HyperparamSet& theta0 = q_sorted.rows.front().theta;
  if (theta0.atoms.empty()) throw std::invalid_argument("theta_0 has no atoms");
  std::size_t best_pos = 0;
  std::size_t best_run = 0;
  for (std::size_t pos = 0; pos < theta0.atoms.size(); ++pos) {
    const HyperparamAtom& atom = theta0.atoms[pos];
    std::size_t run = 0;
    for (const auto& row : q_sorted.rows) {
      if (!row.theta.contains(atom)) break;
      ++run;
    }
    if (run > best_run) {  // ties keep the earlier position
      best_run = run;
      best_pos = pos;
    }
  }
  return theta0.atoms[best_pos];
}

HyperparamSpace prune_space(const HyperparamSpace& Theta, const HyperparamAtom& atom) {
  HyperparamSpace out;
  for (const auto& s : Theta.sets)
    if (!s.contains(atom)) out.sets.push_back(s);
  if (out.sets.size() == Theta.sets.size())
    throw std::logic_error("pruned atom not present in any set");
  return out;
}

AgoraResult run_agora(const AgoraInput& input) {
  validate_agora_input(input);
  const RngStream root = RngStream::root(input.master_seed);
  const CoordSet e_coords(input.E);

  Dataset D = input.D;
  HyperparamSpace Theta = input.Theta;
  AgoraResult result;
  result.best_acc = -std::numeric_limits<double>::infinity();

  ClassifierHandle iter_best_model;
  for (std::uint64_t k = 1; Theta.size() >= 1; ++k) {
    const RngStream eval_iter = root.child("eval").child(k);
    const auto results = map_thetas(input, D, Theta, eval_iter);

    // incumbent update in theta order; strict > keeps earlier winners
    int incumbent_id = -1;
    double prev_a_star = result.best_acc;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].accuracy > result.best_acc) {
        result.best_acc = results[i].accuracy;
        result.best_model = results[i].model;
        incumbent_id = Theta.sets[i].id;
      }
    }
    if (result.best_acc < prev_a_star) throw std::logic_error("incumbent regressed");

    std::size_t best_i = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
      if (results[i].accuracy > results[best_i].accuracy) best_i = i;
    iter_best_model = results[best_i].model;

    const ClassifierHandle& m_model =
        input.m_source == MSource::incumbent ? result.best_model : iter_best_model;

    long dropped = 0;
    const auto m_set = build_M(m_model, input.E, input.tau,
                               root.child("mbuild").child(k), &dropped);

    const RngStream socrates_iter = root.child("socrates").child(k);
    std::vector<LabeledPoint> labeled;
    labeled.reserve(m_set.size());
    for (std::size_t j = 0; j < m_set.size(); ++j) {
      Rng srng = socrates_iter.child(static_cast<std::uint64_t>(j)).engine();
      LabeledPoint p;
      p.x = m_set[j];
      p.y = input.socrates.predict(p.x, srng);
      if (e_coords.contains(p.x)) throw std::logic_error("generated point collides with E");
      labeled.push_back(std::move(p));
    }

    ScoreTable q;
    q.rows.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i)
      q.rows.push_back({results[i].accuracy, Theta.sets[i]});
    sort_score_table(q);
    const HyperparamAtom pruned = select_pruning_atom(q);
    HyperparamSpace next_theta = prune_space(Theta, pruned);

    IterationRecord rec;
    rec.iter = static_cast<int>(k);
    rec.a_star = result.best_acc;
    rec.d_size = static_cast<long>(D.size());
    rec.m_size = static_cast<long>(m_set.size());
    rec.tau_dropped = dropped;
    rec.pruned = pruned;
    rec.socrates_calls = static_cast<long>(m_set.size());
    for (const auto& s : next_theta.sets) rec.surviving_ids.push_back(s.id);
    for (const auto& row : q.rows) {
      IterationRow r;
      r.theta_id = row.theta.id;
      r.accuracy = row.accuracy;
      r.is_incumbent = row.theta.id == incumbent_id;
      for (std::size_t i = 0; i < results.size(); ++i)
        if (Theta.sets[i].id == row.theta.id) r.train_steps = results[i].train_steps;
      rec.rows.push_back(std::move(r));
      result.trace.total_train_steps += rec.rows.back().train_steps;
    }
    result.trace.total_socrates_calls += rec.socrates_calls;
    result.trace.iterations.push_back(std::move(rec));

    D = dataset_union_dedup(D, labeled);
    Theta = std::move(next_theta);
  }
  return result;
}

std::pair<ClassifierHandle, double> enumerate_baseline(const AgoraInput& input) {
  validate_agora_input(input);
  const RngStream eval_iter = RngStream::root(input.master_seed).child("eval").child(
      static_cast<std::uint64_t>(1));
  const auto results = map_thetas(input, input.D, input.Theta, eval_iter);
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].accuracy > results[best_i].accuracy) best_i = i;
  return {results[best_i].model, results[best_i].accuracy};
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << trace_csv(trace);
}

std::string trace_csv(const RunTrace& trace) {
  std::string out =
      "iter,theta_id,accuracy,is_incumbent,d_size,m_size,pruned_key,pruned_value,"
      "surviving_count,train_steps,socrates_calls\n";
  for (const auto& rec : trace.iterations) {
    for (const auto& row : rec.rows) {
      out += std::to_string(rec.iter);
      out += ',';
      out += std::to_string(row.theta_id);
      out += ',';
      append_double(out, row.accuracy);
      out += ',';
      out += row.is_incumbent ? '1' : '0';
      out += ',';
      out += std::to_string(rec.d_size);
      out += ',';
      out += std::to_string(rec.m_size);
      out += ',';
      out += rec.pruned.key;
      out += ',';
      out += rec.pruned.value;
      out += ',';
      out += std::to_string(rec.surviving_ids.size());
      out += ',';
      out += std::to_string(row.train_steps);
      out += ',';
      out += std::to_string(rec.socrates_calls);
      out += '\n';
    }
  }
  return out;
}

}  // namespace agora
