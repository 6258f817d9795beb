#pragma once

// The main loop: per-iteration training over the surviving hyperparameter
// sets, incumbent tracking, misclassified-set construction and labeling,
// score-table sorting, and contiguous-atom pruning.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "agora/core.hpp"
#include "agora/tau.hpp"

namespace agora {

struct ScoreRow {
  double accuracy = 0.0;
  HyperparamSet theta;
};

struct ScoreTable {
  std::vector<ScoreRow> rows;
};

// Non-decreasing by accuracy, ties by theta id: a fixed total order.
void sort_score_table(ScoreTable& q);

enum class MSource { incumbent, iteration_best };

std::string to_string(MSource m);
MSource m_source_from_string(const std::string& s);

struct AgoraInput {
  ClassifierHandle timaeus;   // untrained candidate
  ClassifierHandle socrates;  // trained teacher
  Dataset D;
  Dataset E;
  HyperparamSpace Theta;
  TauFunction tau;
  MSource m_source = MSource::incumbent;
  std::uint64_t master_seed = 0;
  int workers = 1;
};

void validate_agora_input(const AgoraInput& input);

struct IterationRow {
  int theta_id = 0;
  double accuracy = 0.0;
  bool is_incumbent = false;  // this row's model became the incumbent
  long train_steps = 0;
};

struct IterationRecord {
  int iter = 0;                    // k, 1-based
  std::vector<IterationRow> rows;  // sorted score-table order
  double a_star = 0.0;             // incumbent accuracy after this iteration
  long d_size = 0;                 // |D| this iteration trained on
  long m_size = 0;
  long tau_dropped = 0;
  HyperparamAtom pruned;
  std::vector<int> surviving_ids;
  long socrates_calls = 0;
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  long total_train_steps = 0;
  long total_socrates_calls = 0;
};

struct AgoraResult {
  ClassifierHandle best_model;
  double best_acc = 0.0;
  RunTrace trace;
};

// Executes the loop until Theta is exhausted. Deterministic for a fixed
// input including master_seed, independent of the worker count.
AgoraResult run_agora(const AgoraInput& input);

// For each atom of the worst-scoring set theta_0, the run length is the
// number of leading rows of the sorted table containing that atom; returns
// the atom with the longest run, ties broken by position within theta_0.
HyperparamAtom select_pruning_atom(const ScoreTable& q_sorted);

// Subspace of sets not containing the atom; must shrink.
HyperparamSpace prune_space(const HyperparamSpace& Theta, const HyperparamAtom& atom);

// Trains every theta on the original D and returns the best model with its
// accuracy. Shares per-theta seed streams with run_agora's first iteration
// so the two are exactly paired.
std::pair<ClassifierHandle, double> enumerate_baseline(const AgoraInput& input);

void write_trace_csv(const RunTrace& trace, std::ostream& out);
std::string trace_csv(const RunTrace& trace);

}  // namespace agora
