#pragma once

// train-model(f, D, theta): hyperparameter decoding and the shuffling-type
// SGD realization for gradient models; idealized kinds delegate to their
// own one-pass training.

#include <cstdint>
#include <vector>

#include "agora/core.hpp"

namespace agora {

struct TrainConfig {
  double eta = 0.0;
  long batch_size = 0;
  std::uint64_t seed = 0;
  long epochs = 0;
  double L = 0.25;  // loss smoothness constant, reporting only
  double G = 1.0;   // stochastic gradient bound, reporting only
  std::vector<HyperparamAtom> extra;
};

// Reserved keys eta, batch_size, seed, epochs must be present and parse;
// optional L and G override the reporting defaults; anything else passes
// through in `extra`.
TrainConfig decode_theta(const HyperparamSet& theta);

// Deterministic training. Gradient kinds run shuffling SGD: the training
// set is canonicalized by coordinate order (so dataset order cannot leak
// into the result), then per epoch a seed-and-epoch-keyed permutation is
// partitioned into batches of batch_size (last short) and each batch takes
// one step w <- w - eta * grad. random recomputes its positive fraction,
// ball_memory appends, oracles are returned unchanged.
ClassifierHandle train_model(const ClassifierHandle& f, const Dataset& D,
                             const HyperparamSet& theta);

// Per-point gradient/scan units: epochs * |D| for gradient kinds, |D| for
// the one-pass kinds, 0 for oracles.
long measure_train_steps(const ClassifierHandle& f, const Dataset& D,
                         const HyperparamSet& theta);

// Lexicographic-by-coordinates (then label) index order used by SGD.
std::vector<std::size_t> canonical_order(const Dataset& d);

}  // namespace agora
