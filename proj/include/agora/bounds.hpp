#pragma once

// Closed-form predictions for the loop's behavior: per-iteration accuracy
// floor, approximation-ratio bracket, and step-count bounds, plus the
// comparison of a recorded trace against them.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "agora/agora.hpp"

namespace agora {

// 1 - 2^{-k}
double per_iteration_floor(long k);

// (1, 2 (1 - 2^{-theta_count}))
std::pair<double, double> approx_ratio_bound(long theta_count);

struct RuntimePrediction {
  double total = 0.0;
  double train_term = 0.0;
  double sort_select_term = 0.0;
  double socrates_term = 0.0;
  long theta_count = 0;
  long theta_size = 0;
  long d_size = 0;  // 0 when not part of the formula
  long e_size = 0;
  double s_bar = 0.0;
  std::string t_f;  // description of the training-cost model used
};

// theta_count^2 (ln theta_count + theta_size^2 + t_f(d_size + e_size
// / 2^{theta_count-1})) + s_bar theta_count e_size (1 - 2^{-theta_count}),
// leading constants 1.
RuntimePrediction runtime_bound_poly(long theta_count, long theta_size, long d_size,
                                     long e_size, double s_bar,
                                     const std::function<double(double)>& t_f);

// Same shape with the training term f_bar (e_size + batch_max
// / (L G zeta)^{2/3}); zeta is the smallest eta^2 over Theta, batch_max the
// largest batch size.
RuntimePrediction runtime_bound_sgd(long theta_count, long theta_size, long e_size,
                                    double s_bar, double f_bar, long batch_max,
                                    double L, double G, double zeta);

struct TraceCheck {
  long measured_train_steps = 0;
  long measured_socrates_calls = 0;
  double measured_total = 0.0;  // train + socrates units
  double allowed_total = 0.0;   // C * prediction
  bool steps_within = false;
  bool socrates_le_theta_e = false;
  // per iteration k: (|M^(k)|, e_size / 2^{k-1})
  std::vector<std::pair<long, double>> m_schedule;
  bool m_schedule_ok = false;
};

// Compares a finished trace against C * pred; the M schedule is judged
// against e_size / 2^{k-1} per iteration.
TraceCheck check_trace_against_bounds(const RunTrace& trace, const RuntimePrediction& pred,
                                      double C);

}  // namespace agora
