#include "agora/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace agora {

namespace {

void check_count(const char* name, long v) {
  if (v < 1) throw std::invalid_argument(std::string(name) + " must be at least 1");
}

}  // namespace

double per_iteration_floor(long k) {
  check_count("k", k);
  if (k > 1062) return 1.0;  // 2^{-k} underflows; the floor saturates
  return 1.0 - std::ldexp(1.0, -static_cast<int>(k));
}

std::pair<double, double> approx_ratio_bound(long theta_count) {
  check_count("theta_count", theta_count);
  return {1.0, 2.0 * per_iteration_floor(theta_count)};
}

RuntimePrediction runtime_bound_poly(long theta_count, long theta_size, long d_size,
                                     long e_size, double s_bar,
                                     const std::function<double(double)>& t_f) {
  check_count("theta_count", theta_count);
  check_count("theta_size", theta_size);
  check_count("d_size", d_size);
  check_count("e_size", e_size);
  if (s_bar < 0.0) throw std::invalid_argument("s_bar must be nonnegative");
  if (!t_f) throw std::invalid_argument("t_f must be callable");

  const double tc = static_cast<double>(theta_count);
  const double ts = static_cast<double>(theta_size);
  const double train_arg =
      static_cast<double>(d_size) +
      static_cast<double>(e_size) / std::ldexp(1.0, static_cast<int>(theta_count - 1));

  RuntimePrediction p;
  p.theta_count = theta_count;
  p.theta_size = theta_size;
  p.d_size = d_size;
  p.e_size = e_size;
  p.s_bar = s_bar;
  p.t_f = "t_f";
  p.train_term = tc * tc * t_f(train_arg);
  p.sort_select_term = tc * tc * (std::log(tc) + ts * ts);
  p.socrates_term = s_bar * tc * static_cast<double>(e_size) * per_iteration_floor(theta_count);
  p.total = p.train_term + p.sort_select_term + p.socrates_term;
  return p;
}

RuntimePrediction runtime_bound_sgd(long theta_count, long theta_size, long e_size,
                                    double s_bar, double f_bar, long batch_max,
                                    double L, double G, double zeta) {
  check_count("theta_count", theta_count);
  check_count("theta_size", theta_size);
  check_count("e_size", e_size);
  if (s_bar < 0.0) throw std::invalid_argument("s_bar must be nonnegative");
  if (f_bar < 0.0) throw std::invalid_argument("f_bar must be nonnegative");
  check_count("batch_max", batch_max);
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  if (!(G > 0.0)) throw std::invalid_argument("G must be positive");
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be positive");

  const double tc = static_cast<double>(theta_count);
  const double ts = static_cast<double>(theta_size);
  const double train_arg = static_cast<double>(e_size) +
                           static_cast<double>(batch_max) / std::pow(L * G * zeta, 2.0 / 3.0);

  RuntimePrediction p;
  p.theta_count = theta_count;
  p.theta_size = theta_size;
  p.d_size = 0;
  p.e_size = e_size;
  p.s_bar = s_bar;
  p.t_f = "f_bar*(e_size + batch_max/(L*G*zeta)^(2/3))";
  p.train_term = tc * tc * f_bar * train_arg;
  p.sort_select_term = tc * tc * (std::log(tc) + ts * ts);
  p.socrates_term = s_bar * tc * static_cast<double>(e_size) * per_iteration_floor(theta_count);
  p.total = p.train_term + p.sort_select_term + p.socrates_term;
  return p;
}

TraceCheck check_trace_against_bounds(const RunTrace& trace, const RuntimePrediction& pred,
                                      double C) {
  if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
  TraceCheck r;
  r.measured_train_steps = trace.total_train_steps;
  r.measured_socrates_calls = trace.total_socrates_calls;
  r.measured_total =
      static_cast<double>(trace.total_train_steps + trace.total_socrates_calls);
  r.allowed_total = C * pred.total;
  r.steps_within = r.measured_total <= r.allowed_total;
  r.socrates_le_theta_e =
      trace.total_socrates_calls <= pred.theta_count * pred.e_size;
  r.m_schedule_ok = true;
  for (const auto& rec : trace.iterations) {
    const double allowed = static_cast<double>(pred.e_size) /
                           std::ldexp(1.0, static_cast<int>(rec.iter - 1));
    r.m_schedule.emplace_back(rec.m_size, allowed);
    if (static_cast<double>(rec.m_size) > allowed) r.m_schedule_ok = false;
  }
  return r;
}

}  // namespace agora
