#include "doctest.h"

#include <cmath>
#include <functional>

#include "agora/agora.hpp"
#include "agora/bounds.hpp"
#include "mp_oracle.hpp"

using namespace agora;

TEST_CASE("the per-iteration accuracy floor climbs toward one") {
  CHECK(per_iteration_floor(1) == 0.5);
  CHECK(per_iteration_floor(2) == 0.75);
  CHECK(per_iteration_floor(5) == 0.96875);
  CHECK(per_iteration_floor(2000) == 1.0);
  CHECK_THROWS_WITH_AS(per_iteration_floor(0), "k must be at least 1",
                       std::invalid_argument);

  for (int k = 1; k <= 60; ++k) {
    const auto oracle = mp_oracle::per_iteration_floor(k);
    CHECK(mp_oracle::rel_err(per_iteration_floor(k), oracle) < 1e-15);
  }
}

TEST_CASE("the approximation ratio interval matches its closed form") {
  const auto [lo, hi] = approx_ratio_bound(5);
  CHECK(lo == 1.0);
  CHECK(hi == 1.9375);  // 2 * (1 - 2^-5), exactly representable
  for (int k = 1; k <= 32; ++k) {
    const auto [l, h] = approx_ratio_bound(k);
    const auto [ol, oh] = mp_oracle::approx_ratio_bound(k);
    CHECK(mp_oracle::rel_err(l, ol) < 1e-14);
    CHECK(mp_oracle::rel_err(h, oh) < 1e-14);
  }
}

TEST_CASE("runtime predictions agree with the frozen worked examples") {
  const auto ident = [](double x) { return x; };
  const RuntimePrediction poly = runtime_bound_poly(4, 4, 100, 100, 1.0, ident);
  CHECK(poly.total == doctest::Approx(2453.180709777918).epsilon(1e-12));
  CHECK(poly.theta_count == 4);
  CHECK(poly.e_size == 100);
  CHECK(poly.total ==
        doctest::Approx(poly.train_term + poly.sort_select_term + poly.socrates_term));

  const RuntimePrediction sgd = runtime_bound_sgd(4, 4, 100, 1.0, 1.0, 16, 1.0, 1.0, 1.0);
  CHECK(sgd.total == doctest::Approx(2509.180709777918).epsilon(1e-12));
  CHECK(sgd.total ==
        doctest::Approx(sgd.train_term + sgd.sort_select_term + sgd.socrates_term));
}

TEST_CASE("runtime predictions track the reference arithmetic on a grid") {
  const auto ident = [](double x) { return x; };
  for (long tc : {1L, 2L, 5L, 9L}) {
    for (long e : {10L, 100L}) {
      const RuntimePrediction p = runtime_bound_poly(tc, 3, 50, e, 2.0, ident);
      const auto o = mp_oracle::runtime_bound_poly(
          tc, 3, 50, e, 2.0, [](mp_oracle::Real x) { return x; });
      CHECK(mp_oracle::rel_err(p.train_term, o.train) < 1e-13);
      CHECK(mp_oracle::rel_err(p.sort_select_term, o.sort_select) < 1e-13);
      CHECK(mp_oracle::rel_err(p.socrates_term, o.socrates) < 1e-13);
      CHECK(mp_oracle::rel_err(p.total, o.total) < 1e-13);

      const RuntimePrediction s = runtime_bound_sgd(tc, 3, e, 2.0, 1.5, 8, 0.25, 1.0, 0.5);
      const auto os = mp_oracle::runtime_bound_sgd(tc, 3, e, 2.0, 1.5, 8, 0.25, 1.0, 0.5);
      CHECK(mp_oracle::rel_err(s.total, os.total) < 1e-13);
    }
  }
}

TEST_CASE("runtime prediction arguments are range checked") {
  const auto ident = [](double x) { return x; };
  CHECK_THROWS_WITH_AS(runtime_bound_poly(0, 4, 1, 1, 1.0, ident),
                       "theta_count must be at least 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_poly(4, 0, 1, 1, 1.0, ident),
                       "theta_size must be at least 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_poly(4, 4, 1, 1, -1.0, ident),
                       "s_bar must be nonnegative", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_poly(4, 4, 1, 1, 1.0, nullptr),
                       "t_f must be callable", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_sgd(4, 4, 1, 1.0, -1.0, 16, 1, 1, 1),
                       "f_bar must be nonnegative", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_sgd(4, 4, 1, 1.0, 1.0, 0, 1, 1, 1),
                       "batch_max must be at least 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_sgd(4, 4, 1, 1.0, 1.0, 16, 0, 1, 1),
                       "L must be positive", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_sgd(4, 4, 1, 1.0, 1.0, 16, 1, 0, 1),
                       "G must be positive", std::invalid_argument);
  CHECK_THROWS_WITH_AS(runtime_bound_sgd(4, 4, 1, 1.0, 1.0, 16, 1, 1, 0),
                       "zeta must be positive", std::invalid_argument);
}

TEST_CASE("trace checking compares measured work against the allowance") {
  RunTrace trace;
  IterationRecord r1;
  r1.iter = 1;
  r1.m_size = 50;
  IterationRecord r2;
  r2.iter = 2;
  r2.m_size = 50;  // over the halved allowance of 100/2
  trace.iterations = {r1, r2};
  trace.total_train_steps = 900;
  trace.total_socrates_calls = 100;

  const auto ident = [](double x) { return x; };
  const RuntimePrediction pred = runtime_bound_poly(4, 4, 100, 100, 1.0, ident);

  const TraceCheck ok = check_trace_against_bounds(trace, pred, 1.0);
  CHECK(ok.measured_train_steps == 900);
  CHECK(ok.measured_socrates_calls == 100);
  CHECK(ok.measured_total == 1000.0);
  CHECK(ok.allowed_total == pred.total);
  CHECK(ok.steps_within);
  CHECK(ok.socrates_le_theta_e);  // 100 <= 4 * 100
  REQUIRE(ok.m_schedule.size() == 2);
  CHECK(ok.m_schedule[0] == std::pair<long, double>{50, 100.0});
  CHECK(ok.m_schedule[1] == std::pair<long, double>{50, 50.0});
  CHECK(ok.m_schedule_ok);  // 50 <= 50 on the edge

  RunTrace over = trace;
  over.iterations[1].m_size = 51;
  over.total_train_steps = 4000;
  over.total_socrates_calls = 500;
  const TraceCheck bad = check_trace_against_bounds(over, pred, 1.0);
  CHECK_FALSE(bad.steps_within);  // 4500 > 2453.18
  CHECK_FALSE(bad.socrates_le_theta_e);
  CHECK_FALSE(bad.m_schedule_ok);

  const TraceCheck loose = check_trace_against_bounds(over, pred, 2.0);
  CHECK(loose.allowed_total == 2.0 * pred.total);
  CHECK(loose.steps_within);

  CHECK_THROWS_WITH_AS(check_trace_against_bounds(trace, pred, 0.0),
                       "C must be positive", std::invalid_argument);
}
