#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "agora/random.hpp"

using namespace agora;

TEST_CASE("root streams are deterministic and seed-sensitive") {
  RngStream a = RngStream::root(42);
  RngStream b = RngStream::root(42);
  RngStream c = RngStream::root(43);
  CHECK(a.state == b.state);
  CHECK(a.state != c.state);

  Rng ga = a.engine();
  Rng gb = b.engine();
  for (int i = 0; i < 16; ++i) CHECK(ga() == gb());
}

TEST_CASE("named children are independent of derivation order") {
  RngStream root = RngStream::root(7);
  const std::uint64_t x1 = root.child("dataset").child("D").state;
  const std::uint64_t y1 = root.child("eval").state;
  // derive in the opposite order
  const std::uint64_t y2 = root.child("eval").state;
  const std::uint64_t x2 = root.child("dataset").child("D").state;
  CHECK(x1 == x2);
  CHECK(y1 == y2);
  CHECK(x1 != y1);
}

TEST_CASE("name and index children separate") {
  RngStream root = RngStream::root(1);
  std::set<std::uint64_t> states;
  states.insert(root.child("a").state);
  states.insert(root.child("b").state);
  states.insert(root.child(std::uint64_t{0}).state);
  states.insert(root.child(std::uint64_t{1}).state);
  states.insert(root.child(std::uint64_t{2}).state);
  CHECK(states.size() == 5);
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  Rng g = RngStream::root(3).engine();
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(g);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("bernoulli honors degenerate probabilities") {
  Rng g = RngStream::root(4).engine();
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(bernoulli(g, 0.0));
    CHECK(bernoulli(g, 1.0));
  }
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += bernoulli(g, 0.25) ? 1 : 0;
  CHECK(static_cast<double>(ones) / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("uniform_below is bounded and hits every residue") {
  Rng g = RngStream::root(5).engine();
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = uniform_below(g, 7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("normal01 has unit-normal moments") {
  Rng g = RngStream::root(6).engine();
  const int n = 40000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = normal01(g);
    CHECK(std::isfinite(z));
    sum += z;
    sq += z * z;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("permutation is a bijection and is seed-stable") {
  Rng g = RngStream::root(8).engine();
  const auto p = permutation(100, g);
  REQUIRE(p.size() == 100);
  std::set<std::size_t> seen(p.begin(), p.end());
  CHECK(seen.size() == 100);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 99);

  Rng g2 = RngStream::root(8).engine();
  CHECK(permutation(100, g2) == p);
  Rng g3 = RngStream::root(9).engine();
  CHECK(permutation(100, g3) != p);
}
