#include "doctest.h"

#include <cmath>
#include <sstream>

#include "agora/core.hpp"
#include "agora/geometry.hpp"
#include "agora/models.hpp"

using namespace agora;

namespace {

LabeledPoint lp(std::initializer_list<double> coords, int y) {
  LabeledPoint p;
  p.x = Eigen::VectorXd(static_cast<long>(coords.size()));
  long i = 0;
  for (double c : coords) p.x[i++] = c;
  p.y = y;
  return p;
}

}  // namespace

TEST_CASE("coord_key identifies exact coordinates and merges signed zero") {
  Eigen::VectorXd a(2), b(2), z1(1), z2(1);
  a << 0.1, 0.2;
  b << 0.1, 0.2000000000000001;
  z1 << 0.0;
  z2 << -0.0;
  CHECK(coord_key(a) == coord_key(a));
  CHECK(coord_key(a) != coord_key(b));
  CHECK(coord_key(z1) == coord_key(z2));
}

TEST_CASE("validate_dataset rejects malformed data") {
  Dataset d;
  d.points.push_back(lp({0.5, 0.5}, 1));
  CHECK_NOTHROW(validate_dataset(d));

  Dataset bad_label = d;
  bad_label.points.push_back(lp({0.1, 0.1}, 2));
  CHECK_THROWS_WITH_AS(validate_dataset(bad_label), "dataset labels must be 0 or 1",
                       std::invalid_argument);

  Dataset bad_dim = d;
  bad_dim.points.push_back(lp({0.1}, 0));
  CHECK_THROWS_WITH_AS(validate_dataset(bad_dim), "dataset has mixed dimensions",
                       std::invalid_argument);

  Dataset bad_coord = d;
  bad_coord.points.push_back(lp({std::nan(""), 0.0}, 0));
  CHECK_THROWS_WITH_AS(validate_dataset(bad_coord), "dataset has non-finite coordinates",
                       std::invalid_argument);
}

TEST_CASE("dataset_union_dedup keeps first occurrence and appends the rest") {
  Dataset d;
  d.points.push_back(lp({1.0}, 1));
  d.points.push_back(lp({2.0}, 0));

  std::vector<LabeledPoint> add;
  add.push_back(lp({2.0}, 1));  // duplicate coordinate, conflicting label
  add.push_back(lp({3.0}, 1));
  add.push_back(lp({3.0}, 0));  // duplicate within the additions

  const Dataset u = dataset_union_dedup(d, add);
  REQUIRE(u.size() == 3);
  CHECK(u.points[0].x[0] == 1.0);
  CHECK(u.points[1].x[0] == 2.0);
  CHECK(u.points[1].y == 0);  // original label wins
  CHECK(u.points[2].x[0] == 3.0);
  CHECK(u.points[2].y == 1);  // first addition wins
}

TEST_CASE("csv io round-trips coordinates bit-exactly") {
  Dataset d;
  d.points.push_back(lp({0.1, 1.0 / 3.0}, 1));
  d.points.push_back(lp({-0.0, 1e-300}, 0));
  d.points.push_back(lp({123456789.123456789, -2.5e17}, 1));

  std::ostringstream out;
  write_dataset_csv(d, out);
  std::istringstream in(out.str());
  const Dataset r = read_dataset_csv(in, "r");

  REQUIRE(r.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(r.points[i].y == d.points[i].y);
    for (long j = 0; j < d.points[i].x.size(); ++j) {
      CHECK(r.points[i].x[j] == d.points[i].x[j]);
    }
  }
  CHECK(std::signbit(r.points[1].x[0]));
}

TEST_CASE("csv reader rejects malformed input") {
  {
    std::istringstream in("x0,x1\n0.5,0.5\n");
    CHECK_THROWS_AS(read_dataset_csv(in), std::invalid_argument);
  }
  {
    std::istringstream in("x0,y\n0.5,2\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(in), "dataset labels must be 0 or 1",
                         std::invalid_argument);
  }
  {
    std::istringstream in("x0,x1,y\n0.5,1\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(in), "dataset row has too few columns",
                         std::invalid_argument);
  }
  {
    std::istringstream in("x0,y\n0.5,1,7\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(in), "dataset row has too many columns",
                         std::invalid_argument);
  }
  {
    std::istringstream in("");
    CHECK_THROWS_AS(read_dataset_csv(in), std::invalid_argument);
  }
}

TEST_CASE("err and acc agree and reject an empty evaluation set") {
  const ManifoldSpec spec = ManifoldSpec::segment(1.0, 0.5);
  const ClassifierHandle oracle(std::make_shared<OracleSocrates>(spec));

  Dataset e;
  e.points.push_back(lp({0.25}, 1));
  e.points.push_back(lp({0.75}, 0));
  e.points.push_back(lp({0.9}, 1));  // deliberately mislabeled

  Rng g1 = RngStream::root(1).engine();
  Rng g2 = RngStream::root(1).engine();
  const double error = err(oracle, e, g1);
  const double accuracy = acc(oracle, e, g2);
  CHECK(error == doctest::Approx(1.0 / 3.0));
  CHECK(accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(error + accuracy == doctest::Approx(1.0));

  Dataset empty;
  Rng g3 = RngStream::root(1).engine();
  CHECK_THROWS_WITH_AS(err(oracle, empty, g3), "empty evaluation set",
                       std::invalid_argument);
}

TEST_CASE("hyperparameter sets expose membership and reject duplicates") {
  HyperparamSet s;
  s.id = 3;
  s.atoms = {{"eta", "0.1"}, {"epochs", "5"}};
  CHECK(s.contains({"eta", "0.1"}));
  CHECK_FALSE(s.contains({"eta", "0.2"}));
  CHECK(s.find("epochs").value() == "5");
  CHECK_FALSE(s.find("momentum").has_value());
  CHECK_NOTHROW(validate_hyperparam_set(s));

  HyperparamSet dup = s;
  dup.atoms.push_back({"eta", "0.9"});
  CHECK_THROWS_AS(validate_hyperparam_set(dup), std::invalid_argument);

  HyperparamSpace sp;
  sp.sets = {s, s};  // same id twice
  CHECK_THROWS_AS(validate_hyperparam_space(sp), std::invalid_argument);
}

TEST_CASE("classifier kind names round-trip") {
  for (ClassifierKind k :
       {ClassifierKind::random, ClassifierKind::ball_memory, ClassifierKind::oracle,
        ClassifierKind::noisy_oracle, ClassifierKind::logistic, ClassifierKind::mlp}) {
    CHECK(classifier_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(classifier_kind_from_string("perceptron"), std::invalid_argument);
}

TEST_CASE("estimate_true_error is near zero for the oracle itself") {
  const ManifoldSpec spec = ManifoldSpec::circle(1.0, 0.5);
  const ClassifierHandle oracle(std::make_shared<OracleSocrates>(spec));
  Rng g = RngStream::root(11).engine();
  CHECK(estimate_true_error(oracle, spec, 2000, g) == 0.0);
  Rng g2 = RngStream::root(11).engine();
  CHECK_THROWS_AS(estimate_true_error(oracle, spec, 0, g2), std::invalid_argument);
}
