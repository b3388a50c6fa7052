#include <doctest.h>

#include <cmath>

#include "ilslab/error.hpp"
#include "ilslab/oracles.hpp"
#include "ilslab/quotient.hpp"
#include "support.hpp"

using namespace ilslab;
using doctest::Approx;

TEST_CASE("build_quotient on a coordinate projection") {
  const auto q = fx::quotient({{1, 0}});
  CHECK(q->pinv()(0, 0) == Approx(1.0));
  CHECK(std::abs(q->pinv()(1, 0)) < 1e-15);
  REQUIRE(q->null_basis().cols() == 1);
  CHECK(std::abs(q->null_basis()(0, 0)) < 1e-15);
  CHECK(std::abs(q->null_basis()(1, 0)) == Approx(1.0));
  CHECK(q->fiber_dim() == 1);
}

TEST_CASE("build_quotient pinv of [[1,1]]") {
  const auto q = fx::quotient({{1, 1}});
  CHECK(std::abs(q->pinv()(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(q->pinv()(1, 0) - 0.5) < 1e-12);
}

TEST_CASE("build_quotient rejects degenerate maps") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 2);
  try {
    build_quotient(zero);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
  Eigen::MatrixXd square = Eigen::MatrixXd::Identity(2, 2);
  try {
    build_quotient(square);
    FAIL("expected NotStrictQuotient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotStrictQuotient);
  }
}

TEST_CASE("fiber_distance fixtures") {
  const auto a10 = fx::quotient({{1, 0}});
  const auto a11 = fx::quotient({{1, 1}});
  CHECK(fiber_distance(*a10, fx::vec({3, 4}), fx::vec({1}), 1.0) == Approx(2.0).epsilon(1e-12));
  CHECK(fiber_distance(*a10, fx::vec({1, 7}), fx::vec({1}), 1.0) == 0.0);
  CHECK(fiber_distance(*a11, fx::vec({0, 0}), fx::vec({2}), 1.0) ==
        Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("fiber_gap fixtures and scaling") {
  const auto a10 = fx::quotient({{1, 0}});
  const auto a11 = fx::quotient({{1, 1}});
  CHECK(fiber_gap(*a10, fx::vec({0}), fx::vec({5}), 1.0) == Approx(5.0));
  CHECK(fiber_gap(*a10, fx::vec({0}), fx::vec({5}), 2.0) == Approx(10.0));
  CHECK(fiber_gap(*a10, fx::vec({0}), fx::vec({5}), -2.0) == Approx(10.0));
  CHECK(fiber_gap(*a11, fx::vec({0}), fx::vec({2}), 1.0) == Approx(std::sqrt(2.0)));
}

TEST_CASE("project_to_fiber fixtures") {
  const auto a10 = fx::quotient({{1, 0}});
  const auto a11 = fx::quotient({{1, 1}});
  const Eigen::VectorXd p = project_to_fiber(*a10, fx::vec({3, 4}), fx::vec({1}), 1.0);
  CHECK(p(0) == Approx(1.0));
  CHECK(p(1) == Approx(4.0));
  const Eigen::VectorXd same = project_to_fiber(*a10, fx::vec({1, 7}), fx::vec({1}), 1.0);
  CHECK(same(0) == 1.0);
  CHECK(same(1) == 7.0);
  const Eigen::VectorXd r = project_to_fiber(*a11, fx::vec({0, 0}), fx::vec({2}), 1.0);
  CHECK(r(0) == Approx(1.0));
  CHECK(r(1) == Approx(1.0));
}

TEST_CASE("polyhedral norms") {
  const auto l1 = fx::quotient({{1, 1}}, Norm::l1);
  const auto linf = fx::quotient({{1, 1}}, Norm::linf);
  // Fiber x1 + x2 = 2: the l1 distance from the origin is 2, the sup distance 1.
  CHECK(fiber_distance(*l1, fx::vec({0, 0}), fx::vec({2}), 1.0) == Approx(2.0));
  CHECK(fiber_distance(*linf, fx::vec({0, 0}), fx::vec({2}), 1.0) == Approx(1.0));
  CHECK(fiber_gap(*l1, fx::vec({0}), fx::vec({2}), 1.0) ==
        Approx(fiber_gap(*l1, fx::vec({2}), fx::vec({0}), 1.0)));
  const Eigen::VectorXd p = project_to_fiber(*linf, fx::vec({0, 0}), fx::vec({2}), 1.0);
  CHECK((linf->matrix() * p)(0) == Approx(2.0));
}

TEST_CASE("polyhedral distances agree with the oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    fx::Random rnd(seed, 3, 1, 4);
    for (Norm norm : {Norm::l1, Norm::linf}) {
      const QuotientMap q = build_quotient(rnd.q->matrix(), norm);
      const Eigen::VectorXd x = rnd.gauss(3);
      const double fast = fiber_distance(q, x, rnd.b->point(1), 1.5);
      const double slow =
          oracle::fiber_distance(q, x, rnd.b->point(1), 1.5, oracle::Budget{4000, seed, 80}).value;
      // One constraint row: the distance is |a.x - t| over the dual norm of a.
      const Eigen::VectorXd a = q.matrix().row(0).transpose();
      const double dual = norm == Norm::l1 ? a.cwiseAbs().maxCoeff() : a.cwiseAbs().sum();
      const double exact = std::abs(a.dot(x) - 1.5 * rnd.b->point(1)(0)) / dual;
      CHECK(std::abs(fast - exact) < 1e-12 * (1.0 + exact));
      CHECK(fast <= slow + 1e-9);
      CHECK(slow - fast < 1e-3);
    }
  }
}

TEST_CASE("make_base validation") {
  const auto q = fx::quotient({{1, 0}});
  Eigen::MatrixXd dup(1, 3);
  dup << 0, 1, 1;
  try {
    make_base(*q, dup, Eigen::VectorXd::Ones(3));
    FAIL("expected Duplicate");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "base.points");
    CHECK(e.reason() == "Duplicate");
  }
  Eigen::MatrixXd pts(1, 2);
  pts << 0, 1;
  CHECK_THROWS_AS(make_base(*q, pts, fx::vec({1, 0})), ValidationError);
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(make_base(*q, pts, Eigen::VectorXd::Ones(2), bad), ValidationError);
  Eigen::MatrixXd tri(3, 3);
  tri << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  Eigen::MatrixXd pts3(1, 3);
  pts3 << 0, 1, 2;
  try {
    make_base(*q, pts3, Eigen::VectorXd::Ones(3), tri);
    FAIL("expected TriangleInequality");
  } catch (const ValidationError& e) {
    CHECK(e.reason() == "TriangleInequality");
  }
}

TEST_CASE("induced metric and closed balls") {
  fx::Line line;
  CHECK(line.b->dist(0, 2) == Approx(2.0));
  CHECK(line.b->ball(1, 1.0).size() == 3);  // closed: d = 1 is inside
  CHECK(line.b->ball(0, 0.5).size() == 1);
}

TEST_CASE("random fiber distances agree with the oracle") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t s = 2 + seed % 5;
    fx::Random rnd(seed + 100, s, 1 + seed % (s - 1 < 2 ? 1 : 2), 4);
    const Eigen::VectorXd x = rnd.gauss(rnd.q->source_dim());
    const double lambda = (seed % 2 ? -1.0 : 1.0) * (0.5 + static_cast<double>(seed % 3));
    const double fast = fiber_distance(*rnd.q, x, rnd.b->point(2), lambda);
    const double slow =
        oracle::fiber_distance(*rnd.q, x, rnd.b->point(2), lambda, oracle::Budget{}).value;
    CHECK(std::abs(fast - slow) < 1e-7);
  }
}
