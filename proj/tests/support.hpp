#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <memory>
#include <random>
#include <vector>

#include "ilslab/quotient.hpp"
#include "ilslab/sections.hpp"

namespace fx {

using namespace ilslab;

inline QuotientPtr quotient(std::initializer_list<std::initializer_list<double>> rows,
                            Norm norm = Norm::euclidean) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) a(r, c++) = v;
    ++r;
  }
  return std::make_shared<const QuotientMap>(build_quotient(a, norm));
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Points given one per base element, each of length m.
inline BasePtr base(const QuotientMap& q, std::initializer_list<std::initializer_list<double>> pts) {
  Eigen::MatrixXd b(static_cast<Eigen::Index>(pts.begin()->size()),
                    static_cast<Eigen::Index>(pts.size()));
  Eigen::Index c = 0;
  for (const auto& p : pts) {
    Eigen::Index r = 0;
    for (double v : p) b(r++, c) = v;
    ++c;
  }
  return make_base(q, b, Eigen::VectorXd::Ones(b.cols()));
}

/// Columns given one per base element.
inline Eigen::MatrixXd cols(std::initializer_list<std::initializer_list<double>> pts) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(pts.begin()->size()),
                    static_cast<Eigen::Index>(pts.size()));
  Eigen::Index c = 0;
  for (const auto& p : pts) {
    Eigen::Index r = 0;
    for (double x : p) v(r++, c) = x;
    ++c;
  }
  return v;
}

// A = [[1, 0]] over b = {0, 1, 2}.
struct Line {
  QuotientPtr q = quotient({{1, 0}});
  BasePtr b = base(*q, {{0}, {1}, {2}});
  Section graph(double a0, double a1, double a2) const {
    return validate_section(q, b, cols({{0, a0}, {1, a1}, {2, a2}}), 1.0);
  }
  Section phi() const { return graph(0, 2, 4); }
  Section flat() const { return graph(0, 0, 0); }
};

/// Random full-rank quotient with s <= 6, m <= 3 and its random base.
struct Random {
  QuotientPtr q;
  BasePtr b;
  std::mt19937_64 rng;

  Random(std::uint64_t seed, std::size_t s, std::size_t m, std::size_t n) : rng(seed) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(s));
    for (;;) {
      for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = g(rng);
      const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
      if (sv(sv.size() - 1) > 1e-2 * sv(0)) break;
    }
    q = std::make_shared<const QuotientMap>(build_quotient(a));
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < pts.size(); ++i) pts(i) = g(rng);
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = u(rng);
    b = make_base(*q, pts, w);
  }

  Eigen::VectorXd gauss(std::size_t dim) {
    std::normal_distribution<double> g;
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
    return v;
  }

  /// Lift coordinates scaled by `spread`.
  Section section(double spread = 1.0, double lambda = 1.0) {
    const auto k = static_cast<Eigen::Index>(q->fiber_dim());
    const auto n = static_cast<Eigen::Index>(b->size());
    Eigen::MatrixXd lift(k, n);
    for (Eigen::Index i = 0; i < n; ++i) lift.col(i) = spread * gauss(static_cast<std::size_t>(k));
    return lift_section(q, b, lift, lambda);
  }
};

}  // namespace fx
