#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ilslab/oracles.hpp"

namespace ilslab::oracle {

namespace {

using Rows = std::vector<GoldenRow>;

constexpr double kSearchTol = 1e-7;
constexpr double kExactTol = 1e-12;

std::shared_ptr<const QuotientMap> quotient(std::initializer_list<double> row) {
  Eigen::MatrixXd a(1, static_cast<Eigen::Index>(row.size()));
  Eigen::Index c = 0;
  for (double v : row) a(0, c++) = v;
  return std::make_shared<const QuotientMap>(build_quotient(a));
}

std::shared_ptr<const SampledBase> line_base(const QuotientMap& q, std::vector<double> pts) {
  Eigen::MatrixXd b(1, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) b(0, static_cast<Eigen::Index>(i)) = pts[i];
  return make_base(q, b, Eigen::VectorXd::Ones(b.cols()));
}

Eigen::MatrixXd graph_values(const std::vector<double>& xs, const std::vector<double>& ys) {
  Eigen::MatrixXd v(2, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v(0, static_cast<Eigen::Index>(i)) = xs[i];
    v(1, static_cast<Eigen::Index>(i)) = ys[i];
  }
  return v;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Exhaustive d(x_y, F(z)) / gap(y, z) with every distance searched; gaps are
// measured from a point of F(y) shifted along the fiber.
double searched_c_min(const QuotientMap& q, const SampledBase& base, const Eigen::MatrixXd& values,
                      const Budget& budget) {
  double worst = 0.0;
  for (std::size_t y = 0; y < base.size(); ++y) {
    for (std::size_t z = 0; z < base.size(); ++z) {
      if (y == z) continue;
      const double num =
          fiber_distance(q, values.col(static_cast<Eigen::Index>(y)), base.point(z), 1.0, budget).value;
      const Eigen::VectorXd on_fiber =
          fiber_distance(q, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(q.source_dim()), 3.0),
                         base.point(y), 1.0, budget)
              .point;
      const double gap = fiber_distance(q, on_fiber, base.point(z), 1.0, budget).value;
      worst = std::max(worst, num / gap);
    }
  }
  return worst;
}

// Product-formula constants by enumeration with searched distances.
void searched_product(const QuotientMap& q, const SampledBase& base, const Eigen::MatrixXd& phi,
                      const Eigen::MatrixXd& psi, const Budget& budget, double& m_bound,
                      double& k) {
  m_bound = std::max(phi.cwiseAbs().maxCoeff(), psi.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd prod = phi.cwiseProduct(psi);
  k = 0.0;
  for (std::size_t z = 0; z < base.size(); ++z) {
    for (std::size_t y = 0; y < base.size(); ++y) {
      if (y == z) continue;
      const auto zi = static_cast<Eigen::Index>(z);
      const double a = fiber_distance(q, phi.col(zi), base.point(y), 1.0, budget).value;
      const double b = fiber_distance(q, psi.col(zi), base.point(y), 1.0, budget).value;
      const double c = fiber_distance(q, prod.col(zi), base.point(y), 1.0, budget).value;
      k = std::max(k, std::min(a, b) / c);
    }
  }
}

// Component norm (sum_y |v_y|^q w_y)^(1/q), written out directly.
double component(const std::vector<double>& v, const std::vector<double>& w, double q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), q) * w[i];
  return std::pow(acc, 1.0 / q);
}

}  // namespace

std::vector<GoldenRow> derived_values() {
  Rows rows;
  const Budget budget{2000, 20240601, 80};

  // Fiber geometry.
  const auto a10 = quotient({1.0, 0.0});
  const auto a11 = quotient({1.0, 1.0});
  {
    const Result r = fiber_distance(*a10, vec({3, 4}), vec({1}), 1.0, budget);
    rows.push_back({"A10_x34_b1", "fiber_distance", r.value, kSearchTol});
    rows.push_back({"A10_x34_b1", "projection_0", r.point(0), kSearchTol});
    rows.push_back({"A10_x34_b1", "projection_1", r.point(1), kSearchTol});
  }
  {
    const Result r = fiber_distance(*a11, vec({0, 0}), vec({2}), 1.0, budget);
    rows.push_back({"A11_x00_b2", "fiber_distance", r.value, kSearchTol});
    rows.push_back({"A11_x00_b2", "projection_0", r.point(0), kSearchTol});
    rows.push_back({"A11_x00_b2", "projection_1", r.point(1), kSearchTol});
  }
  {
    const Eigen::MatrixXd a = a11->matrix();
    const Eigen::MatrixXd normal = a.transpose() * (a * a.transpose()).inverse();
    rows.push_back({"A11", "pinv_0", normal(0, 0), kExactTol});
    rows.push_back({"A11", "pinv_1", normal(1, 0), kExactTol});
    // Minimal-norm point over b = 2 is the flat lift.
    const Eigen::VectorXd lifted = normal * vec({2});
    rows.push_back({"A11_lift_b02", "x1_0", lifted(0), kExactTol});
    rows.push_back({"A11_lift_b02", "x1_1", lifted(1), kExactTol});
  }
  for (double lambda : {1.0, 2.0}) {
    // A point of the lambda-fiber over b = 0, shifted along the kernel.
    const Result r = fiber_distance(*a10, vec({0.0, 3.0}), vec({5}), lambda, budget);
    rows.push_back({"A10_b0_b5", "fiber_gap_lambda" + std::to_string(static_cast<int>(lambda)),
                    r.value, kSearchTol});
  }
  {
    const Result r = fiber_distance(*a11, vec({-1.0, 1.0}), vec({2}), 1.0, budget);
    rows.push_back({"A11_b0_b2", "fiber_gap_lambda1", r.value, kSearchTol});
  }

  // Intrinsic Lipschitz constants on graph fixtures over b = {0, 1, 2}.
  const std::vector<double> line{0, 1, 2};
  const auto base3 = line_base(*a10, line);
  rows.push_back({"graph_2y", "ILS", graph_ils(line, {0, 2, 4}), kExactTol});
  rows.push_back({"graph_flat", "ILS", graph_ils(line, {0, 0, 0}), kExactTol});
  rows.push_back({"graph_003", "ILS", graph_ils(line, {0, 0, 3}), kExactTol});
  rows.push_back({"graph_2y", "ILS_searched",
                  pairwise_ils(*a10, *base3, graph_values(line, {0, 2, 4}), 1.0, budget),
                  kSearchTol});
  rows.push_back({"graph_003", "ILS_searched",
                  pairwise_ils(*a10, *base3, graph_values(line, {0, 0, 3}), 1.0, budget),
                  kSearchTol});
  // eps = 1.2 ball around the middle point holds all three points.
  rows.push_back({"graph_003", "asymptotic_mid_eps1.2", graph_ils(line, {0, 0, 3}), kExactTol});
  // Every pair of the (y, 2y) graph has ratio sqrt(1 + 2^2).
  rows.push_back({"graph_2y", "slope_eps1.5", graph_ils({0, 1}, {0, 2}), kExactTol});

  rows.push_back({"graph_2y", "c_min",
                  searched_c_min(*a10, *base3, graph_values(line, {0, 2, 4}), budget), kSearchTol});
  rows.push_back({"graph_flat", "c_min",
                  searched_c_min(*a10, *base3, graph_values(line, {0, 0, 0}), budget), kSearchTol});
  {
    const auto base2 = line_base(*a10, {0, 1});
    rows.push_back({"plain_10_30", "c_min",
                    searched_c_min(*a10, *base2, graph_values({1, 3}, {0, 0}), budget), kSearchTol});
  }

  // Product constants over b = {1, 2}.
  {
    const auto base12 = line_base(*a10, {1, 2});
    const Eigen::MatrixXd one = graph_values({1, 2}, {1, 1});
    const Eigen::MatrixXd ident = graph_values({1, 2}, {1, 2});
    double m = 0.0, k = 0.0;
    searched_product(*a10, *base12, one, one, budget, m, k);
    rows.push_back({"product_11", "M", m, kExactTol});
    rows.push_back({"product_11", "k", k, kSearchTol});
    const double lhs = pairwise_ils(*a10, *base12, one.cwiseProduct(one), 1.0, budget);
    const double ils_one = pairwise_ils(*a10, *base12, one, 1.0, budget);
    rows.push_back({"product_11", "lhs", lhs, kSearchTol});
    rows.push_back({"product_11", "rhs", m * k * (ils_one + ils_one), kSearchTol});
    searched_product(*a10, *base12, one, ident, budget, m, k);
    rows.push_back({"product_1y", "M", m, kExactTol});
    rows.push_back({"product_1y", "k", k, kSearchTol});
  }

  // Leibniz margins with c = 2: eta measured against (1/(alpha+beta)) pi.
  {
    const double rhs = graph_ils(line, {0, 2, 4}) + graph_ils(line, {0, 0, 0});
    const double sum_ils = pairwise_ils(*a10, *base3, graph_values({0, 2, 4}, {0, 2, 4}), 2.0, budget);
    rows.push_back({"leibniz_a1_b1", "margin", rhs - sum_ils, kSearchTol});
    const double mix_ils = pairwise_ils(*a10, *base3, graph_values({0, 2, 4}, {0, 6, 12}), 2.0, budget);
    rows.push_back({"leibniz_a3_bm1", "margin", rhs - mix_ils, kSearchTol});
  }

  // L^q norms, component by component.
  {
    const double c1 = component({3, 0}, {1, 1}, 2.0);
    const double c2 = component({4, 0}, {1, 1}, 2.0);
    rows.push_back({"lq_34_00", "sum", c1 + c2, kExactTol});
    rows.push_back({"lq_34_00", "max", std::max(c1, c2), kExactTol});
    rows.push_back({"lq_34_00", "quad", std::sqrt(c1 * c1 + c2 * c2), kExactTol});
    rows.push_back({"lq_weighted", "sum",
                    component({1, 0}, {2, 1}, 2.0) + component({-1, 3}, {2, 1}, 2.0), kExactTol});
    rows.push_back({"lq_shift", "sum",
                    component({1, 1}, {1, 1}, 2.0) + component({0, 0}, {1, 1}, 2.0), kExactTol});
  }

  // Cheeger energies at eps = 1.5 with unit weights.
  rows.push_back({"graph_flat", "energy_a",
                  energy(*a10, *base3, graph_values(line, {0, 0, 0}), 1.0, 1.5, EnergyVariant::a),
                  kExactTol});
  rows.push_back({"graph_2y", "energy_a",
                  energy(*a10, *base3, graph_values(line, {0, 2, 4}), 1.0, 1.5, EnergyVariant::a),
                  1e-9});
  {
    const Section phi = validate_section(a10, base3, graph_values(line, {0, 2, 4}), 1.0);
    const Result r = relaxation_search(phi, AdmissibleClass{2.0, 10.0}, 1.5, EnergyVariant::a,
                                       Budget{4000, 99, 80});
    rows.push_back({"graph_2y", "relaxed_energy_search", r.value, 1e-4});
  }
  return rows;
}

}  // namespace ilslab::oracle
