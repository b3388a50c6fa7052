#include "ilslab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "ilslab/error.hpp"

namespace ilslab::oracle {

namespace {

double own_norm(const Eigen::VectorXd& v, Norm norm) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (norm == Norm::euclidean) acc += a * a;
    else if (norm == Norm::l1) acc += a;
    else acc = std::max(acc, a);
  }
  return norm == Norm::euclidean ? std::sqrt(acc) : acc;
}

// Fiber parametrisation independent of the SVD used by QuotientMap:
// particular solution via the normal equations, kernel via full-pivot LU.
struct Parametrisation {
  Eigen::MatrixXd right_inverse;  // A^T (A A^T)^{-1}
  Eigen::MatrixXd kernel;         // columns span ker(A), unit length
};

Parametrisation parametrise(const Eigen::MatrixXd& a) {
  Parametrisation p;
  const Eigen::MatrixXd gram = a * a.transpose();
  p.right_inverse = a.transpose() * gram.ldlt().solve(Eigen::MatrixXd::Identity(a.rows(), a.rows()));
  p.kernel = Eigen::FullPivLU<Eigen::MatrixXd>(a).kernel();
  for (Eigen::Index c = 0; c < p.kernel.cols(); ++c) p.kernel.col(c).normalize();
  return p;
}

struct CompassOutcome {
  Eigen::VectorXd x;
  double f;
  bool exhausted;
};

// Compass search: +-e_j polls, then random unit directions (kinks of
// polyhedral norms defeat coordinate polls alone), halve on failure.
CompassOutcome compass(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
                       double step, double min_step, std::size_t max_halvings,
                       std::size_t max_moves, std::size_t random_polls = 0,
                       std::uint64_t seed = 0) {
  double fx = f(x);
  std::size_t halvings = 0;
  std::size_t moves = 0;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  while (step >= min_step) {
    bool improved = false;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = x;
        trial(j) += sign * step;
        const double ft = f(trial);
        if (ft < fx) {
          x = std::move(trial);
          fx = ft;
          improved = true;
          break;
        }
      }
    }
    for (std::size_t t = 0; !improved && t < random_polls; ++t) {
      Eigen::VectorXd d(x.size());
      for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = gauss(rng);
      const double len = d.norm();
      if (len == 0.0) continue;
      const Eigen::VectorXd trial = x + (step / len) * d;
      const double ft = f(trial);
      if (ft < fx) {
        x = trial;
        fx = ft;
        improved = true;
      }
    }
    if (improved) {
      if (++moves > max_moves) return {x, fx, true};
    } else {
      step *= 0.5;
      if (++halvings > max_halvings) return {x, fx, true};
    }
  }
  return {x, fx, false};
}

}  // namespace

Result fiber_distance(const QuotientMap& q, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                      double lambda, const Budget& budget) {
  if (lambda == 0.0) throw Error(ErrorKind::DegenerateScale, "scale must be nonzero");
  const Parametrisation p = parametrise(q.matrix());
  const Eigen::VectorXd z0 = p.right_inverse * (lambda * b);
  const Eigen::VectorXd r = x - z0;
  const Norm norm = q.norm();
  auto f = [&](const Eigen::VectorXd& v) { return own_norm(r - p.kernel * v, norm); };

  const double scale = 1.0 + own_norm(r, Norm::linf);
  std::mt19937_64 rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, scale);
  Eigen::VectorXd best = Eigen::VectorXd::Zero(p.kernel.cols());
  double best_f = f(best);
  for (std::size_t s = 0; s < budget.samples; ++s) {
    Eigen::VectorXd v(p.kernel.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    const double fv = f(v);
    if (fv < best_f) {
      best_f = fv;
      best = v;
    }
  }
  const CompassOutcome out = compass(f, best, 0.5 * scale, 1e-14 * scale, budget.rounds, 200000,
              8 * static_cast<std::size_t>(p.kernel.cols()), budget.seed);
  return {out.f, out.exhausted, z0 + p.kernel * out.x};
}

double graph_ils(const std::vector<double>& base, const std::vector<double>& f) {
  double best = 1.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (i == j) continue;
      const double gap = std::abs(base[i] - base[j]);
      const double df = f[i] - f[j];
      best = std::max(best, std::sqrt(gap * gap + df * df) / gap);
    }
  }
  return best;
}

double pairwise_ils(const QuotientMap& q, const SampledBase& base, const Eigen::MatrixXd& values,
                    double scale, const Budget& budget) {
  double best = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Eigen::VectorXd xi = values.col(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (i == j) continue;
      const Eigen::VectorXd xj = values.col(static_cast<Eigen::Index>(j));
      const double num = own_norm(xi - xj, q.norm());
      const double den = fiber_distance(q, xi, base.point(j), scale, budget).value;
      best = std::max(best, num / den);
    }
  }
  return best;
}

double energy(const QuotientMap& q, const SampledBase& base, const Eigen::MatrixXd& values,
              double scale, double eps, EnergyVariant variant) {
  const Parametrisation p = parametrise(q.matrix());
  const std::size_t n = base.size();
  auto ratio = [&](std::size_t i, std::size_t j) {
    const Eigen::VectorXd xi = values.col(static_cast<Eigen::Index>(i));
    const Eigen::VectorXd xj = values.col(static_cast<Eigen::Index>(j));
    const double num = own_norm(xi - xj, q.norm());
    double den = 0.0;
    if (q.norm() == Norm::euclidean) {
      den = (p.right_inverse * (q.matrix() * xi - scale * base.point(j))).norm();
    } else {
      den = fiber_distance(q, xi, base.point(j), scale, Budget{200, 7, 60}).value;
    }
    return num / den;
  };
  double total = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    std::vector<std::size_t> ball;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == z || base.dist(y, z) <= eps) ball.push_back(y);
    }
    if (ball.size() < 2) throw EmptyBallError(z);
    double slope = 0.0;
    if (variant == EnergyVariant::ils) {
      for (std::size_t y : ball) {
        if (y != z) slope = std::max(slope, ratio(y, z));
      }
    } else {
      for (std::size_t a : ball) {
        for (std::size_t c : ball) {
          if (a != c) slope = std::max(slope, ratio(a, c));
        }
      }
    }
    total += base.weights(static_cast<Eigen::Index>(z)) * slope * slope;
  }
  return total;
}

Result relaxation_search(const Section& phi, const AdmissibleClass& cls, double eps,
                         EnergyVariant variant, const Budget& budget) {
  const QuotientMap& q = *phi.quotient();
  const SampledBase& base = *phi.base();
  const Parametrisation p = parametrise(q.matrix());
  const auto k = p.kernel.cols();
  const auto n = static_cast<Eigen::Index>(base.size());
  const Eigen::MatrixXd anchor = p.right_inverse * (phi.scale() * base.points);
  const double radius = cls.bound_radius;

  auto values_of = [&](const Eigen::VectorXd& v) -> Eigen::MatrixXd {
    return anchor + p.kernel * Eigen::Map<const Eigen::MatrixXd>(v.data(), k, n);
  };
  auto feasible = [&](const Eigen::VectorXd& v) {
    return values_of(v).cwiseAbs().maxCoeff() <= radius;
  };
  auto f = [&](const Eigen::VectorXd& v) {
    if (!feasible(v)) return std::numeric_limits<double>::infinity();
    return energy(q, base, values_of(v), phi.scale(), eps, variant);
  };

  // Candidates: phi itself plus random lifts, kept sorted by energy.
  std::vector<std::pair<double, Eigen::VectorXd>> pool;
  const Eigen::MatrixXd phi_coords = p.kernel.transpose() * (phi.values() - anchor);
  const Eigen::VectorXd v_phi = Eigen::Map<const Eigen::VectorXd>(phi_coords.data(), k * n);
  pool.emplace_back(f(v_phi), v_phi);

  std::mt19937_64 rng(budget.seed);
  std::uniform_real_distribution<double> uni(-radius, radius);
  std::uniform_real_distribution<double> log_scale(std::log(1e-4), 0.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t s = 0; s < budget.samples; ++s) {
    Eigen::VectorXd v(k * n);
    if (s % 2 == 0) {
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uni(rng);
    } else {
      Eigen::VectorXd common(k);
      for (Eigen::Index i = 0; i < k; ++i) common(i) = uni(rng);
      const double spread = radius * std::exp(log_scale(rng));
      for (Eigen::Index pt = 0; pt < n; ++pt) {
        for (Eigen::Index i = 0; i < k; ++i) v(pt * k + i) = common(i) + spread * gauss(rng);
      }
    }
    for (int shrink = 0; shrink < 30 && !feasible(v); ++shrink) v *= 0.5;
    if (!feasible(v)) continue;
    pool.emplace_back(f(v), v);
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  Result best{std::numeric_limits<double>::infinity(), false, {}};
  const std::size_t refine = std::min<std::size_t>(3, pool.size());
  for (std::size_t r = 0; r < refine; ++r) {
    const CompassOutcome out =
        compass(f, pool[r].second, 0.1 * radius, 1e-9 * radius, budget.rounds, 20000);
    if (out.f < best.value) {
      best.value = out.f;
      best.point = out.x;
      best.budget_exhausted = out.exhausted;
    }
  }
  return best;
}

void write_golden(const std::vector<GoldenRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << "fixture,quantity,value,tolerance\n";
  char buf[64];
  for (const auto& row : rows) {
    out << row.fixture << ',' << row.quantity << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.value);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.3g", row.tolerance);
    out << buf << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

std::vector<GoldenRow> read_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::vector<GoldenRow> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    GoldenRow row;
    std::string value, tol;
    if (!std::getline(ss, row.fixture, ',') || !std::getline(ss, row.quantity, ',') ||
        !std::getline(ss, value, ',') || !std::getline(ss, tol, ',')) {
      throw Error(ErrorKind::ParseError, "malformed golden row: " + line);
    }
    row.value = std::stod(value);
    row.tolerance = std::stod(tol);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ilslab::oracle
