#include "ilslab/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ilslab/error.hpp"

namespace ilslab {

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::euclidean: return "euclidean";
    case Norm::l1: return "l1";
    case Norm::linf: return "linf";
  }
  return "euclidean";
}

Norm parse_norm(std::string_view text) {
  if (text == "euclidean" || text == "l2") return Norm::euclidean;
  if (text == "l1") return Norm::l1;
  if (text == "linf") return Norm::linf;
  throw Error(ErrorKind::InvalidArgument, "unknown norm '" + std::string(text) + "'");
}

double norm_value(const Eigen::VectorXd& v, Norm norm) {
  switch (norm) {
    case Norm::euclidean: return v.norm();
    case Norm::l1: return v.lpNorm<1>();
    case Norm::linf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }
  return v.norm();
}

double QuotientMap::residual_threshold(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& target) const {
  const double xs = x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0;
  const double ts = target.size() ? target.lpNorm<Eigen::Infinity>() : 0.0;
  return tol_ * (1.0 + sigma_max_ * xs + ts);
}

QuotientMap build_quotient(const Eigen::MatrixXd& a, Norm norm, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be nonnegative");
  const auto m = a.rows();
  const auto s = a.cols();
  if (m < 1 || s < 1) throw Error(ErrorKind::InvalidArgument, "empty matrix");
  if (m >= s) {
    throw Error(ErrorKind::NotStrictQuotient,
                "need m < s, got m=" + std::to_string(m) + " s=" + std::to_string(s));
  }
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double sigma_max = sv.size() ? sv(0) : 0.0;
  const double cutoff = std::max(tol, std::numeric_limits<double>::epsilon()) * sigma_max;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  }
  if (rank < m) {
    throw Error(ErrorKind::RankDeficient,
                "rank " + std::to_string(rank) + " < m=" + std::to_string(m));
  }

  QuotientMap q;
  q.a_ = a;
  q.norm_ = norm;
  q.tol_ = tol;
  q.sigma_max_ = sigma_max;
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  q.pinv_ = v.leftCols(m) * sv.head(m).cwiseInverse().asDiagonal() * u.transpose();
  q.null_basis_ = v.rightCols(s - m);
  return q;
}

std::vector<std::size_t> SampledBase::ball(std::size_t i, double radius) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j == i || dist(i, j) <= radius) out.push_back(j);
  }
  return out;
}

std::shared_ptr<const SampledBase> make_base(const QuotientMap& q, Eigen::MatrixXd points,
                                             Eigen::VectorXd weights,
                                             std::optional<Eigen::MatrixXd> metric,
                                             std::vector<std::string> labels) {
  const auto m = static_cast<Eigen::Index>(q.target_dim());
  if (points.rows() != m) {
    throw ValidationError("base.points", "DimensionMismatch",
                          "points must have " + std::to_string(m) + " coordinates");
  }
  const auto n = points.cols();
  if (n < 1) throw ValidationError("base.points", "Empty");
  if (!points.allFinite()) throw ValidationError("base.points", "NonFinite");
  if (weights.size() != n) throw ValidationError("base.weights", "DimensionMismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      throw ValidationError("base.weights", "NonPositive",
                            "weight " + std::to_string(i) + " must be positive");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if ((points.col(i) - points.col(j)).lpNorm<Eigen::Infinity>() == 0.0) {
        throw ValidationError("base.points", "Duplicate",
                              "points " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
    throw ValidationError("base.labels", "DimensionMismatch");
  }

  auto base = std::make_shared<SampledBase>();
  base->points = std::move(points);
  base->weights = std::move(weights);
  base->labels = std::move(labels);

  if (metric) {
    const Eigen::MatrixXd& d = *metric;
    if (d.rows() != n || d.cols() != n) throw ValidationError("base.metric", "DimensionMismatch");
    if (!d.allFinite()) throw ValidationError("base.metric", "NonFinite");
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    const double slack = q.tol() * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d(i, i) != 0.0) throw ValidationError("base.metric", "NonzeroDiagonal");
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        if (std::abs(d(i, j) - d(j, i)) > slack) throw ValidationError("base.metric", "Asymmetric");
        if (!(d(i, j) > 0.0)) throw ValidationError("base.metric", "NonPositive");
        for (Eigen::Index k = 0; k < n; ++k) {
          if (d(i, k) > d(i, j) + d(j, k) + slack) {
            throw ValidationError("base.metric", "TriangleInequality",
                                  "d(" + std::to_string(i) + "," + std::to_string(k) + ")");
          }
        }
      }
    }
    base->metric = d;
    base->explicit_metric = true;
  } else {
    base->metric = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double g = fiber_gap(q, base->points.col(i), base->points.col(j), 1.0);
        base->metric(i, j) = g;
        base->metric(j, i) = g;
      }
    }
  }
  return base;
}

namespace {

void require_scale(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw Error(ErrorKind::DegenerateScale, "scale must be a nonzero finite real");
  }
}

// Visits every k-subset of {0, ..., n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

// argmin_v |r - N v|_p for p in {1, inf}. Both problems are linear programs
// whose optimum is attained at a vertex; with s <= 8 the vertices can be
// enumerated outright.
Eigen::VectorXd polyhedral_fit(const Eigen::MatrixXd& nb, const Eigen::VectorXd& r, Norm norm) {
  const int s = static_cast<int>(nb.rows());
  const int k = static_cast<int>(nb.cols());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(k);
  double best_val = norm_value(r, norm);

  auto consider = [&](const Eigen::VectorXd& v) {
    if (!v.allFinite()) return;
    const double val = norm_value(r - nb * v, norm);
    if (val < best_val) {
      best_val = val;
      best = v;
    }
  };

  if (norm == Norm::l1) {
    // L1 regression: an optimal vertex interpolates k residuals exactly.
    for_each_subset(s, k, [&](const std::vector<int>& rows) {
      Eigen::MatrixXd sys(k, k);
      Eigen::VectorXd rhs(k);
      for (int i = 0; i < k; ++i) {
        sys.row(i) = nb.row(rows[static_cast<std::size_t>(i)]);
        rhs(i) = r(rows[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      if (lu.rank() < k) return;
      consider(lu.solve(rhs));
    });
  } else {
    // Chebyshev fit: k + 1 residuals equioscillate at +-t at an optimal vertex.
    for_each_subset(s, k + 1, [&](const std::vector<int>& rows) {
      for (int mask = 0; mask < (1 << (k + 1)); ++mask) {
        Eigen::MatrixXd sys(k + 1, k + 1);
        Eigen::VectorXd rhs(k + 1);
        for (int i = 0; i <= k; ++i) {
          const int row = rows[static_cast<std::size_t>(i)];
          sys.row(i).head(k) = nb.row(row);
          sys(i, k) = (mask >> i) & 1 ? 1.0 : -1.0;
          rhs(i) = r(row);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
        if (lu.rank() < k + 1) continue;
        const Eigen::VectorXd sol = lu.solve(rhs);
        consider(sol.head(k));
      }
    });
  }
  return best;
}

struct FiberProjection {
  Eigen::VectorXd point;
  double distance;
};

FiberProjection project(const QuotientMap& q, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                        double lambda) {
  require_scale(lambda);
  if (static_cast<std::size_t>(x.size()) != q.source_dim() ||
      static_cast<std::size_t>(b.size()) != q.target_dim()) {
    throw Error(ErrorKind::InvalidArgument, "dimension mismatch in fiber query");
  }
  const Eigen::VectorXd target = lambda * b;
  if (q.norm() == Norm::euclidean) {
    const Eigen::VectorXd correction = q.pinv() * (q.matrix() * x - target);
    return {x - correction, correction.norm()};
  }

  const Eigen::VectorXd base_point = q.pinv() * target;
  const Eigen::VectorXd r = x - base_point;
  const Eigen::MatrixXd& nb = q.null_basis();
  const Eigen::VectorXd v = polyhedral_fit(nb, r, q.norm());
  const Eigen::VectorXd z = base_point + nb * v;
  const double dist = norm_value(x - z, q.norm());

  // Certificate: z sits on the fiber and no small move along ker(A) improves it.
  const double residual = (q.matrix() * z - target).lpNorm<Eigen::Infinity>();
  if (residual > q.residual_threshold(z, target)) {
    throw Error(ErrorKind::SolverTolerance, "fiber residual " + std::to_string(residual));
  }
  const double scale = 1.0 + r.lpNorm<Eigen::Infinity>();
  const double step = 1e-6 * scale;
  const double slack = std::max(q.tol(), 1e-12) * scale;
  for (Eigen::Index j = 0; j < nb.cols(); ++j) {
    for (double sign : {1.0, -1.0}) {
      const double probe = norm_value(x - (z + sign * step * nb.col(j)), q.norm());
      if (probe < dist - slack) {
        throw Error(ErrorKind::SolverTolerance, "fiber projection is not locally optimal");
      }
    }
  }
  return {z, dist};
}

}  // namespace

double fiber_distance(const QuotientMap& q, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                      double lambda) {
  return project(q, x, b, lambda).distance;
}

double fiber_distance(const QuotientMap& q, const SampledBase& base, const Eigen::VectorXd& x,
                      std::size_t y, double lambda) {
  return fiber_distance(q, x, base.point(y), lambda);
}

double fiber_gap(const QuotientMap& q, const Eigen::VectorXd& b1, const Eigen::VectorXd& b2,
                 double lambda) {
  require_scale(lambda);
  if (q.norm() == Norm::euclidean) {
    return (q.pinv() * (lambda * (b1 - b2))).norm();
  }
  // Translating along ker(A) does not change the distance between parallel
  // fibers; fitting the offset directly keeps the result exactly symmetric.
  const Eigen::VectorXd r = q.pinv() * (lambda * (b1 - b2));
  const Eigen::VectorXd v = polyhedral_fit(q.null_basis(), r, q.norm());
  return norm_value(r - q.null_basis() * v, q.norm());
}

double fiber_gap(const QuotientMap& q, const SampledBase& base, std::size_t y1, std::size_t y2,
                 double lambda) {
  return fiber_gap(q, base.point(y1), base.point(y2), lambda);
}

Eigen::VectorXd project_to_fiber(const QuotientMap& q, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& b, double lambda) {
  return project(q, x, b, lambda).point;
}

Eigen::VectorXd project_to_fiber(const QuotientMap& q, const SampledBase& base,
                                 const Eigen::VectorXd& x, std::size_t y, double lambda) {
  return project_to_fiber(q, x, base.point(y), lambda);
}

}  // namespace ilslab
