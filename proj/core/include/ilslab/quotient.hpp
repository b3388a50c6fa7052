#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ilslab {

inline constexpr double kDefaultTol = 1e-10;

enum class Norm { euclidean, l1, linf };

std::string_view to_string(Norm norm);
Norm parse_norm(std::string_view text);

/// Norm of `v` under the given tag.
double norm_value(const Eigen::VectorXd& v, Norm norm);

/// A full-rank linear surjection A: R^s -> R^m with 1 <= m < s, together with
/// its Moore-Penrose pseudoinverse and an orthonormal basis of ker(A).
///
/// Fibers are the parallel affine sets {z : A z = lambda * b}; every distance
/// query in the library goes through this type. Immutable after construction.
class QuotientMap {
 public:
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  const Eigen::MatrixXd& pinv() const noexcept { return pinv_; }
  const Eigen::MatrixXd& null_basis() const noexcept { return null_basis_; }
  Norm norm() const noexcept { return norm_; }
  double tol() const noexcept { return tol_; }
  double largest_singular_value() const noexcept { return sigma_max_; }

  std::size_t source_dim() const noexcept { return static_cast<std::size_t>(a_.cols()); }
  std::size_t target_dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  std::size_t fiber_dim() const noexcept { return source_dim() - target_dim(); }

  double distance(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
    return norm_value(x - z, norm_);
  }

  /// Acceptance threshold for |A x - lambda b| at a point of magnitude |x|.
  double residual_threshold(const Eigen::VectorXd& x, const Eigen::VectorXd& target) const;

 private:
  friend QuotientMap build_quotient(const Eigen::MatrixXd& a, Norm norm, double tol);

  Eigen::MatrixXd a_;
  Eigen::MatrixXd pinv_;
  Eigen::MatrixXd null_basis_;
  Norm norm_ = Norm::euclidean;
  double tol_ = kDefaultTol;
  double sigma_max_ = 0.0;
};

/// Throws RankDeficient if rank(A) < m, NotStrictQuotient if m >= s.
/// Rank is decided by singular values above tol * sigma_max.
QuotientMap build_quotient(const Eigen::MatrixXd& a, Norm norm = Norm::euclidean,
                           double tol = kDefaultTol);

/// Finite metric measure space (Y, d_Y, m) given by base coordinates b_i in
/// R^m (the images of the fibers), positive weights and a resolved distance
/// matrix. With no explicit metric, d_Y(i, j) = fiber_gap(i, j, 1).
struct SampledBase {
  Eigen::MatrixXd points;   // m x n, column i is b_i
  Eigen::VectorXd weights;  // n
  Eigen::MatrixXd metric;   // n x n
  bool explicit_metric = false;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return static_cast<std::size_t>(points.cols()); }
  Eigen::VectorXd point(std::size_t i) const { return points.col(static_cast<Eigen::Index>(i)); }
  double dist(std::size_t i, std::size_t j) const {
    return metric(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Indices j with d(i, j) <= radius; includes i itself.
  std::vector<std::size_t> ball(std::size_t i, double radius) const;
};

/// Validates and builds a base. Duplicate points, non-positive weights and
/// explicit metrics that are not symmetric / zero-diagonal / positive /
/// triangle-consistent within Q.tol() raise ValidationError.
std::shared_ptr<const SampledBase> make_base(const QuotientMap& q, Eigen::MatrixXd points,
                                             Eigen::VectorXd weights,
                                             std::optional<Eigen::MatrixXd> metric = std::nullopt,
                                             std::vector<std::string> labels = {});

/// Distance from x to the rescaled fiber {z : A z = lambda * b}.
double fiber_distance(const QuotientMap& q, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                      double lambda);
double fiber_distance(const QuotientMap& q, const SampledBase& base, const Eigen::VectorXd& x,
                      std::size_t y, double lambda);

/// Distance between the parallel fibers over b1 and b2 at scale lambda.
double fiber_gap(const QuotientMap& q, const Eigen::VectorXd& b1, const Eigen::VectorXd& b2,
                 double lambda);
double fiber_gap(const QuotientMap& q, const SampledBase& base, std::size_t y1, std::size_t y2,
                 double lambda);

/// Nearest point of the fiber {z : A z = lambda * b} to x (a minimizer for
/// non-Euclidean norms).
Eigen::VectorXd project_to_fiber(const QuotientMap& q, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& b, double lambda);
Eigen::VectorXd project_to_fiber(const QuotientMap& q, const SampledBase& base,
                                 const Eigen::VectorXd& x, std::size_t y, double lambda);

}  // namespace ilslab
