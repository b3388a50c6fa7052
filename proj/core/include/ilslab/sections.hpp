#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>

#include "ilslab/quotient.hpp"

namespace ilslab {

using QuotientPtr = std::shared_ptr<const QuotientMap>;
using BasePtr = std::shared_ptr<const SampledBase>;

/// A section of (1/lambda) pi over a sampled base: value x_i sits on the fiber
/// {z : A z = lambda * b_i}. Only the factory functions below create one, so
/// every live Section satisfies the fiber constraint within Q.tol().
class Section {
 public:
  const QuotientPtr& quotient() const noexcept { return quotient_; }
  const BasePtr& base() const noexcept { return base_; }
  double scale() const noexcept { return scale_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }  // s x n
  Eigen::VectorXd value(std::size_t i) const { return values_.col(static_cast<Eigen::Index>(i)); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  /// Largest |A x_i - lambda b_i|_inf seen at construction.
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  friend Section validate_section(QuotientPtr, BasePtr, Eigen::MatrixXd, double);

  QuotientPtr quotient_;
  BasePtr base_;
  double scale_ = 1.0;
  Eigen::MatrixXd values_;
  double worst_residual_ = 0.0;
};

/// Values without a fiber constraint (e.g. the Hadamard product of two
/// sections, which is generally not a section).
struct PlainField {
  BasePtr base;
  Eigen::MatrixXd values;  // s x n

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.cols()); }
  Eigen::VectorXd value(std::size_t i) const { return values.col(static_cast<Eigen::Index>(i)); }
};

/// Throws NotOnFiberError(index, residual) for the first violating point,
/// DegenerateScale for lambda == 0.
Section validate_section(QuotientPtr q, BasePtr base, Eigen::MatrixXd values, double lambda);

/// x_i = lambda * A^+ b_i + N u_i, with u given as (s - m) x n coordinates.
Section lift_section(QuotientPtr q, BasePtr base, const Eigen::MatrixXd& lift, double lambda);

/// Null-space coordinates u with lift_section(q, base, u, scale) == phi.
Eigen::MatrixXd lift_coordinates(const Section& phi);

/// alpha * phi + beta * psi, a section of (1 / (alpha + beta)) pi.
Section combine_sections(double alpha, const Section& phi, double beta, const Section& psi);

/// lambda * phi for a section of pi; the result is a section of (1/lambda) pi.
Section scale_section(double lambda, const Section& phi);

/// Componentwise product of two sections of pi.
PlainField hadamard_product(const Section& phi, const Section& psi);

PlainField as_plain(const Section& phi);

}  // namespace ilslab
