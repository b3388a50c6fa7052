#include "ilslab/sections.hpp"

#include <cmath>
#include <utility>

#include "ilslab/error.hpp"

namespace ilslab {

namespace {

void require_scale(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw Error(ErrorKind::DegenerateScale, "scale must be a nonzero finite real");
  }
}

void require_same_base(const Section& phi, const Section& psi) {
  if (phi.base() != psi.base() || phi.quotient() != psi.quotient()) {
    throw Error(ErrorKind::MixedBases, "sections live over different bases or quotients");
  }
}

void require_unit_scale(const Section& phi) {
  if (phi.scale() != 1.0) {
    throw Error(ErrorKind::InvalidArgument, "operation needs a section of pi (scale 1)");
  }
}

}  // namespace

Section validate_section(QuotientPtr q, BasePtr base, Eigen::MatrixXd values, double lambda) {
  require_scale(lambda);
  if (!q || !base) throw Error(ErrorKind::InvalidArgument, "null quotient or base");
  if (values.rows() != static_cast<Eigen::Index>(q->source_dim()) ||
      values.cols() != static_cast<Eigen::Index>(base->size())) {
    throw Error(ErrorKind::InvalidArgument, "section values must be s x n");
  }
  if (!values.allFinite()) throw Error(ErrorKind::InvalidArgument, "section values not finite");

  double worst = 0.0;
  for (Eigen::Index i = 0; i < values.cols(); ++i) {
    const Eigen::VectorXd target = lambda * base->points.col(i);
    const Eigen::VectorXd x = values.col(i);
    const double residual = (q->matrix() * x - target).lpNorm<Eigen::Infinity>();
    if (residual > q->residual_threshold(x, target)) {
      throw NotOnFiberError(static_cast<std::size_t>(i), residual);
    }
    worst = std::max(worst, residual);
  }

  Section out;
  out.quotient_ = std::move(q);
  out.base_ = std::move(base);
  out.scale_ = lambda;
  out.values_ = std::move(values);
  out.worst_residual_ = worst;
  return out;
}

Section lift_section(QuotientPtr q, BasePtr base, const Eigen::MatrixXd& lift, double lambda) {
  require_scale(lambda);
  if (!q || !base) throw Error(ErrorKind::InvalidArgument, "null quotient or base");
  if (lift.rows() != static_cast<Eigen::Index>(q->fiber_dim()) ||
      lift.cols() != static_cast<Eigen::Index>(base->size())) {
    throw Error(ErrorKind::InvalidArgument, "lift coordinates must be (s-m) x n");
  }
  Eigen::MatrixXd values = lambda * (q->pinv() * base->points) + q->null_basis() * lift;
  return validate_section(std::move(q), std::move(base), std::move(values), lambda);
}

Eigen::MatrixXd lift_coordinates(const Section& phi) {
  const auto& q = *phi.quotient();
  return q.null_basis().transpose() * phi.values();
}

Section combine_sections(double alpha, const Section& phi, double beta, const Section& psi) {
  require_same_base(phi, psi);
  require_unit_scale(phi);
  require_unit_scale(psi);
  if (alpha == 0.0 || beta == 0.0) {
    throw Error(ErrorKind::ZeroCoefficient, "alpha and beta must be nonzero");
  }
  const double lambda = alpha + beta;
  require_scale(lambda);
  return validate_section(phi.quotient(), phi.base(), alpha * phi.values() + beta * psi.values(),
                          lambda);
}

Section scale_section(double lambda, const Section& phi) {
  require_scale(lambda);
  require_unit_scale(phi);
  return validate_section(phi.quotient(), phi.base(), lambda * phi.values(), lambda);
}

PlainField hadamard_product(const Section& phi, const Section& psi) {
  require_same_base(phi, psi);
  require_unit_scale(phi);
  require_unit_scale(psi);
  return PlainField{phi.base(), phi.values().cwiseProduct(psi.values())};
}

PlainField as_plain(const Section& phi) { return PlainField{phi.base(), phi.values()}; }

}  // namespace ilslab
