#include "ilslab/lq.hpp"

#include <cmath>
#include <string>

#include "ilslab/error.hpp"

namespace ilslab {

WeightedField WeightedField::scalar(BasePtr base, const Eigen::VectorXd& v) {
  WeightedField f{std::move(base), Eigen::MatrixXd(1, v.size())};
  f.values.row(0) = v.transpose();
  return f;
}

WeightedField WeightedField::of(const Section& phi) { return {phi.base(), phi.values()}; }

Eigen::VectorXd WeightedField::as_vector() const {
  if (values.rows() != 1) throw Error(ErrorKind::InvalidArgument, "not a scalar field");
  return values.row(0).transpose();
}

std::string_view to_string(LqVariant v) {
  switch (v) {
    case LqVariant::sum: return "sum";
    case LqVariant::max: return "max";
    case LqVariant::quad: return "quad";
  }
  return "sum";
}

LqVariant parse_lq_variant(std::string_view text) {
  if (text == "sum") return LqVariant::sum;
  if (text == "max") return LqVariant::max;
  if (text == "quad") return LqVariant::quad;
  throw Error(ErrorKind::InvalidArgument, "unknown L^q variant '" + std::string(text) + "'");
}

Eigen::VectorXd component_norms(const WeightedField& field, double q) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::BadExponent, "exponent must lie in (1, inf), got " + std::to_string(q));
  }
  if (!field.base) throw Error(ErrorKind::InvalidArgument, "field without base");
  if (field.values.cols() != static_cast<Eigen::Index>(field.base->size())) {
    throw Error(ErrorKind::InvalidArgument, "field length must match the base");
  }
  const Eigen::VectorXd& w = field.base->weights;
  Eigen::VectorXd out(field.values.rows());
  for (Eigen::Index j = 0; j < field.values.rows(); ++j) {
    // Factor out the largest entry so that large q does not overflow.
    const double peak = field.values.row(j).cwiseAbs().maxCoeff();
    if (peak == 0.0) {
      out(j) = 0.0;
      continue;
    }
    double acc = 0.0;
    for (Eigen::Index y = 0; y < field.values.cols(); ++y) {
      acc += std::pow(std::abs(field.values(j, y)) / peak, q) * w(y);
    }
    out(j) = peak * std::pow(acc, 1.0 / q);
  }
  return out;
}

double lq_norm(const WeightedField& field, double q, LqVariant variant) {
  const Eigen::VectorXd c = component_norms(field, q);
  if (c.size() == 0) return 0.0;
  switch (variant) {
    case LqVariant::sum: return c.sum();
    case LqVariant::max: return c.maxCoeff();
    case LqVariant::quad: return c.norm();
  }
  return c.sum();
}

namespace {

WeightedField difference(const WeightedField& a, const WeightedField& b) {
  if (a.base != b.base) throw Error(ErrorKind::MixedBases, "fields live on different bases");
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
    throw Error(ErrorKind::InvalidArgument, "fields have different shapes");
  }
  return {a.base, a.values - b.values};
}

}  // namespace

double lq_distance(const WeightedField& a, const WeightedField& b, double q, LqVariant variant) {
  return lq_norm(difference(a, b), q, variant);
}

ConvergenceReport sequence_convergence(const std::vector<WeightedField>& seq,
                                       const WeightedField& limit, double q, double tolerance) {
  ConvergenceReport report;
  for (const auto& member : seq) {
    const Eigen::VectorXd c = component_norms(difference(member, limit), q);
    report.component_trace.push_back(c);
    report.distance_trace.push_back(c.sum());
  }
  const auto& d = report.distance_trace;
  for (std::size_t h = 1; h < d.size(); ++h) {
    if (d[h] > d[h - 1]) report.monotone = false;
  }
  report.converged = !d.empty() && d.back() <= tolerance;
  if (report.converged) {
    long first = static_cast<long>(d.size()) - 1;
    while (first > 0 && d[static_cast<std::size_t>(first - 1)] <= tolerance) --first;
    report.first_within = first;
  }
  return report;
}

}  // namespace ilslab
