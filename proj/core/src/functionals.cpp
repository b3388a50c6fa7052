#include "ilslab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ilslab/error.hpp"

namespace ilslab {

ScaleSchedule::ScaleSchedule(std::vector<double> radii) : radii_(std::move(radii)) {
  if (radii_.empty()) throw Error(ErrorKind::InvalidArgument, "schedule needs at least one radius");
  for (std::size_t k = 0; k < radii_.size(); ++k) {
    if (!(radii_[k] > 0.0) || !std::isfinite(radii_[k])) {
      throw Error(ErrorKind::InvalidArgument, "schedule radii must be positive");
    }
    if (k > 0 && !(radii_[k] < radii_[k - 1])) {
      throw Error(ErrorKind::InvalidArgument, "schedule radii must be strictly decreasing");
    }
  }
}

std::string_view to_string(SlopeVariant v) {
  return v == SlopeVariant::local ? "local" : "asymptotic";
}

Eigen::VectorXd SlopeField::column(std::size_t k) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(points));
  for (std::size_t i = 0; i < points; ++i) {
    const auto& e = at(i, k);
    out(static_cast<Eigen::Index>(i)) = e.empty ? std::numeric_limits<double>::quiet_NaN() : e.value;
  }
  return out;
}

BallIndex::BallIndex(const SampledBase& base, double r) : radius(r), members(base.size()) {
  for (std::size_t i = 0; i < base.size(); ++i) members[i] = base.ball(i, r);
}

Eigen::MatrixXd pair_distance_matrix(const Eigen::MatrixXd& values, Norm norm) {
  const auto n = values.cols();
  const auto s = values.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (Eigen::Index c = 0; c < s; ++c) {
        const double d = std::abs(values(c, i) - values(c, j));
        switch (norm) {
          case Norm::euclidean: acc += d * d; break;
          case Norm::l1: acc += d; break;
          case Norm::linf: acc = std::max(acc, d); break;
        }
      }
      if (norm == Norm::euclidean) acc = std::sqrt(acc);
      out(i, j) = acc;
      out(j, i) = acc;
    }
  }
  return out;
}

Eigen::MatrixXd fiber_distance_matrix(const QuotientMap& q, const SampledBase& base,
                                      const Eigen::MatrixXd& values, double scale) {
  const auto n = static_cast<Eigen::Index>(base.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = values.col(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      out(i, j) = fiber_distance(q, x, base.points.col(j), scale);
    }
  }
  return out;
}

Eigen::MatrixXd ratio_matrix(const Eigen::MatrixXd& num, const Eigen::MatrixXd& den) {
  const auto n = num.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (den(i, j) > 0.0) {
        out(i, j) = num(i, j) / den(i, j);
      } else {
        out(i, j) = num(i, j) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      }
    }
  }
  return out;
}

void slopes_from_ratios(const Eigen::MatrixXd& ratios, const BallIndex& balls,
                        SlopeVariant variant, std::vector<SlopeEntry>& out) {
  const std::size_t n = balls.members.size();
  out.assign(n, SlopeEntry{});
  for (std::size_t z = 0; z < n; ++z) {
    const auto& ball = balls.members[z];
    SlopeEntry e;
    const auto zi = static_cast<Eigen::Index>(z);
    if (variant == SlopeVariant::local) {
      for (std::size_t y : ball) {
        if (y == z) continue;
        const double r = ratios(static_cast<Eigen::Index>(y), zi);
        if (e.empty || r > e.value) e = SlopeEntry{r, false, y, z};
      }
    } else {
      for (std::size_t a : ball) {
        const auto ai = static_cast<Eigen::Index>(a);
        for (std::size_t b : ball) {
          if (a == b) continue;
          const double r = ratios(ai, static_cast<Eigen::Index>(b));
          if (e.empty || r > e.value) e = SlopeEntry{r, false, a, b};
        }
      }
    }
    out[z] = e;
  }
}

namespace {

Eigen::MatrixXd ratios_for(const QuotientMap& q, const SampledBase& base,
                           const Eigen::MatrixXd& values, double scale) {
  return ratio_matrix(pair_distance_matrix(values, q.norm()),
                      fiber_distance_matrix(q, base, values, scale));
}

SlopeField field_from_ratios(const Eigen::MatrixXd& ratios, const SampledBase& base,
                             const ScaleSchedule& sched, SlopeVariant variant) {
  SlopeField field;
  field.variant = variant;
  field.radii = sched.radii();
  field.points = base.size();
  field.entries.resize(field.points * field.scales());
  std::vector<SlopeEntry> column;
  for (std::size_t k = 0; k < sched.size(); ++k) {
    slopes_from_ratios(ratios, BallIndex(base, sched[k]), variant, column);
    for (std::size_t i = 0; i < field.points; ++i) field.at(i, k) = column[i];
  }
  return field;
}

}  // namespace

IlsValue global_ils(const Section& phi) {
  const std::size_t n = phi.size();
  if (n < 2) throw Error(ErrorKind::TooFewPoints, "ILS needs at least two points");
  const Eigen::MatrixXd r = ratios_for(*phi.quotient(), *phi.base(), phi.values(), phi.scale());
  IlsValue best{-1.0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v > best.value) best = IlsValue{v, i, j};
    }
  }
  return best;
}

SlopeField slope_field(const Section& phi, const ScaleSchedule& sched, SlopeVariant variant) {
  return field_from_ratios(ratios_for(*phi.quotient(), *phi.base(), phi.values(), phi.scale()),
                           *phi.base(), sched, variant);
}

SlopeField slope_field(const QuotientMap& q, const PlainField& field, const ScaleSchedule& sched,
                       SlopeVariant variant) {
  return field_from_ratios(ratios_for(q, *field.base, field.values, 1.0), *field.base, sched,
                           variant);
}

Eigen::VectorXd envelope_at_scale(const Eigen::VectorXd& field, const SampledBase& base, double eps,
                                  EnvelopeSide side) {
  if (static_cast<std::size_t>(field.size()) != base.size()) {
    throw Error(ErrorKind::InvalidArgument, "field length must match the base");
  }
  Eigen::VectorXd out(field.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    double acc = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j : base.ball(i, eps)) {
      const double v = field(static_cast<Eigen::Index>(j));
      if (std::isnan(v)) continue;
      if (std::isnan(acc)) {
        acc = v;
      } else {
        acc = side == EnvelopeSide::upper ? std::max(acc, v) : std::min(acc, v);
      }
    }
    out(static_cast<Eigen::Index>(i)) = acc;
  }
  return out;
}

namespace {

double c_min_impl(const QuotientMap& q, const SampledBase& base, const Eigen::MatrixXd& values,
                  double scale) {
  const std::size_t n = base.size();
  if (n < 2) throw Error(ErrorKind::TooFewPoints, "c_min needs at least two points");
  double worst = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    const Eigen::VectorXd x = values.col(static_cast<Eigen::Index>(y));
    for (std::size_t z = 0; z < n; ++z) {
      if (y == z) continue;
      const double num = fiber_distance(q, x, base.point(z), scale);
      const double gap = fiber_gap(q, base, y, z, scale);
      worst = std::max(worst, num / gap);
    }
  }
  return worst;
}

}  // namespace

double c_min(const Section& phi) {
  return c_min_impl(*phi.quotient(), *phi.base(), phi.values(), phi.scale());
}

double c_min(const QuotientMap& q, const PlainField& field) {
  return c_min_impl(q, *field.base, field.values, 1.0);
}

ProductConstants product_constants(const Section& phi, const Section& psi) {
  const PlainField prod = hadamard_product(phi, psi);
  const QuotientMap& q = *phi.quotient();
  const SampledBase& base = *phi.base();
  const std::size_t n = base.size();

  ProductConstants out;
  out.m_bound = std::max(phi.values().cwiseAbs().maxCoeff(), psi.values().cwiseAbs().maxCoeff());
  for (std::size_t z = 0; z < n && out.k_finite; ++z) {
    for (std::size_t y = 0; y < n; ++y) {
      if (y == z) continue;
      const Eigen::VectorXd by = base.point(y);
      const double dphi = fiber_distance(q, phi.value(z), by, 1.0);
      const double dpsi = fiber_distance(q, psi.value(z), by, 1.0);
      const double dprod = fiber_distance(q, prod.value(z), by, 1.0);
      if (dprod == 0.0) {
        out.k = std::numeric_limits<double>::infinity();
        out.k_finite = false;
        out.from = z;
        out.to = y;
        break;
      }
      const double ratio = std::min(dphi, dpsi) / dprod;
      if (ratio > out.k) {
        out.k = ratio;
        out.from = z;
        out.to = y;
      }
    }
  }
  return out;
}

}  // namespace ilslab
