#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ilslab/quotient.hpp"
#include "ilslab/sections.hpp"

namespace ilslab {

/// Strictly decreasing positive radii eps_1 > ... > eps_K standing in for the
/// eps -> 0 limit of the intrinsic slopes.
class ScaleSchedule {
 public:
  explicit ScaleSchedule(std::vector<double> radii);

  const std::vector<double>& radii() const noexcept { return radii_; }
  std::size_t size() const noexcept { return radii_.size(); }
  double operator[](std::size_t k) const { return radii_[k]; }

 private:
  std::vector<double> radii_;
};

enum class SlopeVariant { local, asymptotic };

std::string_view to_string(SlopeVariant v);

/// One (point, scale) slope value. `from -> to` is the ordered pair realising
/// the supremum. Empty entries have no admissible pair in the ball.
struct SlopeEntry {
  double value = 0.0;
  bool empty = true;
  std::size_t from = 0;
  std::size_t to = 0;
};

struct SlopeField {
  SlopeVariant variant = SlopeVariant::local;
  std::vector<double> radii;
  std::size_t points = 0;
  std::vector<SlopeEntry> entries;  // point-major: entries[i * K + k]

  std::size_t scales() const noexcept { return radii.size(); }
  const SlopeEntry& at(std::size_t i, std::size_t k) const { return entries[i * scales() + k]; }
  SlopeEntry& at(std::size_t i, std::size_t k) { return entries[i * scales() + k]; }

  /// Values at scale k; empty entries become NaN.
  Eigen::VectorXd column(std::size_t k) const;
};

/// Closed balls of a base at a fixed radius, precomputed once.
struct BallIndex {
  double radius = 0.0;
  std::vector<std::vector<std::size_t>> members;  // members[i] includes i

  BallIndex(const SampledBase& base, double radius);
};

/// num(i, j) = d(x_i, x_j) in the quotient norm.
Eigen::MatrixXd pair_distance_matrix(const Eigen::MatrixXd& values, Norm norm);

/// den(i, j) = d(x_i, (1/scale pi)^{-1}(y_j)); zero diagonal.
Eigen::MatrixXd fiber_distance_matrix(const QuotientMap& q, const SampledBase& base,
                                      const Eigen::MatrixXd& values, double scale);

/// ratio(i, j) = num(i, j) / den(i, j). A vanishing denominator gives +inf
/// (0 when the numerator vanishes too). Diagonal is 0.
Eigen::MatrixXd ratio_matrix(const Eigen::MatrixXd& num, const Eigen::MatrixXd& den);

/// Slope values of a ratio matrix over one ball index. Local: sup over
/// y in B(z) \ {z} of ratio(y, z). Asymptotic: sup over distinct a, b in B(z)
/// of ratio(a, b). Ties keep the first pair in row-major order.
void slopes_from_ratios(const Eigen::MatrixXd& ratios, const BallIndex& balls,
                        SlopeVariant variant, std::vector<SlopeEntry>& out);

struct IlsValue {
  double value = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
};

/// sup over ordered pairs of d(phi(y1), phi(y2)) / d(phi(y1), (1/lambda pi)^{-1}(y2)).
IlsValue global_ils(const Section& phi);

SlopeField slope_field(const Section& phi, const ScaleSchedule& sched, SlopeVariant variant);

/// Slopes of a plain field measured against the unscaled fibers of q.
SlopeField slope_field(const QuotientMap& q, const PlainField& field, const ScaleSchedule& sched,
                       SlopeVariant variant);

enum class EnvelopeSide { upper, lower };

/// Ball max (upper) or ball min (lower) of a per-point field, center included.
/// NaN entries are skipped.
Eigen::VectorXd envelope_at_scale(const Eigen::VectorXd& field, const SampledBase& base, double eps,
                                  EnvelopeSide side);

/// Smallest c with d(pi^{-1}(y), pi^{-1}(z)) >= d(phi(y), pi^{-1}(z)) / c.
double c_min(const Section& phi);
/// Diagnostic variant for arbitrary values measured against q's fibers.
double c_min(const QuotientMap& q, const PlainField& field);

struct ProductConstants {
  double m_bound = 0.0;  // M
  double k = 0.0;
  bool k_finite = true;
  std::size_t from = 0;  // z of the (z, y) pair realising k
  std::size_t to = 0;    // y
};

ProductConstants product_constants(const Section& phi, const Section& psi);

}  // namespace ilslab
