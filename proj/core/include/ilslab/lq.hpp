#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>
#include <vector>

#include "ilslab/sections.hpp"

namespace ilslab {

/// A field over a weighted base: `values` is dim x n (dim = 1 for scalar
/// fields such as G, H1, H2). The base supplies the measure.
struct WeightedField {
  BasePtr base;
  Eigen::MatrixXd values;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.cols()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values.rows()); }

  static WeightedField scalar(BasePtr base, const Eigen::VectorXd& v);
  static WeightedField of(const Section& phi);
  Eigen::VectorXd as_vector() const;  // scalar fields only
};

/// sum: sum_j |psi_j|_q, max: max_j |psi_j|_q, quad: sqrt(sum_j |psi_j|_q^2),
/// where |psi_j|_q = (sum_y |psi_j(y)|^q m(y))^{1/q} is the j-th component norm.
enum class LqVariant { sum, max, quad };

std::string_view to_string(LqVariant v);
LqVariant parse_lq_variant(std::string_view text);

/// Component norms |psi_j|_q, j = 1..dim. Throws BadExponent unless q > 1.
Eigen::VectorXd component_norms(const WeightedField& field, double q);

double lq_norm(const WeightedField& field, double q, LqVariant variant = LqVariant::sum);

/// Norm of the difference; MixedBases when the fields live on different bases.
double lq_distance(const WeightedField& a, const WeightedField& b, double q,
                   LqVariant variant = LqVariant::sum);

struct ConvergenceReport {
  /// component_trace[h][j] = |seq_h,j - limit_j|_q.
  std::vector<Eigen::VectorXd> component_trace;
  /// distance_trace[h] = sum-variant distance of member h to the limit.
  std::vector<double> distance_trace;
  bool converged = false;
  /// First member from which every later distance stays within tolerance.
  long first_within = -1;
  bool monotone = true;
};

/// Componentwise L^q convergence of a finite sequence; converged iff the final
/// distance is <= tolerance.
ConvergenceReport sequence_convergence(const std::vector<WeightedField>& seq,
                                       const WeightedField& limit, double q, double tolerance);

}  // namespace ilslab
