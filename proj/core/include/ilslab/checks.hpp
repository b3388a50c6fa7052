#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ilslab/functionals.hpp"
#include "ilslab/sections.hpp"

namespace ilslab {

/// Indices locating the worst instance of a check; -1 when unused.
struct Witness {
  long i = -1;
  long j = -1;
  long k = -1;
};

/// Verdict of one machine-checked inequality or identity. The margin of an
/// instance is (bound - value); identities use minus the deviation. A report
/// passes iff its worst margin is >= -tolerance.
struct TheoremReport {
  std::string name;
  bool pass = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  Witness witness;
  double tolerance = 0.0;
  std::size_t instances = 0;
  std::string note;

  TheoremReport() = default;
  TheoremReport(std::string check_name, double tol) : name(std::move(check_name)), tolerance(tol) {}

  void record(double margin, Witness w = {});
  /// Folds another report in: instances add up, the worse margin wins.
  void merge(const TheoremReport& other);
  void finalize();
};

inline constexpr double kScalingTol = 1e-12;
inline constexpr double kIdentityTol = 1e-9;
inline constexpr double kChainTol = 1e-12;
inline constexpr double kConvexityTol = 1e-9;

/// Pairwise ratios of (lambda phi, (1/lambda) pi) against (phi, pi), relative.
TheoremReport check_scaling_invariance(const Section& phi, double lambda);

/// |lambda| gap(y1, y2) = gap_lambda(y1, y2) and |lambda| d(phi(y1), F(y2)) =
/// d(lambda phi(y1), F_lambda(y2)) over all ordered pairs and lambdas.
TheoremReport check_fiber_identities(const QuotientMap& q, const SampledBase& base,
                                     const Section& phi, const std::vector<double>& lambdas);

/// d(phi(y), F_lambda(z)) = gap_lambda(y, z) for every ordered pair.
TheoremReport check_base_point_independence(const Section& phi);

/// 1 <= Ils_eps <= Ils_a,eps <= ILS at every point and scale.
TheoremReport check_chain(const Section& phi, const ScaleSchedule& sched);

/// d(y', y) < eps/3  =>  Ils_a,eps/3(y') <= Ils_a,eps(y).
TheoremReport check_ball_monotonicity(const Section& phi, const ScaleSchedule& sched);

/// ILS >= Ils_a,eps(y) >= max over y' in B(y, eps/2) of Ils_{eps/2}(y').
TheoremReport check_envelope_sandwich(const Section& phi, const ScaleSchedule& sched);

/// Ils(eta) <= c/2 (Ils(phi) + Ils(psi)) and the asymptotic analogue, for
/// eta = alpha phi + beta psi measured against (1/(alpha+beta)) pi.
/// Throws AdmissibilityViolated when c < c_min of either input.
TheoremReport check_leibniz(const Section& phi, const Section& psi, double alpha, double beta,
                            double c, const ScaleSchedule& sched);

/// Ils_a(phi psi) <= M k (Ils_a(phi) + Ils_a(psi)); skipped (pass, noted)
/// when k is infinite.
TheoremReport check_product_bound(const Section& phi, const Section& psi,
                                  const ScaleSchedule& sched);

/// t phi + (1-t) psi is a section of pi with c_min <= max input c_min.
TheoremReport check_convexity(const Section& phi, const Section& psi,
                              const std::vector<double>& t_grid);

}  // namespace ilslab
