#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ilslab/checks.hpp"
#include "ilslab/functionals.hpp"
#include "ilslab/lq.hpp"
#include "ilslab/sections.hpp"

namespace ilslab {

/// Finite stand-in for L = S ∩ ILS_b: sections satisfying the fiber
/// domination inequality with constant c and lying in the sup-norm box
/// |x_i|_inf <= bound_radius.
struct AdmissibleClass {
  double c = 2.0;
  double bound_radius = 10.0;

  void validate() const;  // c >= 2, bound_radius > 0
};

/// a: integrand Ils_a^2; ils: integrand Ils^2.
enum class EnergyVariant { a, ils };

std::string_view to_string(EnergyVariant v);
EnergyVariant parse_energy_variant(std::string_view text);
SlopeVariant slope_variant(EnergyVariant v);

struct RelaxationParams {
  double eps = 1.0;
  double tau = 1.0;
  std::size_t max_iters = 2000;
  std::size_t restarts = 4;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  /// Continuation stages: tau_h = tau * stage_factor^(stages - 1 - h).
  std::size_t stages = 3;
  double stage_factor = 10.0;
  /// Pattern-search step at which a run counts as stabilised.
  double min_step = 1e-8;

  void validate() const;
};

/// Largest violation of class membership (<= 0 means admissible).
double admissibility_violation(const Section& phi, const AdmissibleClass& cls);
bool is_admissible(const Section& phi, const AdmissibleClass& cls);

/// Slope vector at one scale; throws EmptyBallError for isolated points.
Eigen::VectorXd energy_slopes(const Section& phi, double eps, EnergyVariant variant);

/// sum_i m_i slope(y_i)^2 at scale eps.
double cheeger_energy(const Section& phi, double eps, EnergyVariant variant);

/// The data (G, H1, H2, (phi_h)) witnessing that G is an intrinsic relaxed
/// slope of phi. Scalar fields are WeightedFields of dimension 1.
struct RelaxedSlopeCertificate {
  Section phi;
  WeightedField g;
  WeightedField h1;
  WeightedField h2;
  std::vector<Section> sequence;
  double q = 2.0;
  double eps = 1.0;
  EnergyVariant variant = EnergyVariant::a;
  AdmissibleClass cls;
};

struct RelaxationResult {
  Section minimizer;
  double energy = 0.0;      // E_eps(minimizer)
  double objective = 0.0;   // F_tau(minimizer) at the final tau
  WeightedField h2;         // slope field of the minimizer
  std::vector<double> trace;  // F_tau per pattern-search iteration, best run of each stage
  RelaxedSlopeCertificate certificate;
  bool converged = true;
  std::size_t best_restart = 0;
  std::size_t evaluations = 0;
};

/// Minimises F_tau(psi) = E_eps(psi) + |psi - phi|^2_{L^2,sum} / tau over
/// admissible sections psi sharing phi's scale, by multistart pattern search
/// over null-space lift coordinates along a decreasing-tau continuation.
/// Restart 0 starts from the previous stage, 1 from phi (later stages), 2 from
/// the constant mean lift, the rest from seeded random kicks.
/// Deterministic for a fixed seed regardless of thread count.
RelaxationResult relax_energy(const Section& phi, const AdmissibleClass& cls,
                              const RelaxationParams& params, EnergyVariant variant);

/// Checks 0 <= H1 <= G, 0 <= H1 <= H2, phi_h -> phi and slope(phi_h) -> H2
/// in L^q (sum variant), and class membership of each phi_h.
TheoremReport verify_certificate(const RelaxedSlopeCertificate& cert, double tol);

/// The constant sequence phi_h = phi with G = H1 = H2 = slope field of phi.
RelaxedSlopeCertificate constant_certificate(const Section& phi, const AdmissibleClass& cls,
                                             double eps, EnergyVariant variant, double q = 2.0);

/// Certificate for min(G1, G2): H1 chosen by the pointwise case split,
/// sequence (phi_h + psi_h) / 2, H2 the slope field of its limit member.
RelaxedSlopeCertificate lattice_combine(const RelaxedSlopeCertificate& first,
                                        const RelaxedSlopeCertificate& second);

struct MinimalSlope {
  WeightedField field;
  /// candidate <= slope field of phi (+ tol) pointwise.
  TheoremReport bound;
};

/// Pointwise minimum over verified certificates of the same phi and q.
/// Throws EmptyInput or UnverifiedCertificate.
MinimalSlope minimal_relaxed_slope(const std::vector<RelaxedSlopeCertificate>& certs, double tol);

/// Runs relax_energy and checks the representation formula
/// energy = sum m H2^2 together with Sum m <= energy <= E_eps(phi).
TheoremReport representation_check(const Section& phi, const AdmissibleClass& cls,
                                   const RelaxationParams& params,
                                   EnergyVariant variant = EnergyVariant::a);

/// Same checks against an existing result.
TheoremReport representation_check(const Section& phi, const RelaxationResult& result,
                                   const RelaxationParams& params, EnergyVariant variant);

}  // namespace ilslab
