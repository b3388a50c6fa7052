#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ilslab/cheeger.hpp"
#include "ilslab/quotient.hpp"
#include "ilslab/sections.hpp"

// Brute-force references. Nothing here calls the closed forms or solvers it
// is meant to validate: fibers are parametrised through the normal equations
// and an LU kernel basis, distances are searched, slopes are enumerated.
namespace ilslab::oracle {

struct Budget {
  std::size_t samples = 2000;
  std::uint64_t seed = 12345;
  std::size_t rounds = 60;

  bool acceptance_grade() const noexcept { return samples >= 1000; }
};

struct Result {
  double value = 0.0;
  bool budget_exhausted = false;
  Eigen::VectorXd point;  // best point found (fiber point or flattened lift)
};

/// min over v of |x - (z0 + K v)| where z0 = lambda A^T (A A^T)^{-1} b and K
/// spans ker(A), by seeded random search plus compass refinement.
Result fiber_distance(const QuotientMap& q, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                      double lambda, const Budget& budget);

/// ILS of the graph section y -> (y, f(y)) of the coordinate projection
/// (x1, x2) -> x1: max over pairs of sqrt(gap^2 + df^2) / gap.
double graph_ils(const std::vector<double>& base, const std::vector<double>& f);

/// Global random search over lift coordinates inside the admissibility box for
/// the smallest E_eps (tau -> inf), refined by compass search.
Result relaxation_search(const Section& phi, const AdmissibleClass& cls, double eps,
                         EnergyVariant variant, const Budget& budget);

/// Brute-force ILS of arbitrary values against the fibers of scale `scale`,
/// every denominator searched with fiber_distance above.
double pairwise_ils(const QuotientMap& q, const SampledBase& base, const Eigen::MatrixXd& values,
                    double scale, const Budget& budget);

/// Brute-force E_eps with its own distances; used by relaxation_search.
double energy(const QuotientMap& q, const SampledBase& base, const Eigen::MatrixXd& values,
              double scale, double eps, EnergyVariant variant);

struct GoldenRow {
  std::string fixture;
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
};

/// CSV with header "fixture,quantity,value,tolerance"; values written "%.17g".
void write_golden(const std::vector<GoldenRow>& rows, const std::string& path);
std::vector<GoldenRow> read_golden(const std::string& path);

/// Every derived value this project freezes, recomputed from the oracles.
std::vector<GoldenRow> derived_values();

}  // namespace ilslab::oracle
