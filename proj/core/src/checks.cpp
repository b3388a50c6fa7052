#include "ilslab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ilslab/error.hpp"

namespace ilslab {

void TheoremReport::record(double margin, Witness w) {
  ++instances;
  if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
  if (margin < worst_margin) {
    worst_margin = margin;
    witness = w;
  }
}

void TheoremReport::merge(const TheoremReport& other) {
  instances += other.instances;
  if (other.worst_margin < worst_margin) {
    worst_margin = other.worst_margin;
    witness = other.witness;
  }
  if (!other.note.empty() && note.find(other.note) == std::string::npos) {
    note += (note.empty() ? "" : "; ") + other.note;
  }
}

void TheoremReport::finalize() { pass = worst_margin >= -tolerance; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

long as_long(std::size_t v) { return static_cast<long>(v); }

Eigen::MatrixXd section_ratios(const Section& phi) {
  const QuotientMap& q = *phi.quotient();
  return ratio_matrix(pair_distance_matrix(phi.values(), q.norm()),
                      fiber_distance_matrix(q, *phi.base(), phi.values(), phi.scale()));
}

SlopeField single_scale_field(const Eigen::MatrixXd& ratios, const SampledBase& base, double eps,
                              SlopeVariant variant) {
  SlopeField field;
  field.variant = variant;
  field.radii = {eps};
  field.points = base.size();
  slopes_from_ratios(ratios, BallIndex(base, eps), variant, field.entries);
  return field;
}

void require_same_base(const Section& phi, const Section& psi) {
  if (phi.base() != psi.base() || phi.quotient() != psi.quotient()) {
    throw Error(ErrorKind::MixedBases, "sections live over different bases or quotients");
  }
}

}  // namespace

TheoremReport check_scaling_invariance(const Section& phi, double lambda) {
  TheoremReport report("scaling_invariance", kScalingTol);
  const Section scaled = scale_section(lambda, phi);
  const Eigen::MatrixXd base_ratios = section_ratios(phi);
  const Eigen::MatrixXd scaled_ratios = section_ratios(scaled);
  const auto n = base_ratios.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      report.record(-relative_deviation(scaled_ratios(i, j), base_ratios(i, j)), {i, j, -1});
    }
  }
  report.finalize();
  return report;
}

TheoremReport check_fiber_identities(const QuotientMap& q, const SampledBase& base,
                                     const Section& phi, const std::vector<double>& lambdas) {
  TheoremReport report("fiber_identities", kIdentityTol);
  const std::size_t n = base.size();
  const double sigma = phi.scale();
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    const double lambda = lambdas[l];
    const double a = std::abs(lambda);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXd x = phi.value(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double gap_scaled = fiber_gap(q, base, i, j, lambda);
        const double gap_unit = fiber_gap(q, base, i, j, 1.0);
        report.record(-relative_deviation(gap_scaled, a * gap_unit),
                      {as_long(i), as_long(j), static_cast<long>(l)});

        const double point_scaled = fiber_distance(q, base, lambda * x, j, lambda * sigma);
        const double point_unit = fiber_distance(q, base, x, j, sigma);
        report.record(-relative_deviation(point_scaled, a * point_unit),
                      {as_long(i), as_long(j), static_cast<long>(l)});
      }
    }
  }
  report.finalize();
  return report;
}

TheoremReport check_base_point_independence(const Section& phi) {
  TheoremReport report("base_point_independence", kIdentityTol);
  const QuotientMap& q = *phi.quotient();
  const SampledBase& base = *phi.base();
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Eigen::VectorXd x = phi.value(i);
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (i == j) continue;
      const double d = fiber_distance(q, base, x, j, phi.scale());
      const double g = fiber_gap(q, base, i, j, phi.scale());
      report.record(-relative_deviation(d, g), {as_long(i), as_long(j), -1});
    }
  }
  report.finalize();
  return report;
}

TheoremReport check_chain(const Section& phi, const ScaleSchedule& sched) {
  TheoremReport report("chain_inequality", kChainTol);
  const double ils = global_ils(phi).value;
  const SlopeField local = slope_field(phi, sched, SlopeVariant::local);
  const SlopeField asym = slope_field(phi, sched, SlopeVariant::asymptotic);
  std::size_t empties = 0;
  for (std::size_t i = 0; i < local.points; ++i) {
    for (std::size_t k = 0; k < sched.size(); ++k) {
      const auto& l = local.at(i, k);
      const auto& a = asym.at(i, k);
      if (l.empty || a.empty) {
        ++empties;
        continue;
      }
      const Witness w{as_long(i), -1, as_long(k)};
      report.record(l.value - 1.0, w);
      report.record(a.value - l.value, w);
      report.record(ils - a.value, w);
    }
  }
  if (empties) report.note = std::to_string(empties) + " empty ball entries skipped";
  report.finalize();
  return report;
}

TheoremReport check_ball_monotonicity(const Section& phi, const ScaleSchedule& sched) {
  TheoremReport report("ball_monotonicity", kChainTol);
  const SampledBase& base = *phi.base();
  const Eigen::MatrixXd ratios = section_ratios(phi);
  for (std::size_t k = 0; k < sched.size(); ++k) {
    const double eps = sched[k];
    const SlopeField big = single_scale_field(ratios, base, eps, SlopeVariant::asymptotic);
    const SlopeField small = single_scale_field(ratios, base, eps / 3.0, SlopeVariant::asymptotic);
    for (std::size_t y = 0; y < base.size(); ++y) {
      for (std::size_t yp = 0; yp < base.size(); ++yp) {
        if (!(base.dist(yp, y) < eps / 3.0)) continue;
        const auto& s = small.at(yp, 0);
        if (s.empty) continue;
        const auto& b = big.at(y, 0);
        report.record(b.empty ? -kInf : b.value - s.value, {as_long(yp), as_long(y), as_long(k)});
      }
    }
  }
  report.finalize();
  return report;
}

TheoremReport check_envelope_sandwich(const Section& phi, const ScaleSchedule& sched) {
  TheoremReport report("envelope_sandwich", kChainTol);
  const SampledBase& base = *phi.base();
  const double ils = global_ils(phi).value;
  const Eigen::MatrixXd ratios = section_ratios(phi);
  for (std::size_t k = 0; k < sched.size(); ++k) {
    const double eps = sched[k];
    const SlopeField asym = single_scale_field(ratios, base, eps, SlopeVariant::asymptotic);
    const SlopeField half = single_scale_field(ratios, base, eps / 2.0, SlopeVariant::local);
    const Eigen::VectorXd envelope =
        envelope_at_scale(half.column(0), base, eps / 2.0, EnvelopeSide::upper);
    for (std::size_t y = 0; y < base.size(); ++y) {
      const auto& a = asym.at(y, 0);
      if (a.empty) continue;
      const Witness w{as_long(y), -1, as_long(k)};
      report.record(ils - a.value, w);
      const double env = envelope(static_cast<Eigen::Index>(y));
      if (!std::isnan(env)) report.record(a.value - env, w);
    }
  }
  report.finalize();
  return report;
}

TheoremReport check_leibniz(const Section& phi, const Section& psi, double alpha, double beta,
                            double c, const ScaleSchedule& sched) {
  require_same_base(phi, psi);
  const double needed = std::max(c_min(phi), c_min(psi));
  if (c < needed - kConvexityTol) {
    throw Error(ErrorKind::AdmissibilityViolated,
                "c=" + std::to_string(c) + " below c_min=" + std::to_string(needed));
  }
  const Section eta = combine_sections(alpha, phi, beta, psi);

  TheoremReport report("leibniz", kChainTol);
  for (SlopeVariant variant : {SlopeVariant::local, SlopeVariant::asymptotic}) {
    const SlopeField fe = slope_field(eta, sched, variant);
    const SlopeField fp = slope_field(phi, sched, variant);
    const SlopeField fq = slope_field(psi, sched, variant);
    const long tag = variant == SlopeVariant::local ? 0 : 1;
    for (std::size_t i = 0; i < fe.points; ++i) {
      for (std::size_t k = 0; k < sched.size(); ++k) {
        const auto& e = fe.at(i, k);
        if (e.empty) continue;
        const double bound = 0.5 * c * (fp.at(i, k).value + fq.at(i, k).value);
        report.record(bound - e.value, {as_long(i), tag, as_long(k)});
      }
    }
  }
  report.note = "witness.j: 0 = local slope, 1 = asymptotic";
  report.finalize();
  return report;
}

TheoremReport check_product_bound(const Section& phi, const Section& psi,
                                  const ScaleSchedule& sched) {
  TheoremReport report("product_bound", kChainTol);
  const ProductConstants pc = product_constants(phi, psi);
  if (!pc.k_finite) {
    report.note = "skipped: k infinite at (" + std::to_string(pc.from) + "," +
                  std::to_string(pc.to) + ")";
    report.witness = {as_long(pc.from), as_long(pc.to), -1};
    report.finalize();
    return report;
  }
  const PlainField prod = hadamard_product(phi, psi);
  const SlopeField fp = slope_field(*phi.quotient(), prod, sched, SlopeVariant::asymptotic);
  const SlopeField fa = slope_field(phi, sched, SlopeVariant::asymptotic);
  const SlopeField fb = slope_field(psi, sched, SlopeVariant::asymptotic);
  const double mk = pc.m_bound * pc.k;
  for (std::size_t i = 0; i < fp.points; ++i) {
    for (std::size_t k = 0; k < sched.size(); ++k) {
      const auto& e = fp.at(i, k);
      if (e.empty) continue;
      report.record(mk * (fa.at(i, k).value + fb.at(i, k).value) - e.value,
                    {as_long(i), -1, as_long(k)});
    }
  }
  report.finalize();
  return report;
}

TheoremReport check_convexity(const Section& phi, const Section& psi,
                              const std::vector<double>& t_grid) {
  require_same_base(phi, psi);
  if (phi.scale() != 1.0 || psi.scale() != 1.0) {
    throw Error(ErrorKind::InvalidArgument, "convexity check needs sections of pi");
  }
  TheoremReport report("convexity", kConvexityTol);
  const double bound = std::max(c_min(phi), c_min(psi));
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    const double t = t_grid[ti];
    const Witness w{static_cast<long>(ti), -1, -1};
    try {
      const Section mix = validate_section(phi.quotient(), phi.base(),
                                           t * phi.values() + (1.0 - t) * psi.values(), 1.0);
      report.record(bound - c_min(mix), w);
    } catch (const NotOnFiberError&) {
      report.record(-kInf, w);
    }
  }
  report.finalize();
  return report;
}

}  // namespace ilslab
