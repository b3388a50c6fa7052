#include "ilslab/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "ilslab/error.hpp"
#include "ilslab/parallel.hpp"

namespace ilslab {

void AdmissibleClass::validate() const {
  if (!(c >= 2.0)) throw Error(ErrorKind::InvalidArgument, "admissible class needs c >= 2");
  if (!(bound_radius > 0.0) || !std::isfinite(bound_radius)) {
    throw Error(ErrorKind::InvalidArgument, "boundRadius must be positive");
  }
}

std::string_view to_string(EnergyVariant v) { return v == EnergyVariant::a ? "a" : "ils"; }

EnergyVariant parse_energy_variant(std::string_view text) {
  if (text == "a") return EnergyVariant::a;
  if (text == "ils") return EnergyVariant::ils;
  throw Error(ErrorKind::InvalidArgument, "unknown energy variant '" + std::string(text) + "'");
}

SlopeVariant slope_variant(EnergyVariant v) {
  return v == EnergyVariant::a ? SlopeVariant::asymptotic : SlopeVariant::local;
}

void RelaxationParams::validate() const {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (restarts < 1) throw Error(ErrorKind::InvalidArgument, "need at least one restart");
  if (stages < 1) throw Error(ErrorKind::InvalidArgument, "need at least one stage");
  if (!(stage_factor >= 1.0)) throw Error(ErrorKind::InvalidArgument, "stage_factor must be >= 1");
  if (!(min_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "min_step must be positive");
}

double admissibility_violation(const Section& phi, const AdmissibleClass& cls) {
  const double sup = phi.values().size() ? phi.values().cwiseAbs().maxCoeff() : 0.0;
  return std::max(sup - cls.bound_radius, c_min(phi) - cls.c);
}

bool is_admissible(const Section& phi, const AdmissibleClass& cls) {
  return admissibility_violation(phi, cls) <= 0.0;
}

namespace {

// Energy evaluator for one section family. Every section of (1/lambda) pi has
// d(x_i, F_j) = gap(i, j), so the denominators are measured once on phi and
// reused for every candidate with the same scale.
double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

class EnergyKernel {
 public:
  EnergyKernel(const Section& phi, double eps, EnergyVariant variant)
      : norm_(phi.quotient()->norm()),
        den_(fiber_distance_matrix(*phi.quotient(), *phi.base(), phi.values(), phi.scale())),
        balls_(*phi.base(), eps),
        weights_(phi.base()->weights),
        variant_(slope_variant(variant)) {
    for (std::size_t i = 0; i < balls_.members.size(); ++i) {
      if (balls_.members[i].size() < 2) throw EmptyBallError(i);
    }
  }

  // Same values as slopes_from_ratios(ratio_matrix(...)) with the pair
  // ratios symmetrised once, so the asymptotic sweep visits each pair once.
  double energy(const Eigen::MatrixXd& values, Eigen::VectorXd* slopes = nullptr) const {
    const auto n = static_cast<std::size_t>(values.cols());
    const auto s = values.rows();
    std::vector<double> r(n * n, 0.0);
    const double* x = values.data();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        double acc = 0.0;
        for (Eigen::Index c = 0; c < s; ++c) {
          const double d = std::abs(x[a * s + c] - x[b * s + c]);
          if (norm_ == Norm::euclidean) {
            acc += d * d;
          } else if (norm_ == Norm::l1) {
            acc += d;
          } else {
            acc = std::max(acc, d);
          }
        }
        if (norm_ == Norm::euclidean) acc = std::sqrt(acc);
        r[a * n + b] = ratio(acc, den_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
        r[b * n + a] = ratio(acc, den_(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)));
      }
    }
    double total = 0.0;
    if (slopes) slopes->resize(static_cast<Eigen::Index>(n));
    for (std::size_t z = 0; z < n; ++z) {
      const auto& ball = balls_.members[z];
      double v = -std::numeric_limits<double>::infinity();
      if (variant_ == SlopeVariant::local) {
        for (std::size_t y : ball) {
          if (y != z) v = std::max(v, r[y * n + z]);
        }
      } else {
        for (std::size_t p = 0; p < ball.size(); ++p) {
          const double* row = &r[ball[p] * n];
          for (std::size_t t = 0; t < ball.size(); ++t) v = std::max(v, row[ball[t]]);
        }
      }
      total += weights_(static_cast<Eigen::Index>(z)) * v * v;
      if (slopes) (*slopes)(static_cast<Eigen::Index>(z)) = v;
    }
    return total;
  }

 private:
  Norm norm_;
  Eigen::MatrixXd den_;
  BallIndex balls_;
  Eigen::VectorXd weights_;
  SlopeVariant variant_;
};

// |a - b|^2 in the sum-variant L^2 norm.
double prox_term(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& w) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    double acc = 0.0;
    for (Eigen::Index y = 0; y < a.cols(); ++y) {
      const double d = a(j, y) - b(j, y);
      acc += d * d * w(y);
    }
    total += std::sqrt(acc);
  }
  return total * total;
}

struct SearchRun {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  bool converged = false;
  std::size_t evaluations = 0;
};

// Generalized pattern search over a random orthonormal poll basis (+-columns),
// redrawn after every unsuccessful poll. Opportunistic polling, step doubling
// on success and halving on failure. Infeasible points evaluate to +inf.
SearchRun pattern_search(const std::function<double(const Eigen::VectorXd&)>& objective,
                         Eigen::VectorXd x, double step, double max_step,
                         const RelaxationParams& params, std::mt19937_64& rng) {
  SearchRun run;
  const auto dim = x.size();
  run.x = std::move(x);
  run.f = objective(run.x);
  ++run.evaluations;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));

  Eigen::MatrixXd basis;
  bool redraw = true;
  for (std::size_t it = 0; it < params.max_iters; ++it) {
    if (redraw) {
      Eigen::MatrixXd g(dim, dim);
      for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = gauss(rng);
      basis = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
      for (Eigen::Index c = 0; c < dim; ++c) order[static_cast<std::size_t>(c)] = c;
      std::shuffle(order.begin(), order.end(), rng);
    }

    bool improved = false;
    for (Eigen::Index c : order) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = run.x + (sign * step) * basis.col(c);
        const double ft = objective(trial);
        ++run.evaluations;
        if (ft < run.f) {
          run.x = std::move(trial);
          run.f = ft;
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
    step = improved ? std::min(2.0 * step, max_step) : 0.5 * step;
    redraw = !improved;
    run.trace.push_back(run.f);
    if (step < params.min_step) {
      run.converged = true;
      break;
    }
  }
  return run;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

}  // namespace

Eigen::VectorXd energy_slopes(const Section& phi, double eps, EnergyVariant variant) {
  const SlopeField field = slope_field(phi, ScaleSchedule({eps}), slope_variant(variant));
  Eigen::VectorXd out(static_cast<Eigen::Index>(field.points));
  for (std::size_t i = 0; i < field.points; ++i) {
    const auto& e = field.at(i, 0);
    if (e.empty) throw EmptyBallError(i);
    out(static_cast<Eigen::Index>(i)) = e.value;
  }
  return out;
}

double cheeger_energy(const Section& phi, double eps, EnergyVariant variant) {
  const Eigen::VectorXd slopes = energy_slopes(phi, eps, variant);
  return phi.base()->weights.dot(slopes.cwiseProduct(slopes));
}

RelaxationResult relax_energy(const Section& phi, const AdmissibleClass& cls,
                              const RelaxationParams& params, EnergyVariant variant) {
  cls.validate();
  params.validate();
  if (!is_admissible(phi, cls)) {
    throw Error(ErrorKind::NotAdmissible,
                "violation " + std::to_string(admissibility_violation(phi, cls)));
  }

  const QuotientMap& q = *phi.quotient();
  const SampledBase& base = *phi.base();
  const EnergyKernel kernel(phi, params.eps, variant);
  const Eigen::MatrixXd anchor = phi.scale() * (q.pinv() * base.points);
  const Eigen::MatrixXd& nb = q.null_basis();
  const auto k = nb.cols();
  const auto n = static_cast<Eigen::Index>(base.size());
  const Eigen::VectorXd u_phi = flatten(lift_coordinates(phi));
  const double radius = cls.bound_radius;

  auto values_of = [&](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
    return anchor + nb * unflatten(u, k, n);
  };

  auto feasible = [&](const Eigen::VectorXd& u) {
    return values_of(u).cwiseAbs().maxCoeff() <= radius;
  };
  // Every point lifted by the weighted mean of phi's lift coordinates.
  Eigen::VectorXd u_flat(u_phi.size());
  {
    const Eigen::MatrixXd lift = unflatten(u_phi, k, n);
    const Eigen::VectorXd mean = lift * base.weights / base.weights.sum();
    u_flat = flatten(mean.replicate(1, n));
  }

  RelaxationResult result;
  std::vector<Section> path;
  Eigen::VectorXd warm = u_phi;
  const double step0 = 0.1 * radius;

  for (std::size_t stage = 0; stage < params.stages; ++stage) {
    const double tau =
        params.tau * std::pow(params.stage_factor, static_cast<double>(params.stages - 1 - stage));
    auto objective = [&](const Eigen::VectorXd& u) {
      const Eigen::MatrixXd values = values_of(u);
      if (values.cwiseAbs().maxCoeff() > radius) return std::numeric_limits<double>::infinity();
      return kernel.energy(values) + prox_term(values, phi.values(), base.weights) / tau;
    };

    std::vector<SearchRun> runs(params.restarts);
    parallel_for(params.restarts, [&](std::size_t r) {
      std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                        static_cast<std::uint32_t>(params.seed >> 32),
                        static_cast<std::uint32_t>(stage), static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      Eigen::VectorXd start = warm;
      if (r == 1 && stage > 0) {
        start = u_phi;
      } else if (r == 2 && feasible(u_flat)) {
        start = u_flat;
      } else if (r > 0) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd kick(warm.size());
        for (Eigen::Index i = 0; i < kick.size(); ++i) kick(i) = gauss(rng);
        double scale = step0;
        for (int tries = 0; tries < 40; ++tries, scale *= 0.5) {
          const Eigen::VectorXd cand = warm + scale * kick;
          if (feasible(cand)) {
            start = cand;
            break;
          }
        }
      }
      runs[r] = pattern_search(objective, start, step0, radius, params, rng);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
      if (runs[r].f < runs[best].f) best = r;
    }
    for (const auto& run : runs) result.evaluations += run.evaluations;
    result.trace.insert(result.trace.end(), runs[best].trace.begin(), runs[best].trace.end());
    warm = runs[best].x;
    path.push_back(validate_section(phi.quotient(), phi.base(), values_of(warm), phi.scale()));
    if (stage + 1 == params.stages) {
      result.best_restart = best;
      result.objective = runs[best].f;
      result.converged = runs[best].converged;
    }
  }

  result.minimizer = path.back();
  // energy comes from the solver's kernel, H2 from the reference slope path,
  // so the representation check compares two independent evaluations.
  const Eigen::VectorXd h2 = energy_slopes(result.minimizer, params.eps, variant);
  result.energy = kernel.energy(result.minimizer.values());
  result.h2 = WeightedField::scalar(phi.base(), h2);

  RelaxedSlopeCertificate& cert = result.certificate;
  cert.phi = result.minimizer;
  cert.g = result.h2;
  cert.h2 = result.h2;
  cert.h1 = WeightedField::scalar(phi.base(), h2.cwiseMin(energy_slopes(phi, params.eps, variant)));
  cert.sequence = std::move(path);
  cert.q = 2.0;
  cert.eps = params.eps;
  cert.variant = variant;
  cert.cls = cls;
  return result;
}

TheoremReport verify_certificate(const RelaxedSlopeCertificate& cert, double tol) {
  TheoremReport report("relaxed_slope_certificate", tol);
  const auto n = static_cast<Eigen::Index>(cert.phi.size());
  const Eigen::VectorXd g = cert.g.as_vector();
  const Eigen::VectorXd h1 = cert.h1.as_vector();
  const Eigen::VectorXd h2 = cert.h2.as_vector();
  if (g.size() != n || h1.size() != n || h2.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "certificate fields must match the base");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    report.record(h1(i), {static_cast<long>(i), 0, -1});
    report.record(g(i) - h1(i), {static_cast<long>(i), 1, -1});
    report.record(h2(i) - h1(i), {static_cast<long>(i), 2, -1});
  }

  if (cert.sequence.empty()) {
    report.record(-std::numeric_limits<double>::infinity(), {-1, 3, -1});
    report.note = "empty approximating sequence";
    report.finalize();
    return report;
  }

  std::vector<WeightedField> members;
  std::vector<WeightedField> slopes;
  for (std::size_t h = 0; h < cert.sequence.size(); ++h) {
    const Section& s = cert.sequence[h];
    if (s.base() != cert.phi.base() || s.scale() != cert.phi.scale()) {
      report.record(-std::numeric_limits<double>::infinity(), {static_cast<long>(h), 4, -1});
      continue;
    }
    report.record(-std::max(0.0, admissibility_violation(s, cert.cls)),
                  {static_cast<long>(h), 4, -1});
    members.push_back(WeightedField::of(s));
    try {
      slopes.push_back(WeightedField::scalar(s.base(), energy_slopes(s, cert.eps, cert.variant)));
    } catch (const EmptyBallError&) {
      report.record(-std::numeric_limits<double>::infinity(), {static_cast<long>(h), 5, -1});
    }
  }
  if (!members.empty()) {
    const ConvergenceReport conv =
        sequence_convergence(members, WeightedField::of(cert.phi), cert.q, tol);
    report.record(-conv.distance_trace.back(), {static_cast<long>(members.size() - 1), 3, -1});
  }
  if (!slopes.empty()) {
    const ConvergenceReport conv = sequence_convergence(slopes, cert.h2, cert.q, tol);
    report.record(-conv.distance_trace.back(), {static_cast<long>(slopes.size() - 1), 5, -1});
  }
  report.note =
      "witness.j: 0 H1>=0, 1 G>=H1, 2 H2>=H1, 3 phi_h->phi, 4 admissible, 5 slope(phi_h)->H2; "
      "weak convergence checked as strong (finite base)";
  report.finalize();
  return report;
}

RelaxedSlopeCertificate constant_certificate(const Section& phi, const AdmissibleClass& cls,
                                             double eps, EnergyVariant variant, double q) {
  const WeightedField slopes = WeightedField::scalar(phi.base(), energy_slopes(phi, eps, variant));
  RelaxedSlopeCertificate cert;
  cert.phi = phi;
  cert.g = slopes;
  cert.h1 = slopes;
  cert.h2 = slopes;
  cert.sequence = {phi};
  cert.q = q;
  cert.eps = eps;
  cert.variant = variant;
  cert.cls = cls;
  return cert;
}

namespace {

void require_same_phi(const RelaxedSlopeCertificate& a, const RelaxedSlopeCertificate& b) {
  if (a.phi.base() != b.phi.base() || a.phi.quotient() != b.phi.quotient()) {
    throw Error(ErrorKind::MixedBases, "certificates refer to different bases");
  }
  const double scale = 1.0 + a.phi.values().cwiseAbs().maxCoeff();
  if ((a.phi.values() - b.phi.values()).cwiseAbs().maxCoeff() > 1e-12 * scale ||
      a.phi.scale() != b.phi.scale() || a.q != b.q) {
    throw Error(ErrorKind::InvalidArgument, "certificates refer to different sections or exponents");
  }
}

}  // namespace

RelaxedSlopeCertificate lattice_combine(const RelaxedSlopeCertificate& first,
                                        const RelaxedSlopeCertificate& second) {
  require_same_phi(first, second);
  if (first.eps != second.eps || first.variant != second.variant) {
    throw Error(ErrorKind::InvalidArgument, "certificates use different slope scales");
  }
  if (first.sequence.empty() || second.sequence.empty()) {
    throw Error(ErrorKind::EmptyInput, "certificate without approximating sequence");
  }
  const Eigen::VectorXd g1 = first.g.as_vector();
  const Eigen::VectorXd g2 = second.g.as_vector();
  const Eigen::VectorXd h1a = first.h1.as_vector();
  const Eigen::VectorXd h1b = second.h1.as_vector();
  Eigen::VectorXd g(g1.size());
  Eigen::VectorXd h1(g1.size());
  for (Eigen::Index i = 0; i < g1.size(); ++i) {
    const bool take_first = g1(i) <= g2(i);
    g(i) = take_first ? g1(i) : g2(i);
    h1(i) = take_first ? h1a(i) : h1b(i);
  }

  RelaxedSlopeCertificate out;
  out.phi = first.phi;
  out.q = first.q;
  out.eps = first.eps;
  out.variant = first.variant;
  out.cls = first.cls;
  const std::size_t len = std::max(first.sequence.size(), second.sequence.size());
  for (std::size_t h = 0; h < len; ++h) {
    const Section& a = first.sequence[std::min(h, first.sequence.size() - 1)];
    const Section& b = second.sequence[std::min(h, second.sequence.size() - 1)];
    out.sequence.push_back(
        validate_section(a.quotient(), a.base(), 0.5 * (a.values() + b.values()), a.scale()));
  }
  out.g = WeightedField::scalar(first.phi.base(), g);
  out.h1 = WeightedField::scalar(first.phi.base(), h1);
  out.h2 = WeightedField::scalar(first.phi.base(),
                                 energy_slopes(out.sequence.back(), out.eps, out.variant));
  return out;
}

MinimalSlope minimal_relaxed_slope(const std::vector<RelaxedSlopeCertificate>& certs, double tol) {
  if (certs.empty()) throw Error(ErrorKind::EmptyInput, "no certificates");
  for (std::size_t c = 0; c < certs.size(); ++c) {
    if (c > 0) require_same_phi(certs[0], certs[c]);
    if (!verify_certificate(certs[c], tol).pass) {
      throw Error(ErrorKind::UnverifiedCertificate, "certificate " + std::to_string(c));
    }
  }
  Eigen::VectorXd g = certs[0].g.as_vector();
  for (std::size_t c = 1; c < certs.size(); ++c) g = g.cwiseMin(certs[c].g.as_vector());

  MinimalSlope out{WeightedField::scalar(certs[0].phi.base(), g), TheoremReport("minimal_slope_bound", tol)};
  const Eigen::VectorXd bound = energy_slopes(certs[0].phi, certs[0].eps, EnergyVariant::a);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    out.bound.record(bound(i) - g(i), {static_cast<long>(i), -1, -1});
  }
  out.bound.finalize();
  return out;
}

TheoremReport representation_check(const Section& phi, const RelaxationResult& result,
                                   const RelaxationParams& params, EnergyVariant variant) {
  TheoremReport report("representation_formula", params.tol);
  const Eigen::VectorXd h2 = result.h2.as_vector();
  const Eigen::VectorXd& w = phi.base()->weights;
  const double recomputed = w.dot(h2.cwiseProduct(h2));
  report.record(-std::abs(recomputed - result.energy), {-1, 0, -1});
  report.record(cheeger_energy(phi, params.eps, variant) - result.energy, {-1, 1, -1});
  report.record(result.energy - w.sum(), {-1, 2, -1});
  report.note = "witness.j: 0 energy = sum m H2^2, 1 energy <= E(phi), 2 energy >= sum m";
  if (!result.converged) report.note += "; solver did not stabilise (NonConvergence)";
  report.finalize();
  return report;
}

TheoremReport representation_check(const Section& phi, const AdmissibleClass& cls,
                                   const RelaxationParams& params, EnergyVariant variant) {
  return representation_check(phi, relax_energy(phi, cls, params, variant), params, variant);
}

}  // namespace ilslab
