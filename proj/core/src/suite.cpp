#include "ilslab/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include "ilslab/error.hpp"
#include "ilslab/lq.hpp"
#include "ilslab/oracles.hpp"

namespace ilslab {

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::geometry: return "geometry";
    case Suite::theorems: return "theorems";
    case Suite::cheeger: return "cheeger";
    case Suite::all: return "all";
  }
  return "all";
}

Suite parse_suite(std::string_view text) {
  if (text == "geometry") return Suite::geometry;
  if (text == "theorems") return Suite::theorems;
  if (text == "cheeger") return Suite::cheeger;
  if (text == "all") return Suite::all;
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(text) + "'");
}

std::string_view library_version() { return ILSLAB_VERSION; }

namespace {

constexpr double kOracleTol = 1e-7;
constexpr double kLqTol = 1e-12;

// Section names in map order with their index, for witness bookkeeping.
using Named = std::vector<std::pair<std::string, const Section*>>;

Named named_sections(const Instance& inst) {
  Named out;
  for (const auto& [name, phi] : inst.sections) out.emplace_back(name, &phi);
  return out;
}

// Runs `body` and turns any library error into one carrying the check name.
TheoremReport guarded(const std::string& name, const std::function<TheoremReport()>& body) {
  try {
    TheoremReport r = body();
    r.name = name;
    r.finalize();
    return r;
  } catch (const Error& e) {
    throw Error(e.kind(), name + ": " + e.message());
  }
}

// Folds per-section reports into one, stamping the section index as witness.k
// when the sub-report sets none.
void fold(TheoremReport& acc, TheoremReport part, long section) {
  if (part.witness.k < 0) part.witness.k = section;
  acc.merge(part);
}

void geometry(const Instance& inst, SuiteReport& out) {
  const Named secs = named_sections(inst);
  const QuotientMap& q = *inst.quotient;
  const SampledBase& base = *inst.base;

  out.checks.push_back(guarded("fiber_oracle", [&] {
    TheoremReport acc("fiber_oracle", 0.0);
    if (q.norm() != Norm::euclidean) {
      acc.note = "oracle comparison runs for the euclidean norm only";
      return acc;
    }
    const oracle::Budget budget{400, 777, 60};
    const std::size_t n = std::min<std::size_t>(base.size(), 6);
    for (std::size_t s = 0; s < secs.size(); ++s) {
      const Section& phi = *secs[s].second;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double fast = fiber_distance(q, base, phi.value(i), j, phi.scale());
          const double slow =
              oracle::fiber_distance(q, phi.value(i), base.point(j), phi.scale(), budget).value;
          acc.record(kOracleTol - std::abs(fast - slow),
                     {static_cast<long>(i), static_cast<long>(j), static_cast<long>(s)});
        }
      }
    }
    return acc;
  }));

  out.checks.push_back(guarded("fiber_identities", [&] {
    TheoremReport acc("fiber_identities", kIdentityTol);
    for (std::size_t s = 0; s < secs.size(); ++s) {
      fold(acc, check_fiber_identities(q, base, *secs[s].second, {-10, -2, -1, -0.5, 0.5, 1, 2, 10}),
           static_cast<long>(s));
    }
    return acc;
  }));

  out.checks.push_back(guarded("base_point_independence", [&] {
    TheoremReport acc("base_point_independence", kIdentityTol);
    for (std::size_t s = 0; s < secs.size(); ++s) {
      fold(acc, check_base_point_independence(*secs[s].second), static_cast<long>(s));
    }
    return acc;
  }));

  out.checks.push_back(guarded("scaling_invariance", [&] {
    TheoremReport acc("scaling_invariance", kScalingTol);
    for (std::size_t s = 0; s < secs.size(); ++s) {
      for (double lambda : {-2.0, 0.5, 10.0}) {
        fold(acc, check_scaling_invariance(*secs[s].second, lambda), static_cast<long>(s));
      }
    }
    return acc;
  }));
}

void theorems(const Instance& inst, const SuiteOptions& opt, SuiteReport& out) {
  const Named secs = named_sections(inst);
  const ScaleSchedule& sched = inst.schedule;

  auto per_section = [&](const std::string& name, double tol,
                         TheoremReport (*check)(const Section&, const ScaleSchedule&)) {
    out.checks.push_back(guarded(name, [&] {
      TheoremReport acc(name, tol);
      for (std::size_t s = 0; s < secs.size(); ++s) {
        fold(acc, check(*secs[s].second, sched), static_cast<long>(s));
      }
      return acc;
    }));
  };
  per_section("chain", kChainTol, check_chain);
  per_section("ball_monotonicity", kChainTol, check_ball_monotonicity);
  per_section("envelope_sandwich", kChainTol, check_envelope_sandwich);

  // Ordered pairs of distinct sections; a lone section is paired with itself.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < secs.size(); ++a) {
    for (std::size_t b = 0; b < secs.size(); ++b) {
      if (a != b || secs.size() == 1) pairs.emplace_back(a, b);
    }
  }
  auto unit_scale = [&](std::size_t a, std::size_t b) {
    return secs[a].second->scale() == 1.0 && secs[b].second->scale() == 1.0;
  };

  out.checks.push_back(guarded("leibniz", [&] {
    TheoremReport acc("leibniz", kChainTol);
    for (const auto& [a, b] : pairs) {
      if (!unit_scale(a, b)) continue;
      for (const auto& [alpha, beta] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {0.5, 1.5}}) {
        fold(acc, check_leibniz(*secs[a].second, *secs[b].second, alpha, beta, opt.c, sched),
             static_cast<long>(a * secs.size() + b));
      }
    }
    return acc;
  }));

  out.checks.push_back(guarded("product_bound", [&] {
    TheoremReport acc("product_bound", kChainTol);
    for (const auto& [a, b] : pairs) {
      fold(acc, check_product_bound(*secs[a].second, *secs[b].second, sched),
           static_cast<long>(a * secs.size() + b));
    }
    return acc;
  }));

  out.checks.push_back(guarded("convexity", [&] {
    TheoremReport acc("convexity", kConvexityTol);
    for (const auto& [a, b] : pairs) {
      if (!unit_scale(a, b)) continue;
      fold(acc, check_convexity(*secs[a].second, *secs[b].second, {0.0, 0.25, 0.5, 0.75, 1.0}),
           static_cast<long>(a * secs.size() + b));
    }
    return acc;
  }));

  out.checks.push_back(guarded("lq_triangle", [&] {
    TheoremReport acc("lq_triangle", kLqTol);
    for (const auto& [a, b] : pairs) {
      const WeightedField f = WeightedField::of(*secs[a].second);
      const WeightedField g = WeightedField::of(*secs[b].second);
      const WeightedField sum{f.base, f.values + g.values};
      for (LqVariant v : {LqVariant::sum, LqVariant::max, LqVariant::quad}) {
        for (double q : {1.5, 2.0, 3.0}) {
          const double lhs = lq_norm(sum, q, v);
          const double rhs = lq_norm(f, q, v) + lq_norm(g, q, v);
          acc.record((rhs - lhs) / std::max(1.0, rhs),
                     {static_cast<long>(a), static_cast<long>(b), static_cast<long>(v)});
        }
      }
    }
    return acc;
  }));
}

void cheeger(const Instance& inst, const SuiteOptions& opt, SuiteReport& out) {
  const Named secs = named_sections(inst);
  const double eps = inst.schedule[0];
  RelaxationParams params;
  params.eps = eps;
  params.tol = opt.tol;
  params.seed = opt.seed;
  params.restarts = opt.restarts;
  params.stages = opt.stages;
  params.max_iters = opt.max_iters;

  out.checks.push_back(guarded("energy_order", [&] {
    TheoremReport acc("energy_order", opt.tol);
    for (std::size_t s = 0; s < secs.size(); ++s) {
      const double ea = cheeger_energy(*secs[s].second, eps, EnergyVariant::a);
      const double el = cheeger_energy(*secs[s].second, eps, EnergyVariant::ils);
      acc.record(ea - el, {-1, -1, static_cast<long>(s)});
    }
    return acc;
  }));

  std::vector<RelaxationResult> results;
  out.checks.push_back(guarded("representation_formula", [&] {
    TheoremReport acc("representation_formula", opt.tol);
    for (std::size_t s = 0; s < secs.size(); ++s) {
      const Section& phi = *secs[s].second;
      if (!is_admissible(phi, inst.cls)) {
        throw Error(ErrorKind::NotAdmissible, "section '" + secs[s].first + "' is outside the class");
      }
      results.push_back(relax_energy(phi, inst.cls, params, EnergyVariant::a));
      fold(acc, representation_check(phi, results.back(), params, EnergyVariant::a),
           static_cast<long>(s));
      if (!results.back().converged) acc.note = "some restarts hit the iteration cap";
    }
    return acc;
  }));

  out.checks.push_back(guarded("relaxed_slope_certificate", [&] {
    TheoremReport acc("relaxed_slope_certificate", opt.tol);
    for (std::size_t s = 0; s < results.size(); ++s) {
      fold(acc, verify_certificate(results[s].certificate, opt.tol), static_cast<long>(s));
    }
    return acc;
  }));

  std::vector<RelaxedSlopeCertificate> lattices;
  out.checks.push_back(guarded("certificate_lattice", [&] {
    TheoremReport acc("certificate_lattice", opt.tol);
    for (std::size_t s = 0; s < results.size(); ++s) {
      // Both certificates must describe the same section: the minimizer.
      const RelaxedSlopeCertificate plain =
          constant_certificate(results[s].minimizer, inst.cls, eps, EnergyVariant::a);
      lattices.push_back(lattice_combine(plain, results[s].certificate));
      fold(acc, verify_certificate(lattices.back(), opt.tol), static_cast<long>(s));
    }
    return acc;
  }));

  out.checks.push_back(guarded("minimal_slope_bound", [&] {
    TheoremReport acc("minimal_slope_bound", opt.tol);
    for (std::size_t s = 0; s < results.size(); ++s) {
      const MinimalSlope min = minimal_relaxed_slope(
          {constant_certificate(results[s].minimizer, inst.cls, eps, EnergyVariant::a),
           results[s].certificate, lattices[s]},
          opt.tol);
      fold(acc, min.bound, static_cast<long>(s));
    }
    return acc;
  }));
}

}  // namespace

SuiteReport run_suite(const Instance& inst, Suite suite, const SuiteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.suite = std::string(to_string(suite));
  report.seed = options.seed;
  report.c = options.c;
  report.tol = options.tol;
  report.version = std::string(library_version());
  if (inst.sections.empty()) throw Error(ErrorKind::EmptyInput, "instance has no sections");
  if (suite == Suite::geometry || suite == Suite::all) geometry(inst, report);
  if (suite == Suite::theorems || suite == Suite::all) theorems(inst, options, report);
  if (suite == Suite::cheeger || suite == Suite::all) cheeger(inst, options, report);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ilslab
