// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [path-to-ilslab-cli]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ilslab/checks.hpp"
#include "ilslab/cheeger.hpp"
#include "ilslab/functionals.hpp"
#include "ilslab/instance.hpp"
#include "ilslab/lq.hpp"
#include "ilslab/oracles.hpp"
#include "ilslab/suite.hpp"
#include "support.hpp"

using namespace ilslab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double golden(const std::string& fixture, const std::string& quantity) {
  for (const auto& row : oracle::read_golden(std::string(ILSLAB_GOLDEN) + "/derived.csv")) {
    if (row.fixture == fixture && row.quantity == quantity) return row.value;
  }
  throw std::runtime_error("golden row missing: " + fixture + "/" + quantity);
}

// Generated instance; seeds differ per criterion so the sweeps are independent.
Instance random_instance(std::uint64_t seed, std::size_t max_s = 6, std::size_t max_m = 3,
                         std::size_t n = 10) {
  const std::size_t s = 2 + seed % (max_s - 1);
  const std::size_t m = 1 + (seed / 5) % std::min(max_m, s - 1);
  return generate_instance({s, m, n, seed});
}

std::vector<Section> fixture_sections(const Instance& f1) {
  std::vector<Section> out;
  for (const auto& [name, phi] : f1.sections) out.push_back(phi);
  return out;
}

// Tracks the worst margin of a family of reports and whether every one passed.
struct Tally {
  bool pass = true;
  double worst = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;

  void add(const TheoremReport& r) {
    pass = pass && r.pass;
    worst = std::min(worst, r.worst_margin);
    checked += r.instances;
  }
  Outcome outcome(const std::string& extra = {}) const {
    return {pass && checked > 0, "worst margin " + fmt("%.3e", worst) + ", " +
                                     std::to_string(checked) + " comparisons" + extra};
  }
};

const Instance& f1() {
  static const Instance inst = load_instance(std::string(ILSLAB_FIXTURES) + "/f1.json");
  return inst;
}

Outcome fiber_geometry() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  const oracle::Budget budget{1000, 2024, 60};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance inst = random_instance(1000 + seed, 6, 3, 4);
    const QuotientMap& q = *inst.quotient;
    const SampledBase& base = *inst.base;
    const Section& phi = inst.section("phi");
    const double lambda = seed % 2 ? 1.0 : -2.5;
    for (std::size_t j = 0; j < 2; ++j) {
      const Eigen::VectorXd x = phi.value(j + 1) + Eigen::VectorXd::Constant(q.source_dim(), 0.3);
      const double fast = fiber_distance(q, x, base.point(j), lambda);
      const double slow = oracle::fiber_distance(q, x, base.point(j), lambda, budget).value;
      worst = std::max(worst, std::abs(fast - slow));
      // Gap: distance from an oracle point of one fiber to the other fiber.
      const Eigen::VectorXd on =
          oracle::fiber_distance(q, x, base.point(j + 2), lambda, budget).point;
      const double gap_slow = oracle::fiber_distance(q, on, base.point(j), lambda, budget).value;
      worst = std::max(worst, std::abs(fiber_gap(q, base, j + 2, j, lambda) - gap_slow));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-7 && secs < 10.0,
          "max |fast - oracle| " + fmt("%.3e", worst) + " (tol 1e-7), " + fmt("%.2f", secs) + " s (limit 10 s)"};
}

Outcome identity_suite() {
  Tally t;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = random_instance(2000 + seed);
    t.add(check_fiber_identities(*inst.quotient, *inst.base, inst.section("phi"),
                                 {-10, -2, -1, -0.5, 0.5, 1, 2, 10}));
  }
  return t.outcome(" (tol 1e-9 relative)");
}

Outcome base_point_independence() {
  Tally t;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = random_instance(3000 + seed);
    for (const auto& [name, phi] : inst.sections) t.add(check_base_point_independence(phi));
  }
  for (const Section& phi : fixture_sections(f1())) t.add(check_base_point_independence(phi));
  return t.outcome(" (tol 1e-9 relative)");
}

Outcome scaling_invariance() {
  Tally t;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = random_instance(4000 + seed);
    for (double lambda : {-10.0, -0.5, 0.5, 2.0, 10.0}) {
      t.add(check_scaling_invariance(inst.section("phi"), lambda));
    }
  }
  for (const Section& phi : fixture_sections(f1())) t.add(check_scaling_invariance(phi, 2.0));
  return t.outcome(" (tol 1e-12 relative)");
}

Outcome chain() {
  Tally t;
  for (const Section& phi : fixture_sections(f1())) t.add(check_chain(phi, f1().schedule));
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = random_instance(5000 + seed);
    t.add(check_chain(inst.section("phi"), inst.schedule));
  }
  return t.outcome(" (slack >= -1e-12)");
}

Outcome leibniz() {
  Tally t;
  std::mt19937_64 rng(6000);
  std::uniform_real_distribution<double> coef(0.2, 3.0);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = random_instance(6000 + seed);
    const double sign = seed % 2 ? 1.0 : -1.0;
    const double alpha = sign * coef(rng), beta = sign * coef(rng);
    t.add(check_leibniz(inst.section("phi"), inst.section("psi"), alpha, beta, 2.0, inst.schedule));
  }
  const auto secs = fixture_sections(f1());
  for (const Section& a : secs) {
    for (const Section& b : secs) {
      for (const auto& [alpha, beta] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {0.5, 1.5}}) {
        t.add(check_leibniz(a, b, alpha, beta, 2.0, f1().schedule));
      }
    }
  }
  const TheoremReport tight = check_leibniz(f1().section("phi"), f1().section("psi"), 3.0, -1.0,
                                            2.0, ScaleSchedule({1.5}));
  const double expected = golden("leibniz_a3_bm1", "margin");
  const bool tight_ok = tight.pass && std::abs(tight.worst_margin - expected) <= 1e-6;
  Outcome o = t.outcome("; tight fixture margin " + fmt("%.7f", tight.worst_margin) +
                        " vs oracle " + fmt("%.7f", expected) + " (tol 1e-6)");
  o.pass = o.pass && tight_ok;
  return o;
}

Outcome product() {
  Tally t;
  std::size_t skipped = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = random_instance(7000 + seed);
    const TheoremReport r = check_product_bound(inst.section("phi"), inst.section("psi"), inst.schedule);
    if (r.note.find("skipped") != std::string::npos) ++skipped;
    t.add(r);
  }
  const auto q = fx::quotient({{1, 0}});
  const auto b = fx::base(*q, {{1}, {2}});
  const Section one = validate_section(q, b, fx::cols({{1, 1}, {2, 1}}), 1.0);
  const ProductConstants pc = product_constants(one, one);
  const ScaleSchedule wide({1.5});
  const double lhs =
      slope_field(*q, hadamard_product(one, one), wide, SlopeVariant::asymptotic).at(0, 0).value;
  const double ils = slope_field(one, wide, SlopeVariant::asymptotic).at(0, 0).value;
  const double rhs = pc.m_bound * pc.k * (ils + ils);
  const bool exact = pc.m_bound == 2.0 && std::abs(pc.k - 1.0) <= 1e-12 &&
                     std::abs(lhs - 3.0) <= 1e-12 && std::abs(rhs - 4.0) <= 1e-12;
  t.add(check_product_bound(one, one, wide));
  Outcome o = t.outcome("; hand fixture M=" + fmt("%g", pc.m_bound) + " k=" + fmt("%.12g", pc.k) +
                        " LHS=" + fmt("%.12g", lhs) + " RHS=" + fmt("%.12g", rhs) + ", " +
                        std::to_string(skipped) + " random pairs with infinite k");
  o.pass = o.pass && exact;
  return o;
}

Outcome convexity() {
  Tally t;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = random_instance(8000 + seed);
    t.add(check_convexity(inst.section("phi"), inst.section("psi"), {0, 0.25, 0.5, 0.75, 1}));
  }
  return t.outcome(" (c_min slack >= -1e-9)");
}

Outcome ball_monotonicity() {
  Tally t;
  // F1's own schedule leaves every eps/3 ball a singleton, so wider radii
  // are added to make the nested-ball comparison non-vacuous.
  for (const Section& phi : fixture_sections(f1())) {
    t.add(check_ball_monotonicity(phi, f1().schedule));
    t.add(check_ball_monotonicity(phi, ScaleSchedule({6.0, 4.5, 3.5})));
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = random_instance(9000 + seed, 6, 3, 16);
    t.add(check_ball_monotonicity(inst.section("phi"), ScaleSchedule({3.0 * inst.schedule[0], inst.schedule[0]})));
  }
  return t.outcome(" (slack >= -1e-12)");
}

Outcome lq_suite() {
  std::mt19937_64 rng(10000);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.2, 3.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const auto q = fx::quotient({{1, 0, 0, 0}});
    const std::size_t n = 2 + static_cast<std::size_t>(t % 7);
    Eigen::MatrixXd pts(1, static_cast<Eigen::Index>(n));
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      pts(0, static_cast<Eigen::Index>(i)) = static_cast<double>(i);
      w(static_cast<Eigen::Index>(i)) = u(rng);
    }
    const BasePtr b = make_base(*q, pts, w);
    auto field = [&] {
      Eigen::MatrixXd m(4, static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = g(rng);
      return WeightedField{b, m};
    };
    const WeightedField x = field(), y = field();
    const double qexp = 1.05 + 4.0 * u(rng) / 3.0;
    const double a = g(rng);
    for (LqVariant v : {LqVariant::sum, LqVariant::max, LqVariant::quad}) {
      const double nx = lq_norm(x, qexp, v), ny = lq_norm(y, qexp, v);
      const double scale = std::max(1.0, nx + ny);
      worst = std::min(worst, nx);  // non-negativity
      worst = std::min(worst, -std::abs(lq_norm(WeightedField{b, a * x.values}, qexp, v) -
                                        std::abs(a) * nx) / std::max(1.0, std::abs(a) * nx));
      worst = std::min(worst, (nx + ny - lq_norm(WeightedField{b, x.values + y.values}, qexp, v)) / scale);
      worst = std::min(worst, -lq_norm(WeightedField{b, 0.0 * x.values}, qexp, v));
    }
  }
  const auto q = fx::quotient({{1, 0, 0}});
  const auto b = fx::base(*q, {{0}, {1}});
  const WeightedField hand{b, fx::cols({{3, 4}, {0, 0}})};
  const double s = lq_norm(hand, 2, LqVariant::sum), m = lq_norm(hand, 2, LqVariant::max),
               qd = lq_norm(hand, 2, LqVariant::quad);
  const bool exact = s == 7.0 && m == 4.0 && qd == 5.0;
  return {worst >= -1e-12 && exact, "worst axiom slack " + fmt("%.3e", worst) +
                                        " (tol 1e-12); hand fixture (" + fmt("%.17g", s) + ", " +
                                        fmt("%.17g", m) + ", " + fmt("%.17g", qd) + ")"};
}

Outcome cheeger_values() {
  const Section& flat = f1().section("psi");
  const Section& phi = f1().section("phi");
  const double ef = cheeger_energy(flat, 1.5, EnergyVariant::a);
  const double ep = cheeger_energy(phi, 1.5, EnergyVariant::a);
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = random_instance(11000 + seed);
    for (const auto& [name, s] : inst.sections) {
      const double eps = inst.schedule[0];
      worst = std::min(worst, cheeger_energy(s, eps, EnergyVariant::a) -
                                  cheeger_energy(s, eps, EnergyVariant::ils));
    }
  }
  for (const Section& s : fixture_sections(f1())) {
    worst = std::min(worst, cheeger_energy(s, 1.5, EnergyVariant::a) -
                                cheeger_energy(s, 1.5, EnergyVariant::ils));
  }
  const bool ok = ef == 3.0 && std::abs(ep - 15.0) <= 1e-9 && worst >= 0.0;
  return {ok, "flat " + fmt("%.17g", ef) + ", (y,2y) " + fmt("%.17g", ep) +
                  ", min(E_a - E_Ils) " + fmt("%.3e", worst)};
}

Outcome representation() {
  const auto t0 = std::chrono::steady_clock::now();
  RelaxationParams params;
  params.tau = 1e8;  // proximity negligible: compared against the tau -> inf search
  double worst_eq = 0.0, worst_upper = std::numeric_limits<double>::infinity(),
         worst_lower = std::numeric_limits<double>::infinity(),
         worst_oracle = std::numeric_limits<double>::infinity();
  std::size_t unconverged = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 8 + static_cast<std::size_t>((seed * 5) % 13);  // 8..20
    const std::size_t s = 2 + seed % 3;                                      // 2..4
    const Instance inst = generate_instance({s, 1 + seed % (s - 1), n, 12000 + seed});
    const Section& phi = inst.section("phi");
    params.eps = inst.schedule[0];
    params.seed = seed;
    const RelaxationResult r = relax_energy(phi, inst.cls, params, EnergyVariant::a);
    if (!r.converged) ++unconverged;
    const Eigen::VectorXd h2 = r.h2.as_vector();
    const Eigen::VectorXd& w = inst.base->weights;
    worst_eq = std::max(worst_eq, std::abs(w.dot(h2.cwiseProduct(h2)) - r.energy));
    worst_upper = std::min(worst_upper, cheeger_energy(phi, params.eps, EnergyVariant::a) - r.energy);
    worst_lower = std::min(worst_lower, r.energy - w.sum());
    const oracle::Result o = oracle::relaxation_search(phi, inst.cls, params.eps, EnergyVariant::a,
                                                       oracle::Budget{1000, 12000 + seed, 60});
    worst_oracle = std::min(worst_oracle, o.value - r.energy);
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_eq <= 1e-6 && worst_upper >= -1e-9 && worst_lower >= -1e-9 &&
                  worst_oracle >= -1e-4 && secs < 120.0;
  return {ok, "|E - sum m H2^2| " + fmt("%.2e", worst_eq) + ", E_a(phi) - E " +
                  fmt("%.2e", worst_upper) + ", E - sum m " + fmt("%.2e", worst_lower) +
                  ", oracle - E " + fmt("%.2e", worst_oracle) + " (tol -1e-4), " +
                  std::to_string(unconverged) + " unstabilised, " + fmt("%.1f", secs) +
                  " s (limit 120 s)"};
}

Outcome lattice() {
  bool ok = true;
  double worst_bound = std::numeric_limits<double>::infinity();
  std::size_t lattices = 0;
  auto exercise = [&](const Section& phi, double eps) {
    const AdmissibleClass cls;
    RelaxationParams params;
    params.eps = eps;
    params.tau = 1.0;
    params.max_iters = 500;
    const RelaxationResult r = relax_energy(phi, cls, params, EnergyVariant::a);
    const RelaxedSlopeCertificate plain = constant_certificate(r.minimizer, cls, eps, EnergyVariant::a);
    ok = ok && verify_certificate(r.certificate, params.tol).pass &&
         verify_certificate(plain, params.tol).pass;
    const RelaxedSlopeCertificate joined = lattice_combine(plain, r.certificate);
    ok = ok && verify_certificate(joined, params.tol).pass;
    const MinimalSlope min = minimal_relaxed_slope({plain, r.certificate, joined}, params.tol);
    ok = ok && min.bound.pass;
    worst_bound = std::min(worst_bound, min.bound.worst_margin);

    // Two certificates of phi itself: the constant one and a dominated copy.
    const RelaxedSlopeCertificate base = constant_certificate(phi, cls, eps, EnergyVariant::a);
    RelaxedSlopeCertificate raised = base;
    raised.g.values.array() += 0.5;
    const RelaxedSlopeCertificate both = lattice_combine(raised, base);
    ok = ok && verify_certificate(both, params.tol).pass;
    const MinimalSlope own = minimal_relaxed_slope({raised, base, both}, params.tol);
    ok = ok && own.bound.pass;
    worst_bound = std::min(worst_bound, own.bound.worst_margin);
    lattices += 2;
  };
  for (const Section& phi : fixture_sections(f1())) exercise(phi, 1.5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = random_instance(13000 + seed, 4, 2, 10);
    exercise(inst.section("phi"), inst.schedule[0]);
  }
  return {ok, std::to_string(lattices) + " lattices verified, minimal slope <= Ils_a margin " +
                  fmt("%.3e", worst_bound)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli) {
  const Instance inst = generate_instance({3, 1, 10, 7});
  SuiteOptions opt;
  opt.seed = 5;
  const std::string a = stable_dump(to_json(run_suite(inst, Suite::all, opt)));
  const std::string b = stable_dump(to_json(run_suite(inst, Suite::all, opt)));
  bool ok = a == b;
  std::string detail = std::string("in-process reports ") + (ok ? "identical" : "differ");
  if (!cli.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ilslab_acceptance";
    fs::create_directories(dir);
    const std::string inst_path = (dir / "g7.json").string();
    save_instance(inst, inst_path);
    std::vector<std::string> reports;
    for (int i = 0; i < 2; ++i) {
      const std::string out = (dir / ("r" + std::to_string(i) + ".json")).string();
      const std::string cmd = "\"" + cli + "\" check --instance \"" + inst_path +
                              "\" --suite all --seed 5 --out \"" + out + "\" 2>/dev/null";
      const int code = std::system(cmd.c_str());
      ok = ok && code == 0;
      reports.push_back(slurp(out));
    }
    const bool same = !reports[0].empty() && reports[0] == reports[1];
    ok = ok && same;
    detail += std::string("; CLI reports ") + (same ? "byte-identical" : "differ") + " (" +
              std::to_string(reports[0].size()) + " bytes)";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria{
      {1, "fiber geometry exactness", fiber_geometry},
      {2, "fiber identity suite", identity_suite},
      {3, "base-point independence", base_point_independence},
      {4, "scaling invariance", scaling_invariance},
      {5, "chain inequality", chain},
      {6, "leibniz suite", leibniz},
      {7, "product suite", product},
      {8, "convexity", convexity},
      {9, "ball monotonicity", ball_monotonicity},
      {10, "L^q norm suite", lq_suite},
      {11, "cheeger energy values", cheeger_values},
      {12, "representation formula", representation},
      {13, "certificate lattice", lattice},
      {14, "determinism", [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %-28s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
