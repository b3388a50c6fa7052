#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ilslab/cheeger.hpp"
#include "ilslab/error.hpp"
#include "ilslab/functionals.hpp"
#include "ilslab/instance.hpp"
#include "ilslab/lq.hpp"
#include "ilslab/report.hpp"
#include "ilslab/suite.hpp"

namespace {

using nlohmann::json;
using namespace ilslab;

// Exit codes: 0 success, 1 a suite check failed, 2 usage or input error.
constexpr int kSuiteFailed = 1;
constexpr int kError = 2;

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(text, out);
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {  // one row per column of m
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_json(m.col(c)));
  return out;
}

json field_json(const SlopeField& f) {
  json values = json::array();
  for (std::size_t i = 0; i < f.points; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < f.scales(); ++k) {
      const SlopeEntry& e = f.at(i, k);
      row.push_back(e.empty ? json(nullptr) : json(e.value));
    }
    values.push_back(std::move(row));
  }
  return {{"variant", std::string(to_string(f.variant))}, {"radii", f.radii}, {"values", values}};
}

struct GenArgs {
  std::uint64_t seed = 1;
  std::vector<std::size_t> dims{3, 1, 10};
  std::string out;
};

int run_gen(const GenArgs& a) {
  if (a.dims.size() != 3) throw Error(ErrorKind::BadDims, "--dims expects s,m,n");
  const Instance inst = generate_instance({a.dims[0], a.dims[1], a.dims[2], a.seed});
  emit(to_json(inst).dump(2) + "\n", a.out);
  return 0;
}

struct AnalyzeArgs {
  std::string instance, section, out;
  std::vector<double> scales;
  std::string variant = "asymptotic";
};

int run_analyze(const AnalyzeArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Section& phi = inst.section(a.section);
  const ScaleSchedule sched = a.scales.empty() ? inst.schedule : ScaleSchedule(a.scales);
  const SlopeField local = slope_field(phi, sched, SlopeVariant::local);
  const SlopeField asym = slope_field(phi, sched, SlopeVariant::asymptotic);
  if (ends_with(a.out, ".csv")) {
    if (a.variant != "local" && a.variant != "asymptotic") {
      throw Error(ErrorKind::InvalidArgument, "--variant must be local or asymptotic");
    }
    emit(slope_field_csv(a.variant == "local" ? local : asym), a.out);
    return 0;
  }
  const IlsValue ils = global_ils(phi);
  json doc = {{"section", a.section},
              {"ils", {{"value", ils.value}, {"from", ils.from}, {"to", ils.to}}},
              {"cMin", c_min(phi)},
              {"local", field_json(local)},
              {"asymptotic", field_json(asym)}};
  emit(stable_dump(doc) + "\n", a.out);
  return 0;
}

struct CheckArgs {
  std::string instance, suite = "all", out, format = "json";
  double c = 2.0, tol = 1e-9;
  std::uint64_t seed = 1;
  std::size_t restarts = 4, stages = 3, max_iters = 2000;
};

int run_check(const CheckArgs& a) {
  const Instance inst = load_instance(a.instance);
  SuiteOptions opt;
  opt.c = a.c;
  opt.tol = a.tol;
  opt.seed = a.seed;
  opt.restarts = a.restarts;
  opt.stages = a.stages;
  opt.max_iters = a.max_iters;
  const SuiteReport report = run_suite(inst, parse_suite(a.suite), opt);
  for (const auto& c : report.checks) {
    std::fprintf(stderr, "%s %-28s margin %.6e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                 c.worst_margin);
  }
  std::fprintf(stderr, "suite %s %s in %.3f s\n", report.suite.c_str(),
               report.pass() ? "passed" : "failed", report.seconds);
  const ReportFormat fmt = a.format == "csv" ? ReportFormat::csv : ReportFormat::json;
  if (a.format != "csv" && a.format != "json") {
    throw Error(ErrorKind::InvalidArgument, "--format must be json or csv");
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << (fmt == ReportFormat::json ? stable_dump(to_json(report)) + "\n" : suite_csv(report));
  } else {
    write_report(report, fmt, a.out);
  }
  return report.pass() ? 0 : kSuiteFailed;
}

struct CheegerArgs {
  std::string instance, section, variant = "a", out;
  double eps = 0.0, tau = 1.0, tol = 1e-9;
  std::size_t restarts = 4, stages = 3, max_iters = 2000;
  std::uint64_t seed = 1;
};

int run_cheeger(const CheegerArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Section& phi = inst.section(a.section);
  RelaxationParams params;
  params.eps = a.eps > 0.0 ? a.eps : inst.schedule[0];
  params.tau = a.tau;
  params.restarts = a.restarts;
  params.seed = a.seed;
  params.stages = a.stages;
  params.max_iters = a.max_iters;
  params.tol = a.tol;
  const EnergyVariant variant = parse_energy_variant(a.variant);
  const RelaxationResult r = relax_energy(phi, inst.cls, params, variant);
  const TheoremReport rep = representation_check(phi, r, params, variant);
  const TheoremReport cert = verify_certificate(r.certificate, params.tol);
  json doc = {{"section", a.section},
              {"variant", a.variant},
              {"eps", params.eps},
              {"tau", params.tau},
              {"seed", params.seed},
              {"energyOfPhi", cheeger_energy(phi, params.eps, variant)},
              {"energy", r.energy},
              {"objective", r.objective},
              {"h2", vector_json(r.h2.as_vector())},
              {"minimizer", matrix_json(r.minimizer.values())},
              {"converged", r.converged},
              {"bestRestart", r.best_restart},
              {"representation", to_json(rep)},
              {"certificate", to_json(cert)}};
  std::fprintf(stderr, "evaluations %zu\n", r.evaluations);
  emit(stable_dump(doc) + "\n", a.out);
  return 0;
}

struct NormsArgs {
  std::string instance, field, against, variant = "sum", out;
  double q = 2.0;
};

int run_norms(const NormsArgs& a) {
  const Instance inst = load_instance(a.instance);
  const PlainField f = inst.field(a.field);
  const WeightedField wf{f.base, f.values};
  const LqVariant variant = parse_lq_variant(a.variant);
  json doc = {{"field", a.field},
              {"q", a.q},
              {"variant", a.variant},
              {"components", vector_json(component_norms(wf, a.q))},
              {"norm", lq_norm(wf, a.q, variant)}};
  if (!a.against.empty()) {
    const PlainField g = inst.field(a.against);
    doc["against"] = a.against;
    doc["distance"] = lq_distance(wf, WeightedField{g.base, g.values}, a.q, variant);
  }
  emit(stable_dump(doc) + "\n", a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsically Lipschitz sections of linear quotient maps"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random instance");
  g->add_option("--seed", gen.seed, "RNG seed");
  g->add_option("--dims", gen.dims, "s,m,n")->delimiter(',')->expected(3);
  g->add_option("--out", gen.out, "Output path (default stdout)");

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "ILS and slope fields of one section");
  an->add_option("--instance", analyze.instance)->required();
  an->add_option("--section", analyze.section)->required();
  an->add_option("--scales", analyze.scales, "Decreasing radii")->delimiter(',');
  an->add_option("--variant", analyze.variant, "Field written when --out ends in .csv");
  an->add_option("--out", analyze.out, "Output path; .csv writes one slope table");

  CheckArgs check;
  auto* ch = app.add_subcommand("check", "Run a verification suite");
  ch->add_option("--instance", check.instance)->required();
  ch->add_option("--suite", check.suite)
      ->check(CLI::IsMember({"geometry", "theorems", "cheeger", "all"}));
  ch->add_option("--c", check.c, "Admissibility constant");
  ch->add_option("--tol", check.tol, "Certificate tolerance");
  ch->add_option("--seed", check.seed);
  ch->add_option("--restarts", check.restarts);
  ch->add_option("--stages", check.stages);
  ch->add_option("--max-iters", check.max_iters);
  ch->add_option("--format", check.format)->check(CLI::IsMember({"json", "csv"}));
  ch->add_option("--out", check.out, "Report path (default stdout)");

  CheegerArgs cheeger;
  auto* cg = app.add_subcommand("cheeger", "Relax the Cheeger energy of one section");
  cg->add_option("--instance", cheeger.instance)->required();
  cg->add_option("--section", cheeger.section)->required();
  cg->add_option("--eps", cheeger.eps, "Ball radius (default: largest schedule radius)");
  cg->add_option("--tau", cheeger.tau);
  cg->add_option("--restarts", cheeger.restarts);
  cg->add_option("--seed", cheeger.seed);
  cg->add_option("--stages", cheeger.stages);
  cg->add_option("--max-iters", cheeger.max_iters);
  cg->add_option("--tol", cheeger.tol);
  cg->add_option("--variant", cheeger.variant)->check(CLI::IsMember({"a", "ils"}));
  cg->add_option("--out", cheeger.out);

  NormsArgs norms;
  auto* nm = app.add_subcommand("norms", "L^q norms of a section or field");
  nm->add_option("--instance", norms.instance)->required();
  nm->add_option("--field", norms.field)->required();
  nm->add_option("--against", norms.against, "Second field for lq_distance");
  nm->add_option("--q", norms.q);
  nm->add_option("--variant", norms.variant)->check(CLI::IsMember({"sum", "max", "quad"}));
  nm->add_option("--out", norms.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (g->parsed()) return run_gen(gen);
    if (an->parsed()) return run_analyze(analyze);
    if (ch->parsed()) return run_check(check);
    if (cg->parsed()) return run_cheeger(cheeger);
    if (nm->parsed()) return run_norms(norms);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s (field %s, reason %s)\n", e.what(), e.field().c_str(),
                 e.reason().c_str());
    return kError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
