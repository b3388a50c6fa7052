#include "ilslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ilslab/error.hpp"

namespace ilslab {

using nlohmann::json;

bool SuiteReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

std::string fixed(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

void emit(const json& v, std::string& out) {
  switch (v.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {  // std::map: already sorted
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        emit(item, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        emit(v[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? fixed(d) : "\"" + fixed(d) + "\"";
      break;
    }
    default:
      out += v.dump();
  }
}

double read_number(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::ParseError, "not a number: " + s);
  }
  return v.get<double>();
}

}  // namespace

std::string stable_dump(const json& value) {
  std::string out;
  emit(value, out);
  return out;
}

json to_json(const TheoremReport& r) {
  return {{"name", r.name},
          {"pass", r.pass},
          {"worstMargin", r.worst_margin},
          {"witness", {{"i", r.witness.i}, {"j", r.witness.j}, {"k", r.witness.k}}},
          {"tolerance", r.tolerance},
          {"instances", r.instances},
          {"note", r.note}};
}

TheoremReport theorem_report_from_json(const json& j) {
  TheoremReport r(j.at("name").get<std::string>(), read_number(j.at("tolerance")));
  r.pass = j.at("pass").get<bool>();
  r.worst_margin = read_number(j.at("worstMargin"));
  r.witness.i = j.at("witness").at("i").get<long>();
  r.witness.j = j.at("witness").at("j").get<long>();
  r.witness.k = j.at("witness").at("k").get<long>();
  r.instances = j.at("instances").get<std::size_t>();
  r.note = j.at("note").get<std::string>();
  return r;
}

json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite},
          {"pass", r.pass()},
          {"checks", std::move(checks)},
          {"environment",
           {{"seed", r.seed}, {"c", r.c}, {"tol", r.tol}, {"version", r.version}}}};
}

SuiteReport suite_report_from_json(const json& j) {
  SuiteReport r;
  try {
    r.suite = j.at("suite").get<std::string>();
    for (const auto& c : j.at("checks")) r.checks.push_back(theorem_report_from_json(c));
    const json& env = j.at("environment");
    r.seed = env.at("seed").get<std::uint64_t>();
    r.c = read_number(env.at("c"));
    r.tol = read_number(env.at("tol"));
    r.version = env.at("version").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return r;
}

std::string suite_csv(const SuiteReport& r) {
  std::ostringstream out;
  out << "name,pass,worst_margin,i,j,k,tolerance,instances\n";
  for (const auto& c : r.checks) {
    out << c.name << ',' << (c.pass ? "true" : "false") << ',' << fixed(c.worst_margin) << ','
        << c.witness.i << ',' << c.witness.j << ',' << c.witness.k << ',' << fixed(c.tolerance)
        << ',' << c.instances << '\n';
  }
  return out.str();
}

std::string slope_field_csv(const SlopeField& field) {
  std::ostringstream out;
  for (std::size_t k = 0; k < field.scales(); ++k) {
    out << (k ? "," : "") << "eps=" << fixed(field.radii[k]);
  }
  out << '\n';
  for (std::size_t i = 0; i < field.points; ++i) {
    for (std::size_t k = 0; k < field.scales(); ++k) {
      const SlopeEntry& e = field.at(i, k);
      out << (k ? "," : "") << (e.empty ? std::string("nan") : fixed(e.value));
    }
    out << '\n';
  }
  return out.str();
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

void write_report(const SuiteReport& r, ReportFormat format, const std::string& path) {
  write_text(format == ReportFormat::json ? stable_dump(to_json(r)) + "\n" : suite_csv(r), path);
}

}  // namespace ilslab
