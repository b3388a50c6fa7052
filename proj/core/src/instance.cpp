#include "ilslab/instance.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "ilslab/error.hpp"

namespace ilslab {

using nlohmann::json;

const Section& Instance::section(const std::string& name) const {
  const auto it = sections.find(name);
  if (it == sections.end()) throw Error(ErrorKind::InvalidArgument, "no section named '" + name + "'");
  return it->second;
}

PlainField Instance::field(const std::string& name) const {
  if (const auto it = fields.find(name); it != fields.end()) return it->second;
  if (const auto it = sections.find(name); it != sections.end()) return as_plain(it->second);
  throw Error(ErrorKind::InvalidArgument, "no field or section named '" + name + "'");
}

namespace {

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw Error(ErrorKind::ParseError, path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::ParseError, path + "." + key + ": missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw Error(ErrorKind::ParseError, path + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw Error(ErrorKind::ParseError, path + ": expected a count");
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw Error(ErrorKind::ParseError, path + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// Array of rows, each `width` long. Returns rows x width.
Eigen::MatrixXd rows_of(const json& v, std::size_t width, const std::string& path) {
  if (!v.is_array()) throw Error(ErrorKind::ParseError, path + ": expected an array of rows");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < v.size(); ++r) {
    const auto row = numbers(v[r], path + "[" + std::to_string(r) + "]");
    if (row.size() != width) {
      throw ValidationError(path, "DimensionMismatch",
                            "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                " entries, expected " + std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return out;
}

json rows_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

QuotientPtr parse_quotient(const json& doc) {
  const json& qj = member(doc, "quotient", "");
  const std::size_t s = count(member(qj, "s", "quotient"), "quotient.s");
  const std::size_t m = count(member(qj, "m", "quotient"), "quotient.m");
  const json& aj = member(qj, "A", "quotient");
  const Eigen::MatrixXd a = rows_of(aj, s, "quotient.A");
  if (static_cast<std::size_t>(a.rows()) != m) {
    throw ValidationError("quotient.A", "DimensionMismatch",
                          "expected " + std::to_string(m) + " rows");
  }
  Norm norm = Norm::euclidean;
  if (const auto it = qj.find("norm"); it != qj.end()) {
    if (!it->is_string()) throw Error(ErrorKind::ParseError, "quotient.norm: expected a string");
    try {
      norm = parse_norm(it->get<std::string>());
    } catch (const Error& e) {
      throw ValidationError("quotient.norm", "UnknownNorm", e.what());
    }
  }
  try {
    return std::make_shared<const QuotientMap>(build_quotient(a, norm));
  } catch (const Error& e) {
    const std::string reason(to_string(e.kind()));
    throw ValidationError(e.kind() == ErrorKind::NotStrictQuotient ? "quotient.m" : "quotient.A",
                          reason, e.what());
  }
}

BasePtr parse_base(const json& doc, const QuotientMap& q) {
  const json& bj = member(doc, "base", "");
  const Eigen::MatrixXd pts = rows_of(member(bj, "points", "base"), q.target_dim(), "base.points");
  const auto n = pts.rows();
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
  if (const auto it = bj.find("weights"); it != bj.end()) {
    const auto w = numbers(*it, "base.weights");
    weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
  std::optional<Eigen::MatrixXd> metric;
  if (const auto it = bj.find("metric"); it != bj.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "induced") {
        throw ValidationError("base.metric", "UnknownMode", "expected \"induced\" or a matrix");
      }
    } else {
      metric = rows_of(*it, static_cast<std::size_t>(n), "base.metric");
    }
  }
  std::vector<std::string> labels;
  if (const auto it = bj.find("labels"); it != bj.end()) {
    if (!it->is_array()) throw Error(ErrorKind::ParseError, "base.labels: expected an array");
    for (const auto& l : *it) {
      if (!l.is_string()) throw Error(ErrorKind::ParseError, "base.labels: expected strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return make_base(q, pts.transpose(), std::move(weights), std::move(metric), std::move(labels));
}

double scale_of(const json& sj, const std::string& path) {
  const auto it = sj.find("scale");
  return it == sj.end() ? 1.0 : number(*it, path + ".scale");
}

Section parse_section(const json& sj, const std::string& path, const QuotientPtr& q,
                      const BasePtr& base) {
  const double lambda = scale_of(sj, path);
  if (lambda == 0.0) throw ValidationError(path + ".scale", "DegenerateScale");
  const bool has_values = sj.contains("values");
  const bool has_lift = sj.contains("lift");
  if (has_values == has_lift) {
    throw ValidationError(path, "Ambiguous", "give exactly one of \"values\" or \"lift\"");
  }
  const std::string key = has_values ? path + ".values" : path + ".lift";
  const std::size_t width = has_values ? q->source_dim() : q->fiber_dim();
  const Eigen::MatrixXd rows = rows_of(sj.at(has_values ? "values" : "lift"), width, key);
  if (static_cast<std::size_t>(rows.rows()) != base->size()) {
    throw ValidationError(key, "DimensionMismatch",
                          "expected one row per base point (" + std::to_string(base->size()) + ")");
  }
  try {
    if (has_lift) return lift_section(q, base, rows.transpose(), lambda);
    return validate_section(q, base, rows.transpose(), lambda);
  } catch (const NotOnFiberError& e) {
    throw ValidationError(key, "NotOnFiber",
                          "point " + std::to_string(e.index()) + " residual " +
                              std::to_string(e.residual()));
  }
}

}  // namespace

Instance parse_instance(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "instance must be a JSON object");
  Instance inst;
  inst.quotient = parse_quotient(doc);
  inst.base = parse_base(doc, *inst.quotient);

  if (const auto it = doc.find("sections"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorKind::ParseError, "sections: expected an object");
    for (const auto& [name, sj] : it->items()) {
      inst.sections.emplace(name, parse_section(sj, "sections." + name, inst.quotient, inst.base));
    }
  }
  if (const auto it = doc.find("fields"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorKind::ParseError, "fields: expected an object");
    for (const auto& [name, fj] : it->items()) {
      const std::string path = "fields." + name + ".values";
      const Eigen::MatrixXd rows =
          rows_of(member(fj, "values", "fields." + name), inst.quotient->source_dim(), path);
      if (static_cast<std::size_t>(rows.rows()) != inst.base->size()) {
        throw ValidationError(path, "DimensionMismatch", "expected one row per base point");
      }
      if (!rows.allFinite()) throw ValidationError(path, "NonFinite");
      inst.fields.emplace(name, PlainField{inst.base, rows.transpose()});
    }
  }
  if (const auto it = doc.find("schedule"); it != doc.end()) {
    try {
      inst.schedule = ScaleSchedule(numbers(member(*it, "radii", "schedule"), "schedule.radii"));
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError) throw;
      throw ValidationError("schedule.radii", "InvalidSchedule", e.what());
    }
  }
  if (const auto it = doc.find("class"); it != doc.end()) {
    if (const auto c = it->find("c"); c != it->end()) inst.cls.c = number(*c, "class.c");
    if (const auto r = it->find("boundRadius"); r != it->end()) {
      inst.cls.bound_radius = number(*r, "class.boundRadius");
    }
    try {
      inst.cls.validate();
    } catch (const Error& e) {
      throw ValidationError("class", "InvalidClass", e.what());
    }
  }
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return parse_instance(doc);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str());
}

json to_json(const Instance& inst) {
  const QuotientMap& q = *inst.quotient;
  const SampledBase& base = *inst.base;
  json doc;
  doc["quotient"] = {{"s", q.source_dim()},
                     {"m", q.target_dim()},
                     {"A", rows_json(q.matrix())},
                     {"norm", std::string(to_string(q.norm()))}};
  json bj = {{"points", rows_json(base.points.transpose())}};
  bj["metric"] = base.explicit_metric ? rows_json(base.metric) : json("induced");
  bj["weights"] = json::array();
  for (Eigen::Index i = 0; i < base.weights.size(); ++i) bj["weights"].push_back(base.weights(i));
  if (!base.labels.empty()) bj["labels"] = base.labels;
  doc["base"] = std::move(bj);
  doc["sections"] = json::object();
  for (const auto& [name, phi] : inst.sections) {
    doc["sections"][name] = {{"values", rows_json(phi.values().transpose())}, {"scale", phi.scale()}};
  }
  if (!inst.fields.empty()) {
    doc["fields"] = json::object();
    for (const auto& [name, f] : inst.fields) {
      doc["fields"][name] = {{"values", rows_json(f.values.transpose())}};
    }
  }
  doc["schedule"] = {{"radii", inst.schedule.radii()}};
  doc["class"] = {{"c", inst.cls.c}, {"boundRadius", inst.cls.bound_radius}};
  return doc;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << to_json(inst).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

Instance generate_instance(const GenerateSpec& spec) {
  const auto [s, m, n, seed] = spec;
  if (!(m >= 1 && m < s && s <= 8 && n >= 2 && n <= 64)) {
    throw Error(ErrorKind::BadDims, "need 1 <= m < s <= 8 and 2 <= n <= 64, got s=" +
                                        std::to_string(s) + " m=" + std::to_string(m) +
                                        " n=" + std::to_string(n));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto si = static_cast<Eigen::Index>(s);
  const auto mi = static_cast<Eigen::Index>(m);
  const auto ni = static_cast<Eigen::Index>(n);

  // Rescaled so the smallest singular value is 1: pinv then never grows |b|.
  Eigen::MatrixXd a(mi, si);
  for (;;) {
    for (Eigen::Index r = 0; r < mi; ++r)
      for (Eigen::Index c = 0; c < si; ++c) a(r, c) = gauss(rng);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
    if (sv(mi - 1) > 0.0 && sv(0) / sv(mi - 1) <= 1e3) {
      a /= sv(mi - 1);
      break;
    }
  }

  Instance inst;
  inst.quotient = std::make_shared<const QuotientMap>(build_quotient(a));
  const QuotientMap& q = *inst.quotient;

  Eigen::MatrixXd pts(mi, ni);
  for (Eigen::Index i = 0; i < ni; ++i)
    for (Eigen::Index r = 0; r < mi; ++r) pts(r, i) = unit(rng);
  Eigen::VectorXd weights(ni);
  for (Eigen::Index i = 0; i < ni; ++i) weights(i) = 0.5 + 0.5 * (unit(rng) + 1.0);
  inst.base = make_base(q, pts, weights);

  const auto k = static_cast<Eigen::Index>(q.fiber_dim());
  for (const char* name : {"phi", "psi"}) {
    Eigen::MatrixXd lift(k, ni);
    for (Eigen::Index i = 0; i < ni; ++i)
      for (Eigen::Index r = 0; r < k; ++r) lift(r, i) = unit(rng);
    inst.sections.emplace(name, lift_section(inst.quotient, inst.base, lift, 1.0));
  }
  inst.fields.emplace("phi_psi", hadamard_product(inst.sections.at("phi"), inst.sections.at("psi")));

  // Largest radius keeps every ball populated; the rest halve it.
  double reach = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) nearest = std::min(nearest, inst.base->dist(i, j));
    }
    reach = std::max(reach, nearest);
  }
  inst.schedule = ScaleSchedule({1.5 * reach, 0.75 * reach, 0.375 * reach});
  return inst;
}

}  // namespace ilslab
