#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "ilslab/cheeger.hpp"
#include "ilslab/functionals.hpp"
#include "ilslab/sections.hpp"

namespace ilslab {

/// A self-contained experiment: quotient, base, named sections and fields,
/// slope schedule and admissibility class.
struct Instance {
  QuotientPtr quotient;
  BasePtr base;
  std::map<std::string, Section> sections;
  std::map<std::string, PlainField> fields;
  ScaleSchedule schedule{{1.0}};
  AdmissibleClass cls;

  /// Section or plain field by name; throws InvalidArgument when missing.
  const Section& section(const std::string& name) const;
  PlainField field(const std::string& name) const;
};

/// Parses and validates a document. Failures are ValidationError with a
/// dotted field path, or ParseError for malformed JSON / wrong value types.
Instance parse_instance(const nlohmann::json& doc);
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::string& path);

/// Floats keep full round-trip precision. Sections are stored by value.
nlohmann::json to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

struct GenerateSpec {
  std::size_t s = 3;
  std::size_t m = 1;
  std::size_t n = 10;
  std::uint64_t seed = 1;
};

/// Random well-conditioned A, distinct base points and two lift sections
/// "phi" and "psi" inside the admissibility box. Throws BadDims unless
/// 1 <= m < s <= 8 and 2 <= n <= 64.
Instance generate_instance(const GenerateSpec& spec);

}  // namespace ilslab
