#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "ilslab/instance.hpp"
#include "ilslab/report.hpp"

namespace ilslab {

enum class Suite { geometry, theorems, cheeger, all };

std::string_view to_string(Suite s);
Suite parse_suite(std::string_view text);

struct SuiteOptions {
  double c = 2.0;     // admissibility constant handed to the Leibniz checks
  double tol = 1e-9;  // certificate and representation tolerance
  std::uint64_t seed = 1;
  std::size_t restarts = 4;
  std::size_t stages = 3;
  std::size_t max_iters = 2000;
};

/// Runs the selected checks over every section (and every ordered pair of
/// sections) of the instance. Deterministic for fixed options. A check that
/// throws is rethrown as the same ErrorKind prefixed with its name.
SuiteReport run_suite(const Instance& inst, Suite suite, const SuiteOptions& options);

std::string_view library_version();

}  // namespace ilslab
