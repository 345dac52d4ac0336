#pragma once

// JSON group configs. Either a builtin reference
//   {"builtin": "so22", "tolerances": {...}}
// or explicit data
//   {"name": ..., "dim_v": n, "k_basis": [M, ...], "p_basis": [...],
//    "component_reps": [...], "normalizer_reps": [...], "ambient_reps": [...],
//    "tolerances": {"flow_tol": 1e-9, ...}}
// with every matrix written as a row-major nested array.

#include <string>

#include "isostrata/algebra.hpp"
#include "isostrata/options.hpp"

namespace isostrata {

struct RunConfig {
  GroupDescription description;
  Options options;
  /// Config path or "builtin:NAME".
  std::string source;
};

/// Throws ParseError (with field and, where known, line) or the errors of
/// build_group for invalid group data.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);
RunConfig builtin_config(const std::string& name);

}  // namespace isostrata
