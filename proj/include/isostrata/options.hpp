#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace isostrata {

/// Named numerical thresholds shared by the pipeline. Every field can be
/// overridden from the command line with `--tol NAME=VALUE`.
struct Options {
  // flow
  double flow_tol = 1e-9;
  int max_iter = 50000;
  double armijo = 1e-4;
  double contraction = 0.5;
  double null_rel = 1e-8;
  double null_floor = 1e-14;

  // isotropy and conjugacy
  double iso_tol = 1e-8;
  double conj_tol = 1e-6;
  int starts = 32;
  double subspace_tol = 1e-7;
  double transport_tol = 1e-5;

  // stratification
  double open_fraction = 0.02;
  double wall_tol = 1e-7;

  // slices
  double slice_tol = 1e-7;
  int slice_samples = 1000;

  std::uint64_t seed = 42;

  /// Sets a field by name; returns false for unknown names.
  bool set(const std::string& name, double value);

  /// All fields as name -> value, in a fixed order.
  std::map<std::string, double> as_map() const;
};

}  // namespace isostrata
