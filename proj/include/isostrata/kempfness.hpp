#pragma once

// The norm functional f(v) = |v|^2 / 2, the G-gradient map mu_p and descent
// along G-orbits to minimal vectors.

#include "isostrata/algebra.hpp"
#include "isostrata/options.hpp"

namespace isostrata {

enum class FlowStatus { Minimal, MaxIterations, Diverged };

const char* to_string(FlowStatus s);

struct FlowResult {
  Vec limit;
  double f_start = 0.0;
  double f_limit = 0.0;
  /// |mu_p(limit)|
  double residual = 0.0;
  int iterations = 0;
  FlowStatus status = FlowStatus::Minimal;
  /// The iterate shrank below the nullcone threshold before mu_p vanished
  /// relative to its size; the limit is numerically the origin.
  bool collapsed = false;
};

struct OrbitStatus {
  enum class Kind { Closed, NonClosed };
  Kind kind = Kind::Closed;
  bool in_nullcone = false;
  int isotropy_dim_start = 0;
  int isotropy_dim_limit = 0;
  FlowResult flow;
};

double value_f(const Vec& v);

/// (<xi_i v, v>)_i over the orthonormal p basis.
Vec gradient_map(const CompatibleGroup& g, const Vec& v);

/// Gradient map for an arbitrary list of symmetric matrices.
Vec gradient_map(const std::vector<Mat>& p_elements, const Vec& v);

/// Nullcone threshold: max(null_rel * f_start, null_floor).
double null_threshold(double f_start, const Options& opts);

/// Scale-aware minimality test: |mu_p(v)| <= flow_tol * min(1, |v|^2).
bool is_minimal(const CompatibleGroup& g, const Vec& v, const Options& opts);

/// Descends f along the orbit: v <- exp(-s sum mu_i xi_i / |v|^2) v with
/// Armijo backtracking. Throws NonFinite if an iterate overflows.
FlowResult flow_to_minimal(const CompatibleGroup& g, const Vec& v, const Options& opts);

/// Same flow for the group generated by the given symmetric matrices only
/// (used for subgroups such as normalizers).
FlowResult flow_to_minimal(const std::vector<Mat>& p_elements, const Vec& v, const Options& opts);

/// Closed / non-closed via the isotropy-dimension jump between v and its
/// flow limit. Throws FlowFailed when the flow does not reach Minimal.
OrbitStatus orbit_status(const CompatibleGroup& g, const Vec& v, const Options& opts);

}  // namespace isostrata
