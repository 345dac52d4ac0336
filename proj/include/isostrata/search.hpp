#pragma once

// Derivative-free multi-start minimization over K = (cosets) x exp(k).

#include <cstdint>
#include <functional>
#include <vector>

#include "isostrata/algebra.hpp"

namespace isostrata {

struct NelderMeadResult {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
};

/// Nelder-Mead simplex search; stops when the simplex diameter falls below
/// x_tol and the value spread below f_tol, or after max_evals evaluations.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, double step,
                             int max_evals, double x_tol = 1e-10, double f_tol = 1e-20);

struct KCandidate {
  Vec coords;
  int coset = 0;
  double value = 0.0;
  int start = 0;
};

struct KSearchOptions {
  int starts = 32;
  std::uint64_t seed = 42;
  /// With stop_early, the search returns as soon as a candidate reaches this value.
  double stop_below = 0.0;
  bool stop_early = true;
  int max_evals = 800;
};

/// Minimizes objective(k_coords, coset) from `starts` seeded starting points
/// per coset (the first start is the identity). Returns every local optimum
/// found, in search order.
std::vector<KCandidate> multi_start_k(const CompatibleGroup& g, int n_cosets,
                                      const std::function<double(const Vec&, int)>& objective,
                                      const KSearchOptions& opts);

/// Lowest-value candidate of a non-empty list.
const KCandidate& best_candidate(const std::vector<KCandidate>& candidates);

/// Deterministic 64-bit mix of a base seed with a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace isostrata
