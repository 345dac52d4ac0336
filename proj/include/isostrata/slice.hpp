#pragma once

// Linear slice models (G_x, W) at minimal vectors and splitting numbers.

#include <functional>
#include <optional>

#include "isostrata/isotropy.hpp"
#include "isostrata/strata.hpp"

namespace isostrata {

struct SliceModel {
  Vec base;
  Subalgebra isotropy;
  /// Orthonormal basis of g.x in V.
  Mat orbit_tangent;
  /// Orthonormal basis of a g_x-invariant complement W.
  Mat complement;
  /// Compressions B^T X B of the realized g_x basis (k part first).
  std::vector<Mat> slice_rep;
  /// Compressions of the component representatives of G that fix x and W.
  std::vector<Mat> slice_components;
  double commutant_residual = 0.0;
  /// max |P_W(h w) - h w| over the g_x basis and the W basis.
  double invariance_residual = 0.0;
};

/// Throws NotMinimal or NoInvariantComplement.
SliceModel build_slice_model(const CompatibleGroup& g, const Vec& x, const Options& opts);

/// The group (k_x, p_x) acting on W coordinates, with linearly dependent
/// compressions dropped.
CompatibleGroup slice_group(const SliceModel& model);

struct SplittingResult {
  int n = 0;
  /// Minimal vector the slice was taken at.
  Vec base;
  int slice_dim = 0;
  StratumCatalog evidence;
  /// Catalog ids counted toward n.
  std::vector<int> counted;
};

/// Predicate on points of V near the base; used to count only the open slice
/// strata lying in a chosen closure.
using SliceFilter = std::function<bool(const Vec&)>;

/// Number of open G_x-strata in W. Points that are not minimal are flowed to
/// the minimal vector of their fiber first. Throws FlowFailed or NotMinimal.
SplittingResult splitting_number(const CompatibleGroup& g, const Vec& x, const Options& opts,
                                 const SliceFilter& filter = nullptr);

}  // namespace isostrata
