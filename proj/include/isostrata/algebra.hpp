#pragma once

// Matrix realizations of compatible groups G = K exp(p) acting linearly and
// orthogonally-compatibly on V = R^n. The Cartan involution is
// theta(X) = -X^T: k consists of skew-symmetric and p of symmetric matrices.

#include <string>
#include <vector>

#include "isostrata/linalg.hpp"

namespace isostrata {

/// Raw, unvalidated group data as read from a config or a built-in.
struct GroupDescription {
  std::string name;
  int dim_v = 0;
  std::vector<Mat> k_basis;
  std::vector<Mat> p_basis;
  /// Orthogonal representatives of the non-identity components of K.
  std::vector<Mat> component_reps;
  /// Elements of K normalizing the dense-stratum isotropy that are not
  /// reachable through the connected normalizer (Weyl-type elements).
  std::vector<Mat> normalizer_reps;
  /// Orthogonal maps outside K that normalize g. Strata related by them are
  /// identified, which models the homogeneous bundle G' x^G V over a larger
  /// ambient group G'.
  std::vector<Mat> ambient_reps;
  double structure_tol = 1e-10;
};

/// xi = sum_i k[i] k_basis[i] + sum_j p[j] p_basis[j] over the orthonormal
/// internal bases.
struct AlgebraElement {
  Vec k;
  Vec p;
};

/// An element of K (or of an extended coset list) written as
/// cosets[coset] * exp(sum_i coords[i] k_basis[i]).
struct KElement {
  Vec coords;
  int coset = 0;
  Mat matrix;
};

class CompatibleGroup {
 public:
  const std::string& name() const { return name_; }
  int dim_v() const { return dim_v_; }
  int dim_k() const { return dim_k_; }
  int dim_p() const { return dim_p_; }
  int dim_g() const { return dim_k_ + dim_p_; }
  double structure_tol() const { return structure_tol_; }
  /// Worst residual over all validated axioms.
  double structure_residual() const { return structure_residual_; }

  /// Orthonormal basis of g (trace inner product), k elements first.
  const std::vector<Mat>& basis() const { return basis_; }
  const Mat& k_basis(int i) const { return basis_[static_cast<size_t>(i)]; }
  const Mat& p_basis(int j) const { return basis_[static_cast<size_t>(dim_k_ + j)]; }

  const std::vector<Mat>& component_reps() const { return component_reps_; }
  const std::vector<Mat>& normalizer_reps() const { return normalizer_reps_; }
  const std::vector<Mat>& ambient_reps() const { return ambient_reps_; }

  /// Coordinates of a matrix projected onto g.
  Vec coordinates(const Mat& x) const;
  Mat realize(const Vec& g_coords) const;
  Mat realize(const AlgebraElement& a) const;
  AlgebraElement split(const Vec& g_coords) const;
  Vec join(const AlgebraElement& a) const;

  /// dim_v x dim_g matrix whose column j is basis[j] * v.
  Mat action_matrix(const Vec& v) const;

  /// Ad(g) = (X -> g X g^T) written in g-coordinates, for orthogonal g
  /// normalizing g.
  Mat ad_matrix(const Mat& orthogonal) const;

  /// ad(xi) restricted to g, in g-coordinates.
  Mat ad_coords(const Vec& g_coords) const;

  /// exp(sum coords_i k_i) acting on V.
  Mat k_exp(const Vec& k_coords) const;

  /// Ad(exp(sum coords_i k_i)) = exp(sum coords_i ad(k_i)) in g-coordinates.
  Mat ad_k_exp(const Vec& k_coords) const;

  /// Identity, then component representatives; with_ambient appends every
  /// ambient representative and its products with the component reps.
  std::vector<Mat> cosets(bool with_ambient = false) const;

  KElement make_k_element(const Vec& k_coords, int coset, const std::vector<Mat>& cosets) const;

  /// Bases of the symmetric operators on V (resp. on g) commuting with K,
  /// including the component representatives. Traces against these are
  /// K-conjugation invariants.
  const std::vector<Mat>& invariant_operators_v() const { return invariant_v_; }
  const std::vector<Mat>& invariant_operators_g() const { return invariant_g_; }

  /// The description this group was built from.
  const GroupDescription& description() const { return description_; }

 private:
  friend CompatibleGroup build_group(const GroupDescription& raw);

  std::string name_;
  int dim_v_ = 0;
  int dim_k_ = 0;
  int dim_p_ = 0;
  double structure_tol_ = 1e-10;
  double structure_residual_ = 0.0;
  std::vector<Mat> basis_;
  std::vector<Mat> ad_k_;
  std::vector<Mat> component_reps_;
  std::vector<Mat> normalizer_reps_;
  std::vector<Mat> ambient_reps_;
  std::vector<Mat> invariant_v_;
  std::vector<Mat> invariant_g_;
  GroupDescription description_;
};

/// Validates the compatible-group axioms and orthonormalizes the bases.
/// Throws StructureViolation or DimensionMismatch.
CompatibleGroup build_group(const GroupDescription& raw);

Mat bracket(const CompatibleGroup& g, const AlgebraElement& a, const AlgebraElement& b);

/// Fundamental vector field xi_V(v) = xi v.
Vec act(const CompatibleGroup& g, const AlgebraElement& a, const Vec& v);

/// exp(t xi) v.
Vec exp_action(const CompatibleGroup& g, const AlgebraElement& a, double t, const Vec& v);

}  // namespace isostrata
