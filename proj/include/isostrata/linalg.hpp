#pragma once

// Small dense linear-algebra helpers shared by every module. All subspaces are
// passed around as matrices with orthonormal columns.

#include <Eigen/Dense>

namespace isostrata {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace linalg {

/// Orthonormal basis of ker(A). Singular values at or below rel_tol * sigma_max
/// count as zero; a zero matrix has the whole domain as kernel.
Mat null_space(const Mat& a, double rel_tol);

/// Orthonormal basis of ker(A) with an absolute singular-value cutoff; used
/// for matrices with orthonormal columns where a relative cutoff is meaningless.
Mat null_space_abs(const Mat& a, double abs_tol);

/// Orthonormal basis of the column space of A, same cutoff rule as null_space.
Mat column_space(const Mat& a, double rel_tol);

/// Numerical rank with a relative singular-value cutoff.
int rank(const Mat& a, double rel_tol);

/// Chordal distance ||P1 - P2||_F / sqrt(2) between two subspaces given by
/// orthonormal bases of the same ambient dimension.
double subspace_distance(const Mat& q1, const Mat& q2);

/// Same as subspace_distance but squared; cheaper and smooth.
double subspace_distance_sq(const Mat& q1, const Mat& q2);

/// Component of x orthogonal to span(q), q orthonormal.
Vec orthogonal_residual(const Mat& q, const Vec& x);

/// Frobenius inner product tr(A B^T).
double trace_inner(const Mat& a, const Mat& b);

Mat commutator(const Mat& a, const Mat& b);

/// Concatenates the columns of a and b.
Mat hstack(const Mat& a, const Mat& b);

/// Matrix exponential (scaling and squaring with a Pade core).
Mat expm(const Mat& a);

}  // namespace linalg
}  // namespace isostrata
