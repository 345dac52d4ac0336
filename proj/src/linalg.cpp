#include "isostrata/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace isostrata::linalg {

namespace {

int count_above(const Vec& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double cutoff = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++r;
  return r;
}

}  // namespace

Mat null_space(const Mat& a, double rel_tol) {
  const auto n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const int r = count_above(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(n - r);
}

Mat null_space_abs(const Mat& a, double abs_tol) {
  const auto n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > abs_tol) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat column_space(const Mat& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  const int r = count_above(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(r);
}

int rank(const Mat& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  return count_above(svd.singularValues(), rel_tol);
}

double subspace_distance_sq(const Mat& q1, const Mat& q2) {
  // ||P1 - P2||^2 = d1 + d2 - 2 ||Q2^T Q1||^2 for orthonormal bases.
  const double d1 = static_cast<double>(q1.cols());
  const double d2 = static_cast<double>(q2.cols());
  double cross = 0.0;
  if (q1.cols() > 0 && q2.cols() > 0) cross = (q2.transpose() * q1).squaredNorm();
  return std::max(0.0, 0.5 * (d1 + d2 - 2.0 * cross));
}

double subspace_distance(const Mat& q1, const Mat& q2) {
  return std::sqrt(subspace_distance_sq(q1, q2));
}

Vec orthogonal_residual(const Mat& q, const Vec& x) {
  if (q.cols() == 0) return x;
  return x - q * (q.transpose() * x);
}

double trace_inner(const Mat& a, const Mat& b) { return a.cwiseProduct(b).sum(); }

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

Mat hstack(const Mat& a, const Mat& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Mat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Mat expm(const Mat& a) {
  if (a.size() == 0) return a;
  return a.exp();
}

}  // namespace isostrata::linalg
