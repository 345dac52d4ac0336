#include "isostrata/builtins.hpp"

#include <cmath>
#include <complex>

#include "isostrata/errors.hpp"

namespace isostrata {

namespace {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

Mat unit(int n, int i, int j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

std::vector<Mat> sl2_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat h(2, 2), x(2, 2), r(2, 2);
  h << s, 0, 0, -s;
  x << 0, s, s, 0;
  r << 0, -s, s, 0;
  return {h, x, r};
}

// Realified sl_2(C) basis: the real sl_2 basis followed by i times it. Every
// element is orthonormal for Re tr(A B^*).
std::vector<CMat> sl2c_basis() {
  std::vector<CMat> out;
  for (const Mat& b : sl2_basis()) out.push_back(b.cast<Cx>());
  for (const Mat& b : sl2_basis()) out.push_back(Cx(0, 1) * b.cast<Cx>());
  return out;
}

Vec sl2c_coords(const CMat& m) {
  const auto basis = sl2c_basis();
  Vec c(6);
  for (int j = 0; j < 6; ++j) c(j) = (m * basis[static_cast<size_t>(j)].adjoint()).trace().real();
  return c;
}

Mat sl2c_ad(const CMat& x) {
  const auto basis = sl2c_basis();
  Mat ad(6, 6);
  for (int j = 0; j < 6; ++j) {
    const CMat& b = basis[static_cast<size_t>(j)];
    ad.col(j) = sl2c_coords(x * b - b * x);
  }
  return ad;
}

Mat sl2c_conj(const CMat& g) {
  const auto basis = sl2c_basis();
  Mat ad(6, 6);
  for (int j = 0; j < 6; ++j) ad.col(j) = sl2c_coords(g * basis[static_cast<size_t>(j)] * g.inverse());
  return ad;
}

Mat sl2_ad(const Mat& x) {
  const auto basis = sl2_basis();
  Mat ad(3, 3);
  for (int j = 0; j < 3; ++j) {
    const Mat& b = basis[static_cast<size_t>(j)];
    ad.col(j) = sl2_coords(x * b - b * x);
  }
  return ad;
}

Mat sl2_conj(const Mat& g) {
  const auto basis = sl2_basis();
  Mat ad(3, 3);
  for (int j = 0; j < 3; ++j) ad.col(j) = sl2_coords(g * basis[static_cast<size_t>(j)] * g.inverse());
  return ad;
}

GroupDescription so11() {
  GroupDescription d;
  d.name = "so11";
  d.dim_v = 2;
  d.p_basis = {unit(2, 0, 1) + unit(2, 1, 0)};
  return d;
}

GroupDescription so22() {
  GroupDescription d;
  d.name = "so22";
  d.dim_v = 4;
  d.k_basis = {unit(4, 1, 0) - unit(4, 0, 1), unit(4, 3, 2) - unit(4, 2, 3)};
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < 4; ++j) d.p_basis.push_back(unit(4, i, j) + unit(4, j, i));
  // S(O(2) x O(2)): the second component reflects both blocks.
  d.component_reps = {Eigen::Vector4d(1, -1, 1, -1).asDiagonal().toDenseMatrix()};
  // Reflections of the fixed lines of the two open-stratum isotropy algebras.
  d.normalizer_reps = {Eigen::Vector4d(-1, 1, 1, -1).asDiagonal().toDenseMatrix(),
                       Eigen::Vector4d(1, -1, -1, 1).asDiagonal().toDenseMatrix()};
  Mat k0 = Mat::Zero(4, 4);
  k0.topRightCorner(2, 2) = -Mat::Identity(2, 2);
  k0.bottomLeftCorner(2, 2) = Mat::Identity(2, 2);
  d.ambient_reps = {k0};
  return d;
}

GroupDescription sl2r_adjoint() {
  GroupDescription d;
  d.name = "sl2r-adjoint";
  d.dim_v = 3;
  Mat rot(2, 2), h(2, 2), x(2, 2);
  rot << 0, -1, 1, 0;
  h << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  d.k_basis = {sl2_ad(rot)};
  d.p_basis = {sl2_ad(h), sl2_ad(x)};
  d.normalizer_reps = {sl2_conj(rot)};
  return d;
}

GroupDescription sl2c_adjoint() {
  GroupDescription d;
  d.name = "sl2c-adjoint";
  d.dim_v = 6;
  const Cx i(0, 1);
  CMat h(2, 2), x(2, 2), rot(2, 2);
  h << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  rot << 0, -1, 1, 0;
  // su(2) and i su(2)
  d.k_basis = {sl2c_ad(i * h), sl2c_ad(rot), sl2c_ad(i * x)};
  d.p_basis = {sl2c_ad(h), sl2c_ad(x), sl2c_ad(i * rot)};
  d.normalizer_reps = {sl2c_conj(rot)};
  return d;
}

GroupDescription so2_rotation() {
  GroupDescription d;
  d.name = "so2-rotation";
  d.dim_v = 2;
  d.k_basis = {unit(2, 1, 0) - unit(2, 0, 1)};
  return d;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"so11", "so22", "sl2r-adjoint", "sl2c-adjoint", "so2-rotation"};
}

GroupDescription builtin_description(const std::string& name) {
  if (name == "so11") return so11();
  if (name == "so22") return so22();
  if (name == "sl2r-adjoint") return sl2r_adjoint();
  if (name == "sl2c-adjoint") return sl2c_adjoint();
  if (name == "so2-rotation") return so2_rotation();
  throw Error("unknown builtin group '" + name + "'");
}

Vec sl2_coords(const Mat& m) {
  const auto basis = sl2_basis();
  Vec c(3);
  for (int j = 0; j < 3; ++j) c(j) = linalg::trace_inner(m, basis[static_cast<size_t>(j)]);
  return c;
}

Mat sl2_matrix(const Vec& coords) {
  const auto basis = sl2_basis();
  Mat m = Mat::Zero(2, 2);
  for (int j = 0; j < 3; ++j) m += coords(j) * basis[static_cast<size_t>(j)];
  return m;
}

}  // namespace isostrata
