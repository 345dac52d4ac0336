#include "isostrata/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isostrata/errors.hpp"

namespace isostrata {

namespace {

std::string label(const char* list, size_t i) {
  return std::string(list) + "[" + std::to_string(i) + "]";
}

void check_shapes(const std::vector<Mat>& mats, int n, const char* list) {
  for (size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != n || mats[i].cols() != n)
      throw DimensionMismatch(label(list, i) + " is " + std::to_string(mats[i].rows()) + "x" +
                              std::to_string(mats[i].cols()) + ", expected " + std::to_string(n) +
                              "x" + std::to_string(n));
    if (!mats[i].allFinite()) throw DimensionMismatch(label(list, i) + " has non-finite entries");
  }
}

// Modified Gram-Schmidt with one reorthogonalization pass, in the trace inner
// product. Keeps the input order and signs.
std::vector<Mat> orthonormalize(const std::vector<Mat>& mats, double rel_tol, size_t* failed) {
  std::vector<Mat> out;
  for (size_t i = 0; i < mats.size(); ++i) {
    Mat x = mats[i];
    const double scale = x.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (const Mat& q : out) x -= linalg::trace_inner(x, q) * q;
    const double nrm = x.norm();
    if (scale == 0.0 || nrm <= rel_tol * scale) {
      if (failed) *failed = i;
      return {};
    }
    out.push_back(x / nrm);
  }
  return out;
}

double residual_off_span(const Mat& x, const std::vector<Mat>& span) {
  Mat r = x;
  for (const Mat& q : span) r -= linalg::trace_inner(x, q) * q;
  return r.norm();
}

// Symmetric matrices commuting with every generator and fixed by every
// conjugation in the given lists.
std::vector<Mat> symmetric_commutant(int n, const std::vector<Mat>& generators,
                                     const std::vector<Mat>& conjugations) {
  std::vector<Mat> sym;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Mat e = Mat::Zero(n, n);
      e(a, b) = 1.0;
      e(b, a) = 1.0;
      sym.push_back(e);
    }
  const auto blocks = generators.size() + conjugations.size();
  Mat lhs = Mat::Zero(static_cast<Eigen::Index>(blocks) * n * n, static_cast<Eigen::Index>(sym.size()));
  for (size_t s = 0; s < sym.size(); ++s) {
    Eigen::Index row = 0;
    auto put = [&](const Mat& m) {
      lhs.block(row, static_cast<Eigen::Index>(s), n * n, 1) = m.reshaped();
      row += n * n;
    };
    for (const Mat& z : generators) put(z * sym[s] - sym[s] * z);
    for (const Mat& c : conjugations) put(c * sym[s] * c.transpose() - sym[s]);
  }
  const Mat ker = linalg::null_space(lhs, 1e-9);
  std::vector<Mat> out;
  for (Eigen::Index j = 0; j < ker.cols(); ++j) {
    Mat m = Mat::Zero(n, n);
    for (size_t s = 0; s < sym.size(); ++s) m += ker(static_cast<Eigen::Index>(s), j) * sym[s];
    out.push_back(m);
  }
  return out;
}

}  // namespace

CompatibleGroup build_group(const GroupDescription& raw) {
  const int n = raw.dim_v;
  if (n <= 0) throw DimensionMismatch("dim_v must be positive, got " + std::to_string(n));
  check_shapes(raw.k_basis, n, "k_basis");
  check_shapes(raw.p_basis, n, "p_basis");
  check_shapes(raw.component_reps, n, "component_reps");
  check_shapes(raw.normalizer_reps, n, "normalizer_reps");
  check_shapes(raw.ambient_reps, n, "ambient_reps");

  const double tol = raw.structure_tol;
  double worst = 0.0;
  auto require = [&](double residual, double bound, const std::string& axiom, const std::string& where) {
    worst = std::max(worst, residual);
    if (residual > bound) throw StructureViolation(axiom, where, residual);
  };

  for (size_t i = 0; i < raw.k_basis.size(); ++i) {
    const Mat& x = raw.k_basis[i];
    require((x + x.transpose()).norm(), tol * std::max(1.0, x.norm()), "k element skew-symmetric",
            label("k_basis", i));
  }
  for (size_t i = 0; i < raw.p_basis.size(); ++i) {
    const Mat& x = raw.p_basis[i];
    require((x - x.transpose()).norm(), tol * std::max(1.0, x.norm()), "p element symmetric",
            label("p_basis", i));
  }

  // Skew and symmetric parts are trace-orthogonal, so independence of the union
  // reduces to independence within each list.
  constexpr double kIndependenceTol = 1e-9;
  size_t failed = 0;
  std::vector<Mat> k = orthonormalize(raw.k_basis, kIndependenceTol, &failed);
  if (k.size() != raw.k_basis.size())
    throw StructureViolation("linear independence", label("k_basis", failed), 0.0);
  std::vector<Mat> p = orthonormalize(raw.p_basis, kIndependenceTol, &failed);
  if (p.size() != raw.p_basis.size())
    throw StructureViolation("linear independence", label("p_basis", failed), 0.0);

  const double bracket_bound = tol * 2.0;
  for (size_t i = 0; i < k.size(); ++i)
    for (size_t j = i + 1; j < k.size(); ++j)
      require(residual_off_span(linalg::commutator(k[i], k[j]), k), bracket_bound, "[k,k] in k",
              label("k", i) + "," + label("k", j));
  for (size_t i = 0; i < k.size(); ++i)
    for (size_t j = 0; j < p.size(); ++j)
      require(residual_off_span(linalg::commutator(k[i], p[j]), p), bracket_bound, "[k,p] in p",
              label("k", i) + "," + label("p", j));
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      require(residual_off_span(linalg::commutator(p[i], p[j]), k), bracket_bound, "[p,p] in k",
              label("p", i) + "," + label("p", j));

  auto check_rep = [&](const std::vector<Mat>& reps, const char* list) {
    const Mat id = Mat::Identity(n, n);
    for (size_t r = 0; r < reps.size(); ++r) {
      const Mat& c = reps[r];
      require((c.transpose() * c - id).norm(), tol * (1.0 + n), "orthogonal representative",
              label(list, r));
      for (size_t i = 0; i < k.size(); ++i)
        require(residual_off_span(c * k[i] * c.transpose(), k), bracket_bound, "c k c^-1 in k",
                label(list, r) + "," + label("k", i));
      for (size_t j = 0; j < p.size(); ++j)
        require(residual_off_span(c * p[j] * c.transpose(), p), bracket_bound, "c p c^-1 in p",
                label(list, r) + "," + label("p", j));
    }
  };
  check_rep(raw.component_reps, "component_reps");
  check_rep(raw.normalizer_reps, "normalizer_reps");
  check_rep(raw.ambient_reps, "ambient_reps");

  CompatibleGroup g;
  g.name_ = raw.name;
  g.dim_v_ = n;
  g.dim_k_ = static_cast<int>(k.size());
  g.dim_p_ = static_cast<int>(p.size());
  g.structure_tol_ = tol;
  g.basis_ = k;
  g.basis_.insert(g.basis_.end(), p.begin(), p.end());
  g.component_reps_ = raw.component_reps;
  g.normalizer_reps_ = raw.normalizer_reps;
  g.ambient_reps_ = raw.ambient_reps;
  g.description_ = raw;
  g.ad_k_.reserve(k.size());
  for (const Mat& z : k) {
    Mat ad(g.dim_g(), g.dim_g());
    for (int j = 0; j < g.dim_g(); ++j) ad.col(j) = g.coordinates(linalg::commutator(z, g.basis_[j]));
    g.ad_k_.push_back(ad);
  }
  std::vector<Mat> k_only(g.basis_.begin(), g.basis_.begin() + g.dim_k_);
  g.invariant_v_ = symmetric_commutant(n, k_only, raw.component_reps);
  std::vector<Mat> ad_reps;
  for (const Mat& c : raw.component_reps) ad_reps.push_back(g.ad_matrix(c));
  if (g.dim_g() > 0) g.invariant_g_ = symmetric_commutant(g.dim_g(), g.ad_k_, ad_reps);
  g.structure_residual_ = worst;
  return g;
}

Vec CompatibleGroup::coordinates(const Mat& x) const {
  Vec c(dim_g());
  for (int i = 0; i < dim_g(); ++i) c(i) = linalg::trace_inner(x, basis_[static_cast<size_t>(i)]);
  return c;
}

Mat CompatibleGroup::realize(const Vec& g_coords) const {
  if (g_coords.size() != dim_g())
    throw DimensionMismatch("algebra coordinates have length " + std::to_string(g_coords.size()) +
                            ", expected " + std::to_string(dim_g()));
  Mat x = Mat::Zero(dim_v_, dim_v_);
  for (int i = 0; i < dim_g(); ++i) x += g_coords(i) * basis_[static_cast<size_t>(i)];
  return x;
}

Mat CompatibleGroup::realize(const AlgebraElement& a) const { return realize(join(a)); }

AlgebraElement CompatibleGroup::split(const Vec& g_coords) const {
  return {g_coords.head(dim_k_), g_coords.tail(dim_p_)};
}

Vec CompatibleGroup::join(const AlgebraElement& a) const {
  if (a.k.size() != dim_k_ || a.p.size() != dim_p_)
    throw DimensionMismatch("algebra element does not match basis sizes of " + name_);
  Vec c(dim_g());
  c << a.k, a.p;
  return c;
}

Mat CompatibleGroup::action_matrix(const Vec& v) const {
  if (v.size() != dim_v_)
    throw DimensionMismatch("vector has length " + std::to_string(v.size()) + ", expected " +
                            std::to_string(dim_v_));
  Mat a(dim_v_, dim_g());
  for (int j = 0; j < dim_g(); ++j) a.col(j) = basis_[static_cast<size_t>(j)] * v;
  return a;
}

Mat CompatibleGroup::ad_matrix(const Mat& orthogonal) const {
  Mat ad(dim_g(), dim_g());
  for (int j = 0; j < dim_g(); ++j)
    ad.col(j) = coordinates(orthogonal * basis_[static_cast<size_t>(j)] * orthogonal.transpose());
  return ad;
}

Mat CompatibleGroup::ad_coords(const Vec& g_coords) const {
  const Mat x = realize(g_coords);
  Mat ad(dim_g(), dim_g());
  for (int j = 0; j < dim_g(); ++j)
    ad.col(j) = coordinates(linalg::commutator(x, basis_[static_cast<size_t>(j)]));
  return ad;
}

Mat CompatibleGroup::k_exp(const Vec& k_coords) const {
  Mat x = Mat::Zero(dim_v_, dim_v_);
  for (int i = 0; i < dim_k_; ++i) x += k_coords(i) * basis_[static_cast<size_t>(i)];
  return linalg::expm(x);
}

Mat CompatibleGroup::ad_k_exp(const Vec& k_coords) const {
  Mat x = Mat::Zero(dim_g(), dim_g());
  for (int i = 0; i < dim_k_; ++i) x += k_coords(i) * ad_k_[static_cast<size_t>(i)];
  return linalg::expm(x);
}

std::vector<Mat> CompatibleGroup::cosets(bool with_ambient) const {
  std::vector<Mat> out;
  out.push_back(Mat::Identity(dim_v_, dim_v_));
  out.insert(out.end(), component_reps_.begin(), component_reps_.end());
  if (with_ambient) {
    const size_t base = out.size();
    for (const Mat& a : ambient_reps_)
      for (size_t c = 0; c < base; ++c) out.push_back(a * out[c]);
  }
  return out;
}

KElement CompatibleGroup::make_k_element(const Vec& k_coords, int coset,
                                         const std::vector<Mat>& cosets) const {
  return {k_coords, coset, cosets[static_cast<size_t>(coset)] * k_exp(k_coords)};
}

Mat bracket(const CompatibleGroup& g, const AlgebraElement& a, const AlgebraElement& b) {
  return linalg::commutator(g.realize(a), g.realize(b));
}

Vec act(const CompatibleGroup& g, const AlgebraElement& a, const Vec& v) {
  if (v.size() != g.dim_v()) throw DimensionMismatch("vector does not match dim_v of " + g.name());
  return g.realize(a) * v;
}

Vec exp_action(const CompatibleGroup& g, const AlgebraElement& a, double t, const Vec& v) {
  if (v.size() != g.dim_v()) throw DimensionMismatch("vector does not match dim_v of " + g.name());
  if (t == 0.0) return v;
  return linalg::expm(t * g.realize(a)) * v;
}

}  // namespace isostrata
