#include "isostrata/isotropy.hpp"

#include <cmath>
#include <limits>

#include "isostrata/search.hpp"

namespace isostrata {

namespace {

// Cutoff for subspaces derived from already-computed (noisy) subspaces.
constexpr double kDerivedCutoff = 1e-6;
// Absolute tolerance for splitting an orthonormal basis along g = k + p.
constexpr double kSplitTol = 1e-6;
constexpr double kSignatureTol = 1e-4;

Mat orthonormal_columns(const Mat& m) {
  if (m.cols() == 0) return m;
  Eigen::HouseholderQR<Mat> qr(m);
  return qr.householderQ() * Mat::Identity(m.rows(), m.cols());
}

Mat part_without(const Mat& span, Eigen::Index other_first, Eigen::Index other_rows) {
  const Mat y = linalg::null_space_abs(span.middleRows(other_first, other_rows), kSplitTol);
  if (y.cols() == 0) return Mat(span.rows(), 0);
  Mat part = span * y;
  part.middleRows(other_first, other_rows).setZero();
  return orthonormal_columns(part);
}

}  // namespace

std::string to_string(const Fingerprint& fp) {
  return "(" + std::to_string(fp.dim_total) + "," + std::to_string(fp.dim_k) + "," +
         std::to_string(fp.dim_p) + "," + std::to_string(fp.fixed_dim) + "," +
         std::to_string(fp.orbit_dim) + ")";
}

Subalgebra theta_split(const CompatibleGroup& g, const Mat& span) {
  Subalgebra s;
  const int dk = g.dim_k();
  const int dp = g.dim_p();
  s.dim_total = static_cast<int>(span.cols());
  if (span.cols() == 0) {
    s.basis = s.k_part = s.p_part = Mat(g.dim_g(), 0);
    return s;
  }
  s.k_part = part_without(span, dk, dp);
  s.p_part = part_without(span, 0, dk);
  s.dim_k = static_cast<int>(s.k_part.cols());
  s.dim_p = static_cast<int>(s.p_part.cols());
  s.theta_stable = s.dim_k + s.dim_p == s.dim_total;
  s.basis = s.theta_stable ? linalg::hstack(s.k_part, s.p_part) : span;
  return s;
}

Subalgebra whole_algebra(const CompatibleGroup& g) {
  return theta_split(g, Mat::Identity(g.dim_g(), g.dim_g()));
}

Subalgebra zero_subalgebra(const CompatibleGroup& g) { return theta_split(g, Mat(g.dim_g(), 0)); }

Subalgebra isotropy_algebra(const CompatibleGroup& g, const Vec& v, const Options& opts) {
  if (g.dim_g() == 0) return zero_subalgebra(g);
  return theta_split(g, linalg::null_space(g.action_matrix(v), opts.iso_tol));
}

std::vector<Mat> realize_basis(const CompatibleGroup& g, const Mat& coords) {
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(coords.cols()));
  for (Eigen::Index j = 0; j < coords.cols(); ++j) out.push_back(g.realize(Vec(coords.col(j))));
  return out;
}

Mat fixed_space(const CompatibleGroup& g, const Subalgebra& h, const std::vector<Mat>& group_elements) {
  const int n = g.dim_v();
  const auto mats = realize_basis(g, h.basis);
  const auto blocks = static_cast<Eigen::Index>(mats.size() + group_elements.size());
  Mat stacked(blocks * n, n);
  Eigen::Index row = 0;
  for (const Mat& m : mats) {
    stacked.middleRows(row, n) = m;
    row += n;
  }
  for (const Mat& e : group_elements) {
    stacked.middleRows(row, n) = e - Mat::Identity(n, n);
    row += n;
  }
  return linalg::null_space(stacked, kDerivedCutoff);
}

Fingerprint fingerprint(const CompatibleGroup& g, const Subalgebra& h) {
  Fingerprint fp;
  fp.dim_total = h.dim_total;
  fp.dim_k = h.dim_k;
  fp.dim_p = h.dim_p;
  fp.fixed_dim = static_cast<int>(fixed_space(g, h).cols());
  fp.orbit_dim = g.dim_g() - h.dim_total;
  return fp;
}

Subalgebra conjugate(const CompatibleGroup& g, const Subalgebra& h, const Mat& ad) {
  (void)g;
  Subalgebra out = h;
  out.basis = ad * h.basis;
  out.k_part = ad * h.k_part;
  out.p_part = ad * h.p_part;
  return out;
}

double subalgebra_distance(const Subalgebra& a, const Subalgebra& b) {
  return linalg::subspace_distance(a.basis, b.basis);
}

double bracket_closure_residual(const CompatibleGroup& g, const Subalgebra& h) {
  const auto mats = realize_basis(g, h.basis);
  double worst = 0.0;
  for (size_t i = 0; i < mats.size(); ++i)
    for (size_t j = i + 1; j < mats.size(); ++j) {
      const Vec c = g.coordinates(linalg::commutator(mats[i], mats[j]));
      worst = std::max(worst, linalg::orthogonal_residual(h.basis, c).norm());
    }
  return worst;
}

Subalgebra normalizer_algebra(const CompatibleGroup& g, const Subalgebra& h, const Options& opts) {
  (void)opts;
  const int dg = g.dim_g();
  if (h.dim_total == 0 || dg == 0) return whole_algebra(g);
  const Mat off = Mat::Identity(dg, dg) - h.basis * h.basis.transpose();
  Mat stacked(h.dim_total * dg, dg);
  for (int j = 0; j < h.dim_total; ++j)
    stacked.middleRows(j * dg, dg) = off * g.ad_coords(Vec(h.basis.col(j)));
  return theta_split(g, linalg::null_space(stacked, kDerivedCutoff));
}

Vec invariant_signature(const CompatibleGroup& g, const Subalgebra& h) {
  const auto& sv = g.invariant_operators_v();
  const auto& sg = g.invariant_operators_g();
  Vec sig(static_cast<Eigen::Index>(sv.size() + sg.size()));
  const Mat fixed = fixed_space(g, h);
  Eigen::Index i = 0;
  for (const Mat& s : sv) sig(i++) = fixed.cols() ? (fixed.transpose() * s * fixed).trace() : 0.0;
  for (const Mat& d : sg) sig(i++) = h.basis.cols() ? (h.basis.transpose() * d * h.basis).trace() : 0.0;
  return sig;
}

ConjugacyResult k_conjugacy_search(const CompatibleGroup& g, const Subalgebra& h1, const Subalgebra& h2,
                                   const Options& opts, const ConjugacyOptions& copts) {
  ConjugacyResult out;
  const auto cosets = g.cosets(copts.with_ambient);
  out.witness = g.make_k_element(Vec::Zero(g.dim_k()), 0, cosets);

  const double direct = subalgebra_distance(h1, h2);
  if (direct < opts.conj_tol) {
    out.conjugate = true;
    out.distance = direct;
    out.decided_by = "identical";
    return out;
  }
  out.distance = std::numeric_limits<double>::quiet_NaN();
  if (!(fingerprint(g, h1) == fingerprint(g, h2))) {
    out.decided_by = "fingerprint";
    return out;
  }
  if (copts.use_signature && !copts.with_ambient &&
      (invariant_signature(g, h1) - invariant_signature(g, h2)).norm() > kSignatureTol) {
    out.decided_by = "signature";
    return out;
  }

  std::vector<Mat> ads;
  ads.reserve(cosets.size());
  for (const Mat& c : cosets) ads.push_back(g.ad_matrix(c));
  const Mat& q1 = h1.basis;
  const Mat& q2 = h2.basis;
  auto objective = [&](const Vec& x, int c) {
    const Mat moved = ads[static_cast<size_t>(c)] * (g.ad_k_exp(x) * q1);
    return linalg::subspace_distance_sq(moved, q2);
  };
  KSearchOptions kopts;
  kopts.starts = opts.starts;
  kopts.seed = copts.seed;
  kopts.stop_below = 0.25 * opts.conj_tol * opts.conj_tol;
  const auto found = multi_start_k(g, static_cast<int>(cosets.size()), objective, kopts);
  const KCandidate& best = best_candidate(found);
  out.distance = std::sqrt(best.value);
  out.witness = g.make_k_element(best.coords, best.coset, cosets);
  out.conjugate = out.distance < opts.conj_tol;
  out.decided_by = "search";
  return out;
}

}  // namespace isostrata
