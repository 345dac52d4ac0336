#include "isostrata/slice.hpp"

#include <cmath>

#include "isostrata/errors.hpp"
#include "isostrata/search.hpp"

namespace isostrata {

namespace {

// Compressions of an orthonormal g_x basis have norm at most one; anything
// below this is numerical noise from the base point.
constexpr double kCompressionCutoff = 1e-8;
constexpr double kSliceStructureTol = 1e-6;
constexpr std::uint64_t kSliceStream = 0x51ce;

// Solves Y T = I and [X, T Y] = 0 for every X in the least-squares sense;
// returns Y and the residual norm.
std::pair<Mat, double> solve_commutant(const Mat& t, const std::vector<Mat>& xs) {
  const Eigen::Index n = t.rows();
  const Eigen::Index r = t.cols();
  const Eigen::Index unknowns = r * n;
  const Eigen::Index rows = r * r + static_cast<Eigen::Index>(xs.size()) * n * n;
  Mat a = Mat::Zero(rows, unknowns);
  Vec b = Vec::Zero(rows);
  auto idx = [r](Eigen::Index i, Eigen::Index l) { return i + r * l; };

  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) {
      const Eigen::Index row = i + r * j;
      for (Eigen::Index l = 0; l < n; ++l) a(row, idx(i, l)) = t(l, j);
      b(row) = i == j ? 1.0 : 0.0;
    }
  Eigen::Index offset = r * r;
  for (const Mat& x : xs) {
    const Mat xt = x * t;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q) {
        const Eigen::Index row = offset + p + n * q;
        for (Eigen::Index i = 0; i < r; ++i) {
          a(row, idx(i, q)) += xt(p, i);
          for (Eigen::Index l = 0; l < n; ++l) a(row, idx(i, l)) -= t(p, i) * x(l, q);
        }
      }
    offset += n * n;
  }
  const Vec y = Eigen::CompleteOrthogonalDecomposition<Mat>(a).solve(b);
  const double residual = (a * y - b).norm();
  return {Eigen::Map<const Mat>(y.data(), r, n), residual};
}

// Orthonormal basis of span(mats) with tiny directions dropped.
std::vector<Mat> independent(const std::vector<Mat>& mats, Eigen::Index dim, bool symmetric) {
  std::vector<Mat> out;
  if (mats.empty() || dim == 0) return out;
  Mat flat(dim * dim, static_cast<Eigen::Index>(mats.size()));
  for (size_t j = 0; j < mats.size(); ++j)
    flat.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vec>(mats[j].data(), dim * dim);
  Eigen::JacobiSVD<Mat> svd(flat, Eigen::ComputeThinU);
  for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
    if (svd.singularValues()(j) <= kCompressionCutoff) break;
    Mat m = Eigen::Map<const Mat>(svd.matrixU().col(j).data(), dim, dim);
    m = symmetric ? Mat(0.5 * (m + m.transpose())) : Mat(0.5 * (m - m.transpose()));
    out.push_back(m);
  }
  return out;
}

}  // namespace

SliceModel build_slice_model(const CompatibleGroup& g, const Vec& x, const Options& opts) {
  if (x.size() != g.dim_v()) throw DimensionMismatch("base point has wrong dimension");
  if (!is_minimal(g, x, opts)) throw NotMinimal("slice base point is not a minimal vector");

  SliceModel m;
  m.base = x;
  m.isotropy = isotropy_algebra(g, x, opts);
  if (!m.isotropy.theta_stable) throw NotMinimal("isotropy at the base point is not theta-stable");
  const int n = g.dim_v();
  m.orbit_tangent = g.dim_g() > 0 ? linalg::column_space(g.action_matrix(x), opts.iso_tol) : Mat(n, 0);

  const auto gx = realize_basis(g, m.isotropy.basis);
  if (m.orbit_tangent.cols() == 0) {
    m.complement = Mat::Identity(n, n);
  } else {
    auto [y, residual] = solve_commutant(m.orbit_tangent, gx);
    m.commutant_residual = residual;
    if (residual > opts.slice_tol)
      throw NoInvariantComplement("commutant residual " + std::to_string(residual) + " exceeds slice_tol");
    m.complement = linalg::null_space(y, 1e-8);
  }

  const Mat& w = m.complement;
  const Mat off = Mat::Identity(n, n) - w * w.transpose();
  for (const Mat& h : gx) {
    m.invariance_residual = std::max(m.invariance_residual, (off * h * w).colwise().norm().maxCoeff());
    m.slice_rep.push_back(w.transpose() * h * w);
  }
  if (w.cols() == 0) m.invariance_residual = 0.0;

  const double fix_tol = 1e-8 * std::max(1.0, x.norm());
  for (const Mat& c : g.component_reps()) {
    if ((c * x - x).norm() > fix_tol) continue;
    if (w.cols() > 0 && (off * c * w).norm() > opts.slice_tol) continue;
    m.slice_components.push_back(w.transpose() * c * w);
  }
  return m;
}

CompatibleGroup slice_group(const SliceModel& model) {
  const Eigen::Index dim = model.complement.cols();
  const int dk = static_cast<int>(model.isotropy.dim_k);
  std::vector<Mat> ks(model.slice_rep.begin(), model.slice_rep.begin() + dk);
  std::vector<Mat> ps(model.slice_rep.begin() + dk, model.slice_rep.end());

  GroupDescription d;
  d.name = "slice";
  d.dim_v = static_cast<int>(dim);
  d.k_basis = independent(ks, dim, false);
  d.p_basis = independent(ps, dim, true);
  d.component_reps = model.slice_components;
  d.structure_tol = kSliceStructureTol;
  return build_group(d);
}

SplittingResult splitting_number(const CompatibleGroup& g, const Vec& x, const Options& opts,
                                 const SliceFilter& filter) {
  SplittingResult out;
  Vec base = x;
  if (!is_minimal(g, x, opts)) {
    const FlowResult flow = flow_to_minimal(g, x, opts);
    if (flow.status != FlowStatus::Minimal)
      throw FlowFailed(std::string("flow ended with status ") + to_string(flow.status));
    base = flow.limit;
    if (flow.collapsed || flow.f_limit <= null_threshold(flow.f_start, opts)) base = Vec::Zero(g.dim_v());
    if (!is_minimal(g, base, opts)) throw NotMinimal("flow limit is not minimal");
  }
  out.base = base;

  const SliceModel model = build_slice_model(g, base, opts);
  out.slice_dim = static_cast<int>(model.complement.cols());
  if (out.slice_dim == 0) {
    out.n = 1;
    return out;
  }

  const CompatibleGroup sub = slice_group(model);
  Options sub_opts = opts;
  sub_opts.seed = derive_seed(opts.seed, kSliceStream);
  const auto samples = sample_sphere(out.slice_dim, opts.slice_samples, sub_opts.seed);
  out.evidence = build_catalog(sub, samples, sub_opts);

  const double eps = base.norm() > 0.0 ? 1e-3 * base.norm() : 1.0;
  for (const StratumLabel& e : out.evidence.entries) {
    if (!e.is_open) continue;
    if (filter) {
      const SampleRecord* witness = nullptr;
      for (const SampleRecord& s : out.evidence.samples)
        if (s.label == e.id) {
          witness = &s;
          break;
        }
      if (witness == nullptr || !filter(Vec(base + eps * (model.complement * witness->coords)))) continue;
    }
    out.counted.push_back(e.id);
  }
  out.n = static_cast<int>(out.counted.size());
  return out;
}

}  // namespace isostrata
