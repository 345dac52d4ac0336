#include "isostrata/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "isostrata/errors.hpp"
#include "isostrata/search.hpp"

namespace isostrata {

namespace {

constexpr double kNormalizesTol = 1e-6;
constexpr double kSignatureTol = 1e-4;
// Points closer than this (relative to |m|) after an N_K(h) move are one cluster.
constexpr double kClusterTol = 1e-3;
constexpr int kClusterStarts = 4;
constexpr double kOriginTol = 1e-12;

constexpr std::uint64_t kXhStream = 0x7801;
constexpr std::uint64_t kMpStream = 0x3a01;
constexpr std::uint64_t kFiberPointStream = 0x3b01;
constexpr std::uint64_t kFiberSearchStream = 0xf1b0;
constexpr std::uint64_t kSurjectStream = 0x5e00;
constexpr std::uint64_t kCanonicalStream = 0xca01;

bool normalizes(const CompatibleGroup& g, const Subalgebra& h, const Mat& element) {
  return subalgebra_distance(conjugate(g, h, g.ad_matrix(element)), h) < kNormalizesTol;
}

void add_unique(std::vector<Mat>& list, const Mat& m) {
  for (const Mat& e : list)
    if ((e - m).norm() < 1e-9) return;
  list.push_back(m);
}

Mat exp_sum(const std::vector<Mat>& basis, const Vec& y, int dim) {
  Mat x = Mat::Zero(dim, dim);
  for (size_t i = 0; i < basis.size(); ++i) x += y(static_cast<Eigen::Index>(i)) * basis[i];
  return linalg::expm(x);
}

// Is p in the N_K(h)-orbit of q (connected normalizer times the supplied
// discrete representatives)?
bool same_normalizer_orbit(const Sheet& sheet, const Vec& q, const Vec& p, double scale, std::uint64_t seed) {
  const double tol = kClusterTol * scale;
  const int dim = static_cast<int>(q.size());
  const auto dk = static_cast<Eigen::Index>(sheet.nk.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (const Mat& c : sheet.normalizer_cosets) {
    if ((c * q - p).norm() <= tol) return true;
    if (dk == 0) continue;
    auto f = [&](const Vec& y) { return (c * exp_sum(sheet.nk, y, dim) * q - p).squaredNorm() / (scale * scale); };
    for (int s = 0; s < kClusterStarts; ++s) {
      Vec y0 = Vec::Zero(dk);
      if (s > 0)
        for (Eigen::Index i = 0; i < dk; ++i) y0(i) = angle(rng);
      if (std::sqrt(nelder_mead(f, y0, 0.5, 400).value) * scale <= tol) return true;
    }
  }
  return false;
}

// A K-conjugate of h normalized by as many of the supplied discrete
// normalizer representatives as possible (all of them, when reachable).
Subalgebra canonical_representative(const CompatibleGroup& g, const Subalgebra& h, const Options& opts) {
  std::vector<Mat> rep_ads;
  bool all = true;
  for (const Mat& r : g.normalizer_reps()) {
    rep_ads.push_back(g.ad_matrix(r));
    all = all && normalizes(g, h, r);
  }
  if (rep_ads.empty() || all) return h;

  const auto cosets = g.cosets();
  std::vector<Mat> ads;
  for (const Mat& c : cosets) ads.push_back(g.ad_matrix(c));
  auto objective = [&](const Vec& x, int c) {
    const Mat moved = ads[static_cast<size_t>(c)] * (g.ad_k_exp(x) * h.basis);
    double total = 0.0;
    for (const Mat& ra : rep_ads) total += linalg::subspace_distance_sq(ra * moved, moved);
    return total;
  };
  KSearchOptions kopts;
  kopts.starts = opts.starts;
  kopts.seed = derive_seed(opts.seed, kCanonicalStream);
  kopts.stop_below = 0.25 * opts.conj_tol * opts.conj_tol;
  const KCandidate best = best_candidate(multi_start_k(g, static_cast<int>(cosets.size()), objective, kopts));
  if (std::sqrt(best.value) >= opts.conj_tol) return h;
  return conjugate(g, h, ads[static_cast<size_t>(best.coset)] * g.ad_k_exp(best.coords));
}

std::string histogram_text(const std::map<std::string, int>& h) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : h) {
    os << (first ? "" : ", ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

}  // namespace

const char* to_string(RestrictionContext::Mode m) {
  switch (m) {
    case RestrictionContext::Mode::Dense: return "dense";
    case RestrictionContext::Mode::Ambient: return "ambient";
    case RestrictionContext::Mode::Closure: return "closure";
  }
  return "?";
}

Sheet make_sheet(const CompatibleGroup& g, const Subalgebra& h, int stratum_id, const Options& opts) {
  Sheet s;
  s.stratum_id = stratum_id;
  s.h = canonical_representative(g, h, opts);
  s.fingerprint = fingerprint(g, s.h);
  s.fixed = fixed_space(g, s.h);
  s.normalizer = normalizer_algebra(g, s.h, opts);
  s.np = realize_basis(g, s.normalizer.p_part);
  s.nk = realize_basis(g, s.normalizer.k_part);

  std::vector<Mat> candidates{Mat::Identity(g.dim_v(), g.dim_v())};
  for (const Mat& r : g.normalizer_reps()) add_unique(candidates, r);
  for (const Mat& c : g.component_reps()) {
    add_unique(candidates, c);
    for (const Mat& r : g.normalizer_reps()) add_unique(candidates, c * r);
  }
  for (const Mat& c : candidates)
    if (normalizes(g, s.h, c)) s.normalizer_cosets.push_back(c);
  return s;
}

RestrictionContext prepare_restriction(const CompatibleGroup& g, const StratumCatalog& catalog,
                                       const Options& opts, std::optional<int> stratum, bool allow_closure) {
  RestrictionContext ctx;
  std::vector<const StratumLabel*> opens;
  for (const StratumLabel& e : catalog.entries)
    if (e.is_open) opens.push_back(&e);
  if (opens.empty()) throw NoDenseStratum("the catalog has no open stratum");

  if (opens.size() == 1) {
    ctx.mode = RestrictionContext::Mode::Dense;
    ctx.allowed = {opens.front()->id};
    ctx.sheets.push_back(make_sheet(g, opens.front()->rep_subalgebra, opens.front()->id, opts));
    return ctx;
  }

  if (!g.ambient_reps().empty()) {
    bool identified = true;
    for (size_t i = 1; i < opens.size() && identified; ++i) {
      ConjugacyOptions copts;
      copts.with_ambient = true;
      copts.seed = derive_seed(opts.seed, i);
      identified = k_conjugacy_search(g, opens.front()->rep_subalgebra, opens[i]->rep_subalgebra, opts, copts)
                       .conjugate;
    }
    if (identified) {
      ctx.mode = RestrictionContext::Mode::Ambient;
      for (const StratumLabel* e : opens) {
        ctx.allowed.push_back(e->id);
        ctx.sheets.push_back(make_sheet(g, e->rep_subalgebra, e->id, opts));
      }
      return ctx;
    }
  }

  if (!allow_closure) throw NoDenseStratum(std::to_string(opens.size()) + " open strata and no ambient identification");

  const StratumLabel* chosen = nullptr;
  if (stratum) {
    for (const StratumLabel* e : opens)
      if (e->id == *stratum) chosen = e;
    if (chosen == nullptr) throw NoDenseStratum("stratum " + std::to_string(*stratum) + " is not an open stratum");
  } else {
    for (const StratumLabel* e : opens)
      if (chosen == nullptr || catalog.fractions[static_cast<size_t>(e->id)] >
                                   catalog.fractions[static_cast<size_t>(chosen->id)])
        chosen = e;
  }
  ctx.mode = RestrictionContext::Mode::Closure;
  ctx.allowed = {chosen->id};
  ctx.sheets.push_back(make_sheet(g, chosen->rep_subalgebra, chosen->id, opts));
  return ctx;
}

Vec restricted_gradient(const CompatibleGroup& g, const Subalgebra& h, const Vec& v, const Options& opts) {
  const Subalgebra n = normalizer_algebra(g, h, opts);
  return gradient_map(realize_basis(g, n.p_part), v);
}

XhSample sample_xh(const CompatibleGroup& g, const Subalgebra& h, int count, std::uint64_t seed,
                   const Options& opts) {
  XhSample out;
  const Mat fixed = fixed_space(g, h);
  std::vector<Vec> candidates;
  if (fixed.cols() == 0)
    candidates.push_back(Vec::Zero(g.dim_v()));
  else
    for (const Vec& c : sample_gaussian(static_cast<int>(fixed.cols()), count, seed)) candidates.push_back(fixed * c);

  for (const Vec& x : candidates) {
    ++out.attempts;
    const Subalgebra iso = isotropy_algebra(g, x, opts);
    if (iso.dim_total != h.dim_total || subalgebra_distance(iso, h) >= opts.subspace_tol) {
      ++out.rejections["isotropy_mismatch"];
      continue;
    }
    try {
      if (orbit_status(g, x, opts).kind != OrbitStatus::Kind::Closed) {
        ++out.rejections["not_closed"];
        continue;
      }
    } catch (const FlowFailed&) {
      ++out.rejections["flow_failed"];
      continue;
    } catch (const NonFinite&) {
      ++out.rejections["flow_failed"];
      continue;
    }
    out.points.push_back(x);
  }
  if (out.points.empty()) throw EmptyResult("no sample of the fixed space has isotropy h: " + histogram_text(out.rejections));
  return out;
}

ZeroFiberRecord verify_zero_fiber_lemma(const CompatibleGroup& g, const Sheet& sheet,
                                        const std::vector<Vec>& samples, const Options& opts) {
  ZeroFiberRecord r;
  for (const Vec& x : samples) {
    ++r.checked;
    const double scale = std::max(1.0, x.squaredNorm());
    const double mnp = gradient_map(sheet.np, x).norm();
    const double mp = gradient_map(g, x).norm();
    const bool in_mnp = mnp <= opts.flow_tol * scale;
    const bool in_mp = mp <= opts.flow_tol * scale;
    if (in_mnp) {
      ++r.in_mnp;
      r.max_mp_given_mnp = std::max(r.max_mp_given_mnp, mp);
      if (mp > 10.0 * opts.flow_tol * scale) ++r.forward_failures;
    }
    if (in_mp) {
      ++r.in_mp;
      r.max_mnp_given_mp = std::max(r.max_mnp_given_mp, mnp);
      if (mnp > 10.0 * opts.flow_tol * scale) ++r.backward_failures;
    }
  }
  return r;
}

SurjectivityRecord verify_surjectivity(const CompatibleGroup& g, const RestrictionContext& ctx,
                                       const std::vector<Vec>& mp_samples, const Options& opts) {
  SurjectivityRecord out;
  const auto cosets = g.cosets();
  std::vector<Mat> ads;
  for (const Mat& c : cosets) ads.push_back(g.ad_matrix(c));
  std::vector<Vec> sheet_sigs;
  for (const Sheet& s : ctx.sheets) sheet_sigs.push_back(invariant_signature(g, s.h));

  for (size_t i = 0; i < mp_samples.size(); ++i) {
    const Vec& m = mp_samples[i];
    TransportRecord rec;
    rec.point = m;
    rec.witness = g.make_k_element(Vec::Zero(g.dim_k()), 0, cosets);
    const Subalgebra gm = isotropy_algebra(g, m, opts);
    const Fingerprint fp = fingerprint(g, gm);
    const Vec sig = invariant_signature(g, gm);
    const double m2 = std::max(m.squaredNorm(), 1e-300);

    bool tried = false;
    double best_residual = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < ctx.sheets.size() && !rec.success; ++a) {
      const Sheet& sheet = ctx.sheets[a];
      if (!(sheet.fingerprint == fp) || (sig - sheet_sigs[a]).norm() > kSignatureTol) continue;
      tried = true;
      auto objective = [&](const Vec& x, int c) {
        const Mat k = cosets[static_cast<size_t>(c)] * g.k_exp(x);
        const Mat moved = ads[static_cast<size_t>(c)] * (g.ad_k_exp(x) * gm.basis);
        const double d2 = linalg::subspace_distance_sq(moved, sheet.h.basis);
        const double mu = gradient_map(sheet.np, Vec(k * m)).norm() / m2;
        return d2 + mu * mu;
      };
      KSearchOptions kopts;
      kopts.starts = opts.starts;
      kopts.seed = derive_seed(opts.seed, kSurjectStream + i);
      kopts.stop_below = 1e-4 * opts.transport_tol * opts.transport_tol;
      const KCandidate best = best_candidate(multi_start_k(g, static_cast<int>(cosets.size()), objective, kopts));

      const KElement k = g.make_k_element(best.coords, best.coset, cosets);
      const Vec km = k.matrix * m;
      const double dist = std::sqrt(linalg::subspace_distance_sq(g.ad_matrix(k.matrix) * gm.basis, sheet.h.basis));
      const double mu = gradient_map(sheet.np, km).norm() / m2;
      const double residual = std::max(dist, mu);
      if (residual < best_residual) {
        best_residual = residual;
        rec.witness = k;
        rec.sheet = static_cast<int>(a);
        rec.norm_error = std::abs(km.norm() - m.norm());
      }
      rec.success = residual <= opts.transport_tol;
    }

    if (!tried) {
      rec.skipped = true;
      ++out.skipped;
    } else {
      rec.residual = best_residual;
      if (rec.success) {
        ++out.successes;
        out.max_residual = std::max(out.max_residual, best_residual);
      } else {
        ++out.failures;
      }
    }
    out.points.push_back(rec);
  }
  return out;
}

FiberRecord phi_fiber_count(const CompatibleGroup& g, const RestrictionContext& ctx, const StratumCatalog& catalog,
                            const Vec& m, const Options& opts) {
  if (!is_minimal(g, m, opts)) throw NotMinimal("fiber point is not a minimal vector");
  FiberRecord out;
  out.point = m;
  const double scale = m.norm();
  const auto cosets = g.cosets();
  const int late = opts.starts - std::max(1, opts.starts / 4);

  for (size_t a = 0; a < ctx.sheets.size(); ++a) {
    const Sheet& sheet = ctx.sheets[a];
    if (scale <= kOriginTol) {
      out.clusters.emplace_back(static_cast<int>(a), Vec::Zero(g.dim_v()));
      continue;
    }
    const Mat off = Mat::Identity(g.dim_v(), g.dim_v()) - sheet.fixed * sheet.fixed.transpose();
    auto objective = [&](const Vec& x, int c) {
      const Vec km = cosets[static_cast<size_t>(c)] * g.k_exp(x) * m;
      const double mu = gradient_map(sheet.np, km).norm() / scale;
      return ((off * km).squaredNorm() + mu * mu) / (scale * scale);
    };
    KSearchOptions kopts;
    kopts.starts = opts.starts;
    kopts.seed = derive_seed(opts.seed, kFiberSearchStream + a);
    kopts.stop_early = false;
    const auto found = multi_start_k(g, static_cast<int>(cosets.size()), objective, kopts);

    std::vector<Vec> reps;
    for (const KCandidate& c : found) {
      if (std::sqrt(c.value) > opts.transport_tol) continue;
      const Vec p = cosets[static_cast<size_t>(c.coset)] * g.k_exp(c.coords) * m;
      bool known = false;
      for (size_t r = 0; r < reps.size() && !known; ++r)
        known = same_normalizer_orbit(sheet, reps[r], p, scale, derive_seed(opts.seed, r));
      if (known) continue;
      reps.push_back(p);
      out.clusters.emplace_back(static_cast<int>(a), p);
      if (c.start >= late && opts.starts > 1) out.budget_exhausted = true;
    }
  }
  out.count = static_cast<int>(out.clusters.size());

  SliceFilter filter;
  if (ctx.mode == RestrictionContext::Mode::Closure) {
    filter = [&](const Vec& y) {
      try {
        const PointClass pc = classify_point(g, y, opts);
        if (pc.boundary_ambiguous) return false;
        const int id = match_label(g, catalog, pc.isotropy, opts, opts.seed);
        return std::find(ctx.allowed.begin(), ctx.allowed.end(), id) != ctx.allowed.end();
      } catch (const Error&) {
        return false;
      }
    };
  }
  out.splitting = splitting_number(g, m, opts, filter).n;
  out.not_open = out.count > 1;
  out.agrees = out.count == out.splitting;
  return out;
}

std::vector<Vec> minimal_vectors_in(const CompatibleGroup& g, const StratumCatalog& catalog,
                                    const std::vector<int>& ids, int count, std::uint64_t seed,
                                    const Options& opts) {
  std::vector<Vec> out;
  const int max_attempts = 50 * std::max(count, 1);
  const auto starts = sample_gaussian(g.dim_v(), max_attempts, seed);
  for (int i = 0; i < max_attempts && static_cast<int>(out.size()) < count; ++i) {
    PointClass pc;
    try {
      pc = classify_point(g, starts[static_cast<size_t>(i)], opts);
    } catch (const Error&) {
      continue;
    }
    if (pc.boundary_ambiguous || pc.in_nullcone) continue;
    const int id = match_label(g, catalog, pc.isotropy, opts, derive_seed(seed, static_cast<std::uint64_t>(i)));
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    out.push_back(pc.flow.limit);
  }
  return out;
}

RestrictionReport run_restriction(const CompatibleGroup& g, const StratumCatalog& catalog, const Options& opts,
                                  const RestrictionParams& params) {
  RestrictionReport rep;
  rep.context = prepare_restriction(g, catalog, opts, params.stratum);
  const auto& sheets = rep.context.sheets;
  const int per_sheet = std::max(1, params.xh_count / static_cast<int>(sheets.size()));

  int attempts = 0;
  bool zero_fiber_ok = true;
  for (size_t a = 0; a < sheets.size(); ++a) {
    const Sheet& sheet = sheets[a];
    const int want = per_sheet + (a == 0 ? params.xh_count - per_sheet * static_cast<int>(sheets.size()) : 0);
    const XhSample xs = sample_xh(g, sheet.h, std::max(want, 1), derive_seed(opts.seed, kXhStream + a), opts);
    attempts += xs.attempts;
    for (const auto& [k, v] : xs.rejections) rep.xh_rejections[k] += v;

    for (const Vec& x : xs.points) {
      rep.xh_samples.push_back(x);
      const Vec limit = sheet.np.empty() ? x : flow_to_minimal(sheet.np, x, opts).limit;
      rep.mnp_points.push_back(limit);
      rep.mnp_max_gradient = std::max(rep.mnp_max_gradient, gradient_map(sheet.np, limit).norm());
      rep.mnp_max_isotropy_distance = std::max(
          rep.mnp_max_isotropy_distance, subalgebra_distance(isotropy_algebra(g, limit, opts), sheet.h));
    }

    const ZeroFiberRecord z = verify_zero_fiber_lemma(g, sheet, xs.points, opts);
    rep.zero_fiber.checked += z.checked;
    rep.zero_fiber.in_mnp += z.in_mnp;
    rep.zero_fiber.in_mp += z.in_mp;
    rep.zero_fiber.forward_failures += z.forward_failures;
    rep.zero_fiber.backward_failures += z.backward_failures;
    rep.zero_fiber.max_mp_given_mnp = std::max(rep.zero_fiber.max_mp_given_mnp, z.max_mp_given_mnp);
    rep.zero_fiber.max_mnp_given_mp = std::max(rep.zero_fiber.max_mnp_given_mp, z.max_mnp_given_mp);
    zero_fiber_ok = zero_fiber_ok && z.passed();
  }
  rep.xh_accepted_fraction = attempts > 0 ? static_cast<double>(rep.xh_samples.size()) / attempts : 0.0;

  const auto mp = minimal_vectors_in(g, catalog, rep.context.allowed, params.mp_count,
                                     derive_seed(opts.seed, kMpStream), opts);
  rep.surjectivity = verify_surjectivity(g, rep.context, mp, opts);

  std::vector<Vec> fiber_points;
  if (params.include_origin) fiber_points.push_back(Vec::Zero(g.dim_v()));
  for (const Vec& v : minimal_vectors_in(g, catalog, rep.context.allowed, params.fiber_count,
                                         derive_seed(opts.seed, kFiberPointStream), opts))
    fiber_points.push_back(v);
  bool fibers_ok = true;
  for (const Vec& m : fiber_points) {
    rep.fibers.push_back(phi_fiber_count(g, rep.context, catalog, m, opts));
    fibers_ok = fibers_ok && rep.fibers.back().agrees;
  }

  double mnp_scale = 1.0;
  for (const Vec& p : rep.mnp_points) mnp_scale = std::max(mnp_scale, p.squaredNorm());
  rep.mnp_passed = rep.mnp_max_gradient <= opts.flow_tol * mnp_scale &&
                   rep.mnp_max_isotropy_distance < opts.subspace_tol;
  rep.passed = zero_fiber_ok && rep.surjectivity.passed() && fibers_ok && rep.mnp_passed;
  return rep;
}

}  // namespace isostrata
