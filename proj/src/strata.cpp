#include "isostrata/strata.hpp"

#include <algorithm>
#include <random>

#include "isostrata/errors.hpp"
#include "isostrata/search.hpp"

namespace isostrata {

const char* to_string(SampleFlag f) {
  switch (f) {
    case SampleFlag::Ok: return "ok";
    case SampleFlag::Boundary: return "boundary";
    case SampleFlag::Failed: return "failed";
  }
  return "?";
}

PointClass classify_point(const CompatibleGroup& g, const Vec& v, const Options& opts) {
  PointClass out;
  out.flow = flow_to_minimal(g, v, opts);
  if (out.flow.status != FlowStatus::Minimal)
    throw FlowFailed(std::string("flow ended with status ") + to_string(out.flow.status));
  out.in_nullcone = out.flow.f_limit <= null_threshold(out.flow.f_start, opts);
  out.boundary_ambiguous = !out.in_nullcone && out.flow.f_limit <= opts.wall_tol * out.flow.f_start;
  out.isotropy = out.in_nullcone ? whole_algebra(g) : isotropy_algebra(g, out.flow.limit, opts);
  out.fingerprint = fingerprint(g, out.isotropy);
  return out;
}

int match_label(const CompatibleGroup& g, const StratumCatalog& catalog, const Subalgebra& h,
                const Options& opts, std::uint64_t seed) {
  const Fingerprint fp = fingerprint(g, h);
  for (const StratumLabel& e : catalog.entries) {
    if (!(e.fingerprint == fp)) continue;
    ConjugacyOptions copts;
    copts.seed = seed;
    if (k_conjugacy_search(g, e.rep_subalgebra, h, opts, copts).conjugate) return e.id;
  }
  return -1;
}

StratumCatalog build_catalog(const CompatibleGroup& g, const std::vector<Vec>& samples, const Options& opts) {
  StratumCatalog cat;
  cat.seed = opts.seed;
  cat.sample_count = static_cast<int>(samples.size());
  cat.samples.reserve(samples.size());

  for (size_t i = 0; i < samples.size(); ++i) {
    SampleRecord rec;
    rec.coords = samples[i];
    PointClass pc;
    try {
      pc = classify_point(g, samples[i], opts);
    } catch (const FlowFailed&) {
      rec.flag = SampleFlag::Failed;
    } catch (const NonFinite&) {
      rec.flag = SampleFlag::Failed;
    }
    if (rec.flag == SampleFlag::Failed) {
      ++cat.failed;
      cat.samples.push_back(rec);
      continue;
    }
    rec.f_limit = pc.flow.f_limit;
    rec.residual = pc.flow.residual;
    if (pc.boundary_ambiguous) {
      rec.flag = SampleFlag::Boundary;
      ++cat.boundary;
      cat.samples.push_back(rec);
      continue;
    }

    int id = match_label(g, cat, pc.isotropy, opts, derive_seed(opts.seed, i));
    if (id < 0) {
      StratumLabel e;
      e.id = static_cast<int>(cat.entries.size());
      e.rep_subalgebra = pc.isotropy;
      e.fingerprint = pc.fingerprint;
      e.is_nullcone_stratum = pc.isotropy.dim_total == g.dim_g();
      e.rep_point = pc.in_nullcone ? Vec::Zero(g.dim_v()) : pc.flow.limit;
      cat.entries.push_back(e);
      id = e.id;
    }
    ++cat.entries[static_cast<size_t>(id)].count;
    ++cat.classified;
    rec.label = id;
    cat.samples.push_back(rec);
  }

  // The origin is always a point of V, so its stratum is listed even when no
  // sample lands in the nullcone.
  const bool has_origin = std::any_of(cat.entries.begin(), cat.entries.end(),
                                      [](const StratumLabel& e) { return e.is_nullcone_stratum; });
  if (!has_origin) {
    StratumLabel e;
    e.id = static_cast<int>(cat.entries.size());
    e.rep_subalgebra = whole_algebra(g);
    e.fingerprint = fingerprint(g, e.rep_subalgebra);
    e.is_nullcone_stratum = true;
    e.rep_point = Vec::Zero(g.dim_v());
    cat.entries.push_back(e);
  }

  cat.fractions.assign(cat.entries.size(), 0.0);
  int max_orbit = -1;
  for (size_t i = 0; i < cat.entries.size(); ++i) {
    cat.fractions[i] = cat.classified > 0 ? static_cast<double>(cat.entries[i].count) / cat.classified : 0.0;
    if (cat.entries[i].count > 0) max_orbit = std::max(max_orbit, cat.entries[i].fingerprint.orbit_dim);
  }
  for (size_t i = 0; i < cat.entries.size(); ++i)
    cat.entries[i].is_open =
        cat.fractions[i] >= opts.open_fraction && cat.entries[i].fingerprint.orbit_dim == max_orbit;
  return cat;
}

std::optional<StratumLabel> dense_stratum(const StratumCatalog& catalog) {
  std::optional<StratumLabel> found;
  for (const StratumLabel& e : catalog.entries) {
    if (!e.is_open) continue;
    if (found) return std::nullopt;
    found = e;
  }
  return found;
}

std::vector<Vec> sample_gaussian(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v(j) = normal(rng);
    out.push_back(v);
  }
  return out;
}

std::vector<Vec> sample_sphere(int dim, int count, std::uint64_t seed) {
  std::vector<Vec> out = sample_gaussian(dim, count, seed);
  for (Vec& v : out) {
    const double n = v.norm();
    if (n > 0.0) v /= n;
  }
  return out;
}

}  // namespace isostrata
