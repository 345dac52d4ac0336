#pragma once

// The restriction map from cl(X^<H>) // N_G(H) to X // G, represented on
// minimal vectors: N_K(H)-orbits in M_{n_p} versus K-orbits in M_p.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isostrata/slice.hpp"
#include "isostrata/strata.hpp"

namespace isostrata {

/// One representative H_a of the restricting stratum. With ambient
/// identification the restricting stratum has one sheet per open stratum of V.
struct Sheet {
  int stratum_id = 0;
  Subalgebra h;
  Fingerprint fingerprint;
  /// Orthonormal basis of V^h.
  Mat fixed;
  Subalgebra normalizer;
  /// Realized orthonormal bases of n_p and n cap k.
  std::vector<Mat> np;
  std::vector<Mat> nk;
  /// Identity plus the supplied discrete elements of K normalizing h.
  std::vector<Mat> normalizer_cosets;
};

struct RestrictionContext {
  enum class Mode { Dense, Ambient, Closure };
  Mode mode = Mode::Dense;
  std::vector<Sheet> sheets;
  /// Catalog ids of the strata making up the restricting stratum.
  std::vector<int> allowed;
};

const char* to_string(RestrictionContext::Mode m);

/// Sheet data for a K-conjugate of h that the supplied normalizer
/// representatives normalize (h itself if none is found).
Sheet make_sheet(const CompatibleGroup& g, const Subalgebra& h, int stratum_id, const Options& opts);

/// Picks the restricting stratum: the dense stratum; or all open strata when
/// they are identified by the ambient representatives; or, with
/// allow_closure, the closure of one open stratum (`stratum`, default the
/// largest). Throws NoDenseStratum.
RestrictionContext prepare_restriction(const CompatibleGroup& g, const StratumCatalog& catalog,
                                       const Options& opts, std::optional<int> stratum = std::nullopt,
                                       bool allow_closure = true);

/// mu_{n_p}(v) over the orthonormal n_p basis of the normalizer of h.
Vec restricted_gradient(const CompatibleGroup& g, const Subalgebra& h, const Vec& v, const Options& opts);

struct XhSample {
  std::vector<Vec> points;
  int attempts = 0;
  /// Rejection reason -> count.
  std::map<std::string, int> rejections;
  double accepted_fraction() const {
    return attempts > 0 ? static_cast<double>(points.size()) / attempts : 0.0;
  }
};

/// Samples V^h and keeps points whose isotropy is exactly h and whose orbit
/// is closed. Throws EmptyResult (with the rejection histogram) if none pass.
XhSample sample_xh(const CompatibleGroup& g, const Subalgebra& h, int count, std::uint64_t seed,
                   const Options& opts);

struct ZeroFiberRecord {
  int checked = 0;
  int in_mnp = 0;
  int in_mp = 0;
  /// mu_{n_p} = 0 but mu_p != 0, and the converse.
  int forward_failures = 0;
  int backward_failures = 0;
  double max_mp_given_mnp = 0.0;
  double max_mnp_given_mp = 0.0;
  bool passed() const { return forward_failures == 0 && backward_failures == 0; }
};

ZeroFiberRecord verify_zero_fiber_lemma(const CompatibleGroup& g, const Sheet& sheet,
                                        const std::vector<Vec>& samples, const Options& opts);

struct TransportRecord {
  Vec point;
  bool skipped = false;
  bool success = false;
  int sheet = -1;
  KElement witness;
  double residual = 0.0;
  /// | |k m| - |m| |
  double norm_error = 0.0;
};

struct SurjectivityRecord {
  std::vector<TransportRecord> points;
  int successes = 0;
  int failures = 0;
  int skipped = 0;
  double max_residual = 0.0;
  bool passed() const { return failures == 0 && successes > 0; }
};

/// For each minimal vector m whose isotropy matches a sheet, searches k with
/// k m in M_{n_p} and Ad(k) g_m = h. Other points are skipped.
SurjectivityRecord verify_surjectivity(const CompatibleGroup& g, const RestrictionContext& ctx,
                                       const std::vector<Vec>& mp_samples, const Options& opts);

struct FiberRecord {
  Vec point;
  int count = 0;
  int splitting = 0;
  bool not_open = false;
  /// A new cluster appeared late in the search; count is only a lower bound.
  bool budget_exhausted = false;
  bool agrees = false;
  /// One point of each N_K(h)-cluster, with its sheet index.
  std::vector<std::pair<int, Vec>> clusters;
};

/// Counts N_K(H)-orbits in K m cap M_{n_p} cap V^H and compares with the
/// splitting number at m.
FiberRecord phi_fiber_count(const CompatibleGroup& g, const RestrictionContext& ctx, const StratumCatalog& catalog,
                            const Vec& m, const Options& opts);

struct RestrictionParams {
  int xh_count = 60;
  int mp_count = 60;
  int fiber_count = 20;
  bool include_origin = true;
  std::optional<int> stratum;
};

struct RestrictionReport {
  RestrictionContext context;
  std::vector<Vec> xh_samples;
  std::map<std::string, int> xh_rejections;
  double xh_accepted_fraction = 0.0;
  std::vector<Vec> mnp_points;
  /// Worst |mu_{n_p}| and isotropy distance to h over mnp_points.
  double mnp_max_gradient = 0.0;
  double mnp_max_isotropy_distance = 0.0;
  bool mnp_passed = false;
  ZeroFiberRecord zero_fiber;
  SurjectivityRecord surjectivity;
  std::vector<FiberRecord> fibers;
  bool passed = false;
};

RestrictionReport run_restriction(const CompatibleGroup& g, const StratumCatalog& catalog, const Options& opts,
                                  const RestrictionParams& params);

/// Minimal vectors of the given catalog strata, from flows of seeded
/// Gaussian starts.
std::vector<Vec> minimal_vectors_in(const CompatibleGroup& g, const StratumCatalog& catalog,
                                    const std::vector<int>& ids, int count, std::uint64_t seed,
                                    const Options& opts);

}  // namespace isostrata
