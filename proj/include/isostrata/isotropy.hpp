#pragma once

// Isotropy subalgebras g_v = k_v + p_v, fixed spaces, fingerprints,
// normalizers and numerical K-conjugacy of subalgebras.

#include <optional>
#include <string>
#include <vector>

#include "isostrata/algebra.hpp"
#include "isostrata/options.hpp"

namespace isostrata {

/// A subspace of g in g-coordinates (orthonormal columns). When theta_stable,
/// basis = [k_part, p_part].
struct Subalgebra {
  Mat basis;
  Mat k_part;
  Mat p_part;
  int dim_total = 0;
  int dim_k = 0;
  int dim_p = 0;
  bool theta_stable = true;
};

struct Fingerprint {
  int dim_total = 0;
  int dim_k = 0;
  int dim_p = 0;
  int fixed_dim = 0;
  int orbit_dim = 0;

  bool operator==(const Fingerprint&) const = default;
};

std::string to_string(const Fingerprint& fp);

/// Splits a subspace of g into its intersections with k and p.
Subalgebra theta_split(const CompatibleGroup& g, const Mat& span);

Subalgebra whole_algebra(const CompatibleGroup& g);
Subalgebra zero_subalgebra(const CompatibleGroup& g);

/// Kernel of xi -> xi v with cutoff iso_tol * sigma_max.
Subalgebra isotropy_algebra(const CompatibleGroup& g, const Vec& v, const Options& opts);

/// Realized dim_v x dim_v matrices of the columns of a coordinate basis.
std::vector<Mat> realize_basis(const CompatibleGroup& g, const Mat& coords);

/// Joint kernel of the realized basis of h, and of (e - I) for every supplied
/// group element e known to lie in the corresponding group.
Mat fixed_space(const CompatibleGroup& g, const Subalgebra& h,
                const std::vector<Mat>& group_elements = {});

Fingerprint fingerprint(const CompatibleGroup& g, const Subalgebra& h);

/// Ad(x) h for an orthogonal transform x normalizing g, given as Ad in
/// g-coordinates.
Subalgebra conjugate(const CompatibleGroup& g, const Subalgebra& h, const Mat& ad);

double subalgebra_distance(const Subalgebra& a, const Subalgebra& b);

/// Largest distance of [h_i, h_j] from h over basis pairs.
double bracket_closure_residual(const CompatibleGroup& g, const Subalgebra& h);

/// {xi in g : [xi, h] in h}, theta-split.
Subalgebra normalizer_algebra(const CompatibleGroup& g, const Subalgebra& h, const Options& opts);

/// Traces of the projectors onto V^h and h against the K-invariant operators.
Vec invariant_signature(const CompatibleGroup& g, const Subalgebra& h);

struct ConjugacyResult {
  bool conjugate = false;
  /// Best chordal distance d(Ad(k) h1, h2) found; NaN when a pre-filter
  /// decided without searching.
  double distance = 0.0;
  KElement witness;
  /// "identical", "fingerprint", "signature" or "search".
  std::string decided_by;
};

struct ConjugacyOptions {
  /// Also allow the ambient representatives (identifies strata of the bundle model).
  bool with_ambient = false;
  /// Use the K-invariant trace signature as an additional pre-filter.
  bool use_signature = true;
  std::uint64_t seed = 42;
};

/// Searches k = c exp(X) over the cosets c with Ad(k) h1 = h2; the witness is
/// reported when the optimum is below conj_tol.
ConjugacyResult k_conjugacy_search(const CompatibleGroup& g, const Subalgebra& h1, const Subalgebra& h2,
                                   const Options& opts, const ConjugacyOptions& copts = {});

}  // namespace isostrata
