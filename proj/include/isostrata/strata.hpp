#pragma once

// Isotropy stratification of sampled points: each point is labelled by the
// K-conjugacy class of the isotropy algebra at the closed orbit of its fiber.

#include <cstdint>
#include <optional>
#include <vector>

#include "isostrata/isotropy.hpp"
#include "isostrata/kempfness.hpp"

namespace isostrata {

enum class SampleFlag { Ok, Boundary, Failed };

const char* to_string(SampleFlag f);

struct PointClass {
  FlowResult flow;
  /// Isotropy at the flow limit (all of g for nullcone points).
  Subalgebra isotropy;
  Fingerprint fingerprint;
  bool in_nullcone = false;
  /// The limit is small relative to the start (within wall_tol), i.e. the
  /// point sits numerically on a lower-dimensional stratum.
  bool boundary_ambiguous = false;
};

/// Flows v to its minimal vector and takes the isotropy there.
/// Throws FlowFailed or NonFinite.
PointClass classify_point(const CompatibleGroup& g, const Vec& v, const Options& opts);

struct StratumLabel {
  int id = 0;
  Subalgebra rep_subalgebra;
  Fingerprint fingerprint;
  bool is_open = false;
  bool is_nullcone_stratum = false;
  /// Minimal vector whose isotropy is rep_subalgebra.
  Vec rep_point;
  int count = 0;
};

struct SampleRecord {
  Vec coords;
  int label = -1;
  double f_limit = 0.0;
  double residual = 0.0;
  SampleFlag flag = SampleFlag::Ok;
};

struct StratumCatalog {
  std::vector<StratumLabel> entries;
  /// Per-entry fraction of the classified (non-boundary, non-failed) samples.
  std::vector<double> fractions;
  std::vector<SampleRecord> samples;
  int sample_count = 0;
  int classified = 0;
  int boundary = 0;
  int failed = 0;
  std::uint64_t seed = 0;
};

/// Label id of the entry K-conjugate to h, or -1.
int match_label(const CompatibleGroup& g, const StratumCatalog& catalog, const Subalgebra& h,
                const Options& opts, std::uint64_t seed);

/// Classifies every sample and merges labels by K-conjugacy. Failed flows
/// are recorded per sample, not thrown.
StratumCatalog build_catalog(const CompatibleGroup& g, const std::vector<Vec>& samples, const Options& opts);

/// The open entry if exactly one entry is open.
std::optional<StratumLabel> dense_stratum(const StratumCatalog& catalog);

std::vector<Vec> sample_sphere(int dim, int count, std::uint64_t seed);
std::vector<Vec> sample_gaussian(int dim, int count, std::uint64_t seed);

}  // namespace isostrata
