#include "isostrata/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace isostrata {

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, double step,
                             int max_evals, double x_tol, double f_tol) {
  const Eigen::Index n = x0.size();
  NelderMeadResult out;
  if (n == 0) {
    out.x = x0;
    out.value = f(x0);
    out.evaluations = 1;
    return out;
  }

  std::vector<Vec> pts;
  std::vector<double> vals;
  pts.push_back(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec p = x0;
    p(i) += step;
    pts.push_back(p);
  }
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };
  for (const Vec& p : pts) vals.push_back(eval(p));

  std::vector<size_t> order(pts.size());
  while (evals < max_evals) {
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });
    const size_t best = order.front();
    const size_t worst = order.back();
    const size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (const Vec& p : pts) diameter = std::max(diameter, (p - pts[best]).lpNorm<Eigen::Infinity>());
    if (diameter <= x_tol && vals[worst] - vals[best] <= f_tol) break;
    if (diameter <= 1e-3 * x_tol) break;

    Vec centroid = Vec::Zero(n);
    for (size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const Vec reflected = centroid + (centroid - pts[worst]);
    const double fr = eval(reflected);
    if (fr < vals[best]) {
      const Vec expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Vec contracted = outside ? Vec(centroid + 0.5 * (reflected - centroid))
                                   : Vec(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  out.x = pts[static_cast<size_t>(it - vals.begin())];
  out.value = *it;
  out.evaluations = evals;
  return out;
}

std::vector<KCandidate> multi_start_k(const CompatibleGroup& g, int n_cosets,
                                      const std::function<double(const Vec&, int)>& objective,
                                      const KSearchOptions& opts) {
  std::vector<KCandidate> found;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const int dim = g.dim_k();
  const int starts = dim == 0 ? 1 : std::max(1, opts.starts);

  for (int s = 0; s < starts; ++s) {
    Vec x0 = Vec::Zero(dim);
    if (s > 0)
      for (int i = 0; i < dim; ++i) x0(i) = angle(rng);
    for (int c = 0; c < n_cosets; ++c) {
      auto f = [&](const Vec& x) { return objective(x, c); };
      const NelderMeadResult r = nelder_mead(f, x0, 0.5, opts.max_evals);
      found.push_back({r.x, c, r.value, s});
      if (opts.stop_early && r.value <= opts.stop_below) return found;
    }
  }
  return found;
}

const KCandidate& best_candidate(const std::vector<KCandidate>& candidates) {
  return *std::min_element(candidates.begin(), candidates.end(),
                           [](const KCandidate& a, const KCandidate& b) { return a.value < b.value; });
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace isostrata
