#include "isostrata/kempfness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isostrata/errors.hpp"

namespace isostrata {

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Minimal: return "Minimal";
    case FlowStatus::MaxIterations: return "MaxIterations";
    case FlowStatus::Diverged: return "Diverged";
  }
  return "?";
}

double value_f(const Vec& v) { return 0.5 * v.squaredNorm(); }

Vec gradient_map(const std::vector<Mat>& p_elements, const Vec& v) {
  Vec mu(static_cast<Eigen::Index>(p_elements.size()));
  for (size_t i = 0; i < p_elements.size(); ++i)
    mu(static_cast<Eigen::Index>(i)) = v.dot(p_elements[i] * v);
  return mu;
}

Vec gradient_map(const CompatibleGroup& g, const Vec& v) {
  if (v.size() != g.dim_v()) throw DimensionMismatch("vector does not match dim_v of " + g.name());
  Vec mu(g.dim_p());
  for (int i = 0; i < g.dim_p(); ++i) mu(i) = v.dot(g.p_basis(i) * v);
  return mu;
}

double null_threshold(double f_start, const Options& opts) {
  return std::max(opts.null_rel * f_start, opts.null_floor);
}

bool is_minimal(const CompatibleGroup& g, const Vec& v, const Options& opts) {
  return gradient_map(g, v).norm() <= opts.flow_tol * std::min(1.0, v.squaredNorm());
}

FlowResult flow_to_minimal(const std::vector<Mat>& p_elements, const Vec& start, const Options& opts) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (!start.allFinite()) throw NonFinite("non-finite start vector", start);

  FlowResult out;
  out.f_start = value_f(start);
  const double collapse = 1e-2 * null_threshold(out.f_start, opts);

  Vec v = start;
  double f = out.f_start;
  auto finish = [&](FlowStatus status, int iterations) {
    out.limit = v;
    out.f_limit = f;
    out.residual = gradient_map(p_elements, v).norm();
    out.iterations = iterations;
    out.status = status;
    return out;
  };

  const Eigen::Index n = start.size();
  for (int it = 0; it < opts.max_iter; ++it) {
    const Vec mu = gradient_map(p_elements, v);
    const double n2 = v.squaredNorm();
    const double res = mu.norm();
    if (res <= opts.flow_tol * std::min(1.0, n2)) return finish(FlowStatus::Minimal, it);
    if (f <= collapse) {
      out.collapsed = true;
      return finish(FlowStatus::Minimal, it);
    }

    // Direction of steepest descent of log f; same ray as mu, scaled by 1/|v|^2.
    const Vec c = mu / n2;
    Mat x = Mat::Zero(n, n);
    for (size_t i = 0; i < p_elements.size(); ++i) x += c(static_cast<Eigen::Index>(i)) * p_elements[i];
    const double slope = mu.dot(c);
    const double mu_rel = res / n2;

    double s = 1.0 / (1.0 + c.norm());
    bool accepted = false;
    Vec next;
    double f_next = f;
    while (s > 1e-14) {
      next = linalg::expm(-s * x) * v;
      if (!next.allFinite()) throw NonFinite("non-finite iterate in flow", v);
      f_next = value_f(next);
      const double predicted = opts.armijo * s * slope;
      if (predicted > 8.0 * eps * f) {
        accepted = f_next <= f - predicted;
      } else {
        // The decrease is below rounding; track the relative gradient instead.
        const double next_rel = gradient_map(p_elements, next).norm() / next.squaredNorm();
        accepted = f_next <= f && next_rel < mu_rel;
      }
      if (accepted) break;
      s *= opts.contraction;
    }
    // Line-search exhaustion is reported as a spent budget.
    if (!accepted) return finish(FlowStatus::MaxIterations, it);
    v = next;
    f = f_next;
  }
  return finish(FlowStatus::MaxIterations, opts.max_iter);
}

FlowResult flow_to_minimal(const CompatibleGroup& g, const Vec& v, const Options& opts) {
  if (v.size() != g.dim_v()) throw DimensionMismatch("vector does not match dim_v of " + g.name());
  std::vector<Mat> ps;
  ps.reserve(static_cast<size_t>(g.dim_p()));
  for (int i = 0; i < g.dim_p(); ++i) ps.push_back(g.p_basis(i));
  return flow_to_minimal(ps, v, opts);
}

OrbitStatus orbit_status(const CompatibleGroup& g, const Vec& v, const Options& opts) {
  OrbitStatus out;
  out.flow = flow_to_minimal(g, v, opts);
  if (out.flow.status != FlowStatus::Minimal)
    throw FlowFailed(std::string("flow ended with status ") + to_string(out.flow.status) + " after " +
                     std::to_string(out.flow.iterations) + " iterations");
  out.in_nullcone = out.flow.f_limit <= null_threshold(out.flow.f_start, opts);
  out.isotropy_dim_start = g.dim_g() - linalg::rank(g.action_matrix(v), opts.iso_tol);
  out.isotropy_dim_limit =
      out.in_nullcone ? g.dim_g() : g.dim_g() - linalg::rank(g.action_matrix(out.flow.limit), opts.iso_tol);
  out.kind = out.isotropy_dim_limit == out.isotropy_dim_start ? OrbitStatus::Kind::Closed
                                                              : OrbitStatus::Kind::NonClosed;
  return out;
}

}  // namespace isostrata
