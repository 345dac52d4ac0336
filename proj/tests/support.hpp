#pragma once

#include <random>

#include "isostrata/algebra.hpp"
#include "isostrata/builtins.hpp"

namespace testing_support {

using isostrata::CompatibleGroup;
using isostrata::Mat;
using isostrata::Vec;

inline CompatibleGroup builtin(const std::string& name) {
  return isostrata::build_group(isostrata::builtin_description(name));
}

inline Vec gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

// Random element of K, including a random component.
inline Mat random_k(const CompatibleGroup& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-3.14159, 3.14159);
  Vec x(g.dim_k());
  for (int i = 0; i < g.dim_k(); ++i) x(i) = a(rng);
  const auto cosets = g.cosets();
  std::uniform_int_distribution<size_t> c(0, cosets.size() - 1);
  return cosets[c(rng)] * g.k_exp(x);
}

// exp(xi_k) exp(xi_p) with coefficients of the given size.
inline Mat random_g(const CompatibleGroup& g, std::mt19937_64& rng, double size = 0.7) {
  isostrata::AlgebraElement ak{size * gaussian(g.dim_k(), rng), Vec::Zero(g.dim_p())};
  isostrata::AlgebraElement ap{Vec::Zero(g.dim_k()), size * gaussian(g.dim_p(), rng)};
  return isostrata::linalg::expm(g.realize(ak)) * isostrata::linalg::expm(g.realize(ap));
}

}  // namespace testing_support
