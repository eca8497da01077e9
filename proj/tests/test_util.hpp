#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nnpoly/network.hpp"
#include "nnpoly/polynomial.hpp"

namespace nnpoly::testing {

inline std::vector<double> random_vector(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = d(rng);
  return out;
}

inline Polynomial random_polynomial(std::mt19937_64& rng, int p, int degree) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  Polynomial poly(p, degree);
  for (const auto& m : monomials_up_to(p, degree)) poly.set(m, d(rng));
  return poly;
}

inline NetworkWeights random_network(std::mt19937_64& rng, int p, int h1, Activation act, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  NetworkWeights net;
  net.activation = act;
  net.w.resize(p + 1, h1);
  net.v.resize(h1 + 1);
  for (Eigen::Index k = 0; k < net.w.size(); ++k) net.w.data()[k] = d(rng);
  for (Eigen::Index k = 0; k < net.v.size(); ++k) net.v(k) = d(rng);
  return net;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace nnpoly::testing
