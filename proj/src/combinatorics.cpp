#include "nnpoly/combinatorics.hpp"

#include <string>

#include "nnpoly/error.hpp"

namespace nnpoly {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError("integer overflow in combinatorial count");
  }
  return r;
}

}  // namespace

std::uint64_t factorial(int n) {
  if (n < 0) throw ValidationError("factorial of negative number");
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r = checked_mul(r, static_cast<std::uint64_t>(i));
  return r;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  // r * (n - k + i) is always divisible by i after the multiplication.
  for (int i = 1; i <= k; ++i) {
    r = checked_mul(r, static_cast<std::uint64_t>(n - k + i)) / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::uint64_t multinomial(std::span<const int> parts) {
  // Product of binomials C(k_0 + ... + k_i, k_i) stays exact at every step.
  std::uint64_t r = 1;
  int total = 0;
  for (int k : parts) {
    if (k < 0) throw ValidationError("negative multinomial part");
    total += k;
    r = checked_mul(r, binomial(total, k));
  }
  return r;
}

}  // namespace nnpoly
