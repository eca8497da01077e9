#pragma once

#include <cstdint>
#include <span>

namespace nnpoly {

// Hard limits on variable count and degree shared by the polynomial and
// transcoding code.
inline constexpr int kMaxVariables = 10;
inline constexpr int kMaxDegree = 10;

// Exact unsigned 64-bit combinatorics. All functions throw OverflowError
// instead of wrapping.
std::uint64_t factorial(int n);
std::uint64_t binomial(int n, int k);

// n! / (k_0! k_1! ... k_r!) where n = sum of parts.
std::uint64_t multinomial(std::span<const int> parts);

}  // namespace nnpoly
