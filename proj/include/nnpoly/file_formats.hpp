#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nnpoly/network.hpp"
#include "nnpoly/polynomial.hpp"
#include "nnpoly/scaling.hpp"
#include "nnpoly/simlab.hpp"

// JSON documents for polynomials, network weights and scaling specs, and a
// headered CSV for datasets. Reals are written with 17 significant digits
// so every file round-trips bit-exactly. All documents carry "format": 1.
//
// Polynomial:
//   {"format": 1, "kind": "polynomial", "p": 2, "degree": 2,
//    "terms": [{"exponents": [0, 0], "coeff": 1.5}, ...]}
//
// Network weights (w has p + 1 rows of h1 values; row 0 holds the hidden
// biases; v[0] is the output bias):
//   {"format": 1, "kind": "network", "p": 3, "h1": 4, "activation": "softplus",
//    "w": [[...], ...], "v": [...]}
//
// Scaling:
//   {"format": 1, "kind": "scaling", "mode": "symmetric",
//    "feature_min": [...], "feature_max": [...],
//    "response_min": 0.0, "response_max": 1.0}
//
// Dataset CSV: header "x1,...,xp,y", one sample per line.

namespace nnpoly {

inline constexpr int kFileFormatVersion = 1;

// "%.17g"; throws for non-finite values.
std::string format_real(double v);

std::string polynomial_to_json(const Polynomial& poly);
Polynomial polynomial_from_json(std::string_view text, std::string_view source = "<string>");
void save_polynomial(const Polynomial& poly, const std::filesystem::path& path);
Polynomial load_polynomial(const std::filesystem::path& path);

std::string weights_to_json(const NetworkWeights& net);
NetworkWeights weights_from_json(std::string_view text, std::string_view source = "<string>");
void save_weights(const NetworkWeights& net, const std::filesystem::path& path);
NetworkWeights load_weights(const std::filesystem::path& path);

std::string scaling_to_json(const ScalingSpec& spec);
ScalingSpec scaling_from_json(std::string_view text, std::string_view source = "<string>");
void save_scaling(const ScalingSpec& spec, const std::filesystem::path& path);
ScalingSpec load_scaling(const std::filesystem::path& path);

std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(std::string_view text, std::string_view source = "<string>");
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nnpoly
