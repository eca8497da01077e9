#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nnpoly/activation.hpp"
#include "nnpoly/network.hpp"
#include "nnpoly/polynomial.hpp"
#include "nnpoly/scaling.hpp"

namespace nnpoly {

struct TranscodeResult {
  Polynomial poly;  // in the network's input space
  int order;
  Activation activation;
  // Optional: unit_contributions[c][j] is hidden unit j's share of the
  // c-th coefficient in graded-lex order (the output bias is excluded).
  std::vector<std::vector<double>> unit_contributions;
};

// Polynomial coefficients of the order-q Taylor surrogate of a trained
// network, expanded at 0.
//
// For a monomial x_1^m_1 ... x_p^m_p of total order t:
//
//   beta_m = sum_j v_j sum_{n=t}^{q} g^(n)(0) / ((n-t)! m_1! ... m_p!)
//                    * w_0j^(n-t) * prod_i w_ij^m_i
//
// and the intercept additionally carries the output bias v_0. Addends are
// summed in order of increasing magnitude, first over n within a unit and
// then over units.
TranscodeResult nn_to_poly(const NetworkWeights& net, int order, bool keep_unit_contributions = false);

// Network output with every activation replaced by its truncated series,
// evaluated directly on the synaptic potentials without any monomial
// expansion.
double taylor_truncated_output(const NetworkWeights& net, int order, std::span<const double> x);

struct CoverageReport {
  std::vector<double> unit_fraction;  // per hidden unit
  double overall = 1.0;
  double epsilon;
  int order;
  ValidRange range;
};

// Share of synaptic potentials u_j(x_k) that fall inside the activation's
// acceptable Taylor range.
CoverageReport coverage(const NetworkWeights& net, const Eigen::MatrixXd& x, int order,
                        double epsilon = kDefaultEpsilon);

// Maps a scaled-space transcoding back to original data units: the
// returned polynomial takes original-space x and returns original-space y.
Polynomial rescale_to_original(const TranscodeResult& result, const ScalingSpec& spec);
Polynomial rescale_to_original(const Polynomial& scaled_poly, const ScalingSpec& spec);

}  // namespace nnpoly
