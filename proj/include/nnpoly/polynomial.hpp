#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nnpoly {

// Exponent vector (m_1, ..., m_p) of one monomial x_1^m_1 ... x_p^m_p.
// The all-zero index is the constant term.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  MultiIndex(std::initializer_list<int> exponents);

  // The all-zero index in p variables.
  static MultiIndex zero(int p);

  int size() const { return static_cast<int>(exponents_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exponents_[static_cast<std::size_t>(i)]; }
  std::span<const int> exponents() const { return exponents_; }

  bool operator==(const MultiIndex& other) const { return exponents_ == other.exponents_; }

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

// Graded lexicographic order: total degree ascending, then exponent
// vectors lexicographically descending, so x1^2 < x1*x2 < x2^2.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// All exponent vectors in p variables of total degree <= q, in graded
// lexicographic order. There are C(p+q, q) of them.
std::vector<MultiIndex> monomials_up_to(int p, int q);

// Sparse multivariate polynomial over p variables with total degree bound.
// Absent terms are zero. Explicit zeros may be stored; comparisons treat
// them as absent.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GradedLexLess>;

  Polynomial(int p, int degree);
  Polynomial(int p, int degree, TermMap terms);

  int variables() const { return p_; }
  int degree() const { return degree_; }
  const TermMap& terms() const { return terms_; }

  // Coefficient of the given monomial, 0 when absent.
  double coeff(const MultiIndex& m) const;

  // Sets the coefficient; throws when the index does not fit p or degree.
  void set(const MultiIndex& m, double value);
  void add(const MultiIndex& m, double value);

  double evaluate(std::span<const double> x) const;

  // Coefficients for every monomial up to degree(), graded-lex order.
  std::vector<double> dense_coeffs() const;

 private:
  void check_index(const MultiIndex& m) const;

  int p_;
  int degree_;
  TermMap terms_;
};

// Returns poly' with poly'(x') = poly(shift + scale .* x').
Polynomial affine_substitute(const Polynomial& poly, std::span<const double> shift,
                             std::span<const double> scale);

// Returns mult * poly + add.
Polynomial output_affine(const Polynomial& poly, double mult, double add);

struct FitReport {
  double residual_sum_squares = 0.0;
  std::vector<double> estimates;
  // Ratio of largest to smallest singular value of the design matrix.
  double condition_number = 0.0;
  // sqrt(diag((A^T A)^-1)): standard errors for unit noise variance.
  std::vector<double> unit_std_errors;
};

struct OlsFit {
  Polynomial poly;
  FitReport report;
};

// Builds the n x C(p+q,q) monomial design matrix, graded-lex column order.
Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& x, int degree);

// Least squares fit of a full degree-q polynomial using a column-pivoted
// Householder QR of the monomial design matrix.
OlsFit ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int degree);

struct TermDifference {
  MultiIndex index;
  double abs_diff;
};

struct CoefficientDistance {
  std::vector<TermDifference> per_term;  // union of both supports, graded-lex
  double max_abs = 0.0;
  double l2 = 0.0;
};

CoefficientDistance coefficient_distance(const Polynomial& a, const Polynomial& b);

}  // namespace nnpoly
