#include "nnpoly/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nnpoly/combinatorics.hpp"
#include "nnpoly/error.hpp"

namespace nnpoly {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw ValidationError("negative exponent in multi-index");
    degree_ += e;
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::vector<int>(exponents)) {}

MultiIndex MultiIndex::zero(int p) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(p), 0)); }

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  // Larger leading exponents come first.
  return std::lexicographical_compare(b.exponents().begin(), b.exponents().end(),
                                      a.exponents().begin(), a.exponents().end());
}

namespace {

void fill_degree(int remaining, std::vector<int>& prefix, int p, std::vector<MultiIndex>& out) {
  const auto pos = prefix.size();
  if (static_cast<int>(pos) == p - 1) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    prefix.push_back(e);
    fill_degree(remaining - e, prefix, p, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> monomials_up_to(int p, int q) {
  if (p < 1 || q < 0) throw ValidationError("monomials_up_to requires p >= 1 and q >= 0");
  std::vector<MultiIndex> out;
  out.reserve(binomial(p + q, q));
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(p));
  for (int d = 0; d <= q; ++d) fill_degree(d, prefix, p, out);
  return out;
}

Polynomial::Polynomial(int p, int degree) : p_(p), degree_(degree) {
  if (p < 1) throw ValidationError("polynomial needs at least one variable");
  if (degree < 0) throw ValidationError("polynomial degree must be non-negative");
}

Polynomial::Polynomial(int p, int degree, TermMap terms) : Polynomial(p, degree) {
  for (const auto& [m, c] : terms) check_index(m);
  terms_ = std::move(terms);
}

void Polynomial::check_index(const MultiIndex& m) const {
  if (m.size() != p_) {
    throw DimensionError("multi-index has " + std::to_string(m.size()) +
                         " exponents, polynomial has " + std::to_string(p_) + " variables");
  }
  if (m.degree() > degree_) {
    throw ValidationError("monomial of degree " + std::to_string(m.degree()) +
                          " exceeds polynomial degree bound " + std::to_string(degree_));
  }
}

double Polynomial::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::set(const MultiIndex& m, double value) {
  check_index(m);
  terms_[m] = value;
}

void Polynomial::add(const MultiIndex& m, double value) {
  check_index(m);
  terms_[m] += value;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != p_) {
    throw DimensionError("evaluate: point has " + std::to_string(x.size()) +
                         " coordinates, polynomial has " + std::to_string(p_) + " variables");
  }
  const int stride = degree_ + 1;
  std::vector<double> powers(static_cast<std::size_t>(p_ * stride));
  for (int i = 0; i < p_; ++i) {
    double v = 1.0;
    for (int k = 0; k <= degree_; ++k) {
      powers[static_cast<std::size_t>(i * stride + k)] = v;
      v *= x[static_cast<std::size_t>(i)];
    }
  }
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double term = c;
    for (int i = 0; i < p_; ++i) term *= powers[static_cast<std::size_t>(i * stride + m[i])];
    sum += term;
  }
  return sum;
}

std::vector<double> Polynomial::dense_coeffs() const {
  const auto basis = monomials_up_to(p_, degree_);
  std::vector<double> out;
  out.reserve(basis.size());
  for (const auto& m : basis) out.push_back(coeff(m));
  return out;
}

Polynomial affine_substitute(const Polynomial& poly, std::span<const double> shift,
                             std::span<const double> scale) {
  const int p = poly.variables();
  if (static_cast<int>(shift.size()) != p || static_cast<int>(scale.size()) != p) {
    throw DimensionError("affine_substitute: shift/scale length must equal variable count");
  }
  Polynomial out(p, poly.degree());
  struct Partial {
    std::vector<int> exps;
    double coeff;
  };
  std::vector<Partial> current, next;
  for (const auto& [m, c] : poly.terms()) {
    current.assign(1, Partial{{}, c});
    for (int i = 0; i < p; ++i) {
      const int mi = m[i];
      const double a = shift[static_cast<std::size_t>(i)];
      const double b = scale[static_cast<std::size_t>(i)];
      next.clear();
      for (const auto& part : current) {
        // (a + b x')^mi = sum_k C(mi, k) a^(mi-k) b^k x'^k
        for (int k = 0; k <= mi; ++k) {
          const double factor = static_cast<double>(binomial(mi, k)) * std::pow(a, mi - k) *
                                std::pow(b, k);
          Partial extended{part.exps, part.coeff * factor};
          extended.exps.push_back(k);
          next.push_back(std::move(extended));
        }
      }
      std::swap(current, next);
    }
    for (auto& part : current) out.add(MultiIndex(std::move(part.exps)), part.coeff);
  }
  return out;
}

Polynomial output_affine(const Polynomial& poly, double mult, double add) {
  Polynomial out(poly.variables(), poly.degree());
  for (const auto& [m, c] : poly.terms()) out.set(m, mult * c);
  out.add(MultiIndex::zero(poly.variables()), add);
  return out;
}

Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& x, int degree) {
  const int p = static_cast<int>(x.cols());
  const auto basis = monomials_up_to(p, degree);
  Eigen::MatrixXd a(x.rows(), static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < basis.size(); ++c) {
      double v = 1.0;
      for (int i = 0; i < p; ++i) {
        for (int k = 0; k < basis[c][i]; ++k) v *= x(r, i);
      }
      a(r, static_cast<Eigen::Index>(c)) = v;
    }
  }
  return a;
}

OlsFit ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int degree) {
  const int p = static_cast<int>(x.cols());
  if (p < 1 || p > kMaxVariables) throw ValidationError("ols_fit: variable count out of range");
  if (degree < 0 || degree > kMaxDegree) throw ValidationError("ols_fit: degree out of range");
  if (y.size() != x.rows()) throw DimensionError("ols_fit: X and y have different row counts");
  const auto basis = monomials_up_to(p, degree);
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (x.rows() < k) {
    throw ValidationError("ols_fit: " + std::to_string(x.rows()) + " samples cannot determine " +
                          std::to_string(k) + " coefficients");
  }

  const Eigen::MatrixXd a = design_matrix(x, degree);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < k) {
    throw RankDeficientError("ols_fit: design matrix has rank " + std::to_string(qr.rank()) +
                             " but " + std::to_string(k) + " monomial columns");
  }
  const Eigen::VectorXd beta = qr.solve(y);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const Eigen::MatrixXd& vmat = svd.matrixV();

  FitReport report;
  report.residual_sum_squares = (y - a * beta).squaredNorm();
  report.condition_number = sv(0) / sv(k - 1);
  report.estimates.assign(beta.data(), beta.data() + k);
  report.unit_std_errors.resize(static_cast<std::size_t>(k));
  for (Eigen::Index r = 0; r < k; ++r) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) s += vmat(r, c) * vmat(r, c) / (sv(c) * sv(c));
    report.unit_std_errors[static_cast<std::size_t>(r)] = std::sqrt(s);
  }

  Polynomial poly(p, degree);
  for (std::size_t c = 0; c < basis.size(); ++c) poly.set(basis[c], beta(static_cast<Eigen::Index>(c)));
  return {std::move(poly), std::move(report)};
}

CoefficientDistance coefficient_distance(const Polynomial& a, const Polynomial& b) {
  if (a.variables() != b.variables()) {
    throw DimensionError("coefficient_distance: polynomials have " + std::to_string(a.variables()) +
                         " and " + std::to_string(b.variables()) + " variables");
  }
  Polynomial::TermMap support;
  for (const auto& [m, c] : a.terms()) support.emplace(m, 0.0);
  for (const auto& [m, c] : b.terms()) support.emplace(m, 0.0);

  CoefficientDistance out;
  double sq = 0.0;
  for (const auto& [m, unused] : support) {
    const double d = std::abs(a.coeff(m) - b.coeff(m));
    out.per_term.push_back({m, d});
    out.max_abs = std::max(out.max_abs, d);
    sq += d * d;
  }
  out.l2 = std::sqrt(sq);
  return out;
}

}  // namespace nnpoly
