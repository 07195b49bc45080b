#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdg/error.hpp"

namespace tdg {

// Exponents of t^k x_1^a_1 ... x_d^a_d; slot 0 is the time exponent.
using Exponents = std::array<int, 4>;

inline int total_degree(const Exponents& e) { return e[0] + e[1] + e[2] + e[3]; }

// Derivative direction: time, or spatial index 0..d-1.
struct Axis {
  int slot;  // 0 = time, i+1 = x_i
  static Axis time() { return {0}; }
  static Axis space(int i) { return {i + 1}; }
};

template <typename Scalar>
class SpaceTimePolynomial {
 public:
  using Terms = std::map<Exponents, Scalar>;
  static constexpr int kMaxDegree = 32;

  explicit SpaceTimePolynomial(int dim = 1) : dim_(dim) {
    if (dim < 1 || dim > 3) raise(ErrorKind::DimensionMismatch, "polynomial dimension must be 1, 2 or 3");
  }

  static SpaceTimePolynomial constant(int dim, Scalar c) {
    SpaceTimePolynomial p(dim);
    p.add_term(Exponents{0, 0, 0, 0}, c);
    return p;
  }

  // Monomial t^k x^alpha; alpha holds d entries.
  static SpaceTimePolynomial monomial(int dim, int k, const std::array<int, 3>& alpha, Scalar c = Scalar(1)) {
    SpaceTimePolynomial p(dim);
    Exponents e{k, 0, 0, 0};
    for (int i = 0; i < dim; ++i) e[i + 1] = alpha[i];
    p.add_term(e, c);
    return p;
  }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // -1 for the zero polynomial.
  int degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) deg = std::max(deg, total_degree(e));
    return deg;
  }

  Scalar coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Exponents& e, Scalar c) {
    for (int i = dim_ + 1; i < 4; ++i)
      if (e[i] != 0) raise(ErrorKind::DimensionMismatch, "exponent set on an unused spatial axis");
    if (total_degree(e) > kMaxDegree) raise(ErrorKind::DegreeOverflow, "polynomial degree exceeds 32");
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x, Scalar t) const {
    if (x.size() != dim_) raise(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
    const int deg = std::max(degree(), 0);
    // powers[slot][j] = coordinate^j
    Eigen::Matrix<Scalar, 4, Eigen::Dynamic> powers(4, deg + 1);
    for (int s = 0; s < 4; ++s) {
      const Scalar base = s == 0 ? t : (s <= dim_ ? Scalar(x(s - 1)) : Scalar(0));
      powers(s, 0) = Scalar(1);
      for (int j = 1; j <= deg; ++j) powers(s, j) = powers(s, j - 1) * base;
    }
    Scalar sum(0);
    for (const auto& [e, c] : terms_) sum += c * powers(0, e[0]) * powers(1, e[1]) * powers(2, e[2]) * powers(3, e[3]);
    return sum;
  }

  SpaceTimePolynomial& operator+=(const SpaceTimePolynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  SpaceTimePolynomial& operator-=(const SpaceTimePolynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  SpaceTimePolynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      it = it->second == Scalar(0) ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend SpaceTimePolynomial operator+(SpaceTimePolynomial a, const SpaceTimePolynomial& b) { return a += b; }
  friend SpaceTimePolynomial operator-(SpaceTimePolynomial a, const SpaceTimePolynomial& b) { return a -= b; }
  friend SpaceTimePolynomial operator*(SpaceTimePolynomial a, Scalar s) { return a *= s; }
  friend SpaceTimePolynomial operator*(Scalar s, SpaceTimePolynomial a) { return a *= s; }

  friend SpaceTimePolynomial operator*(const SpaceTimePolynomial& a, const SpaceTimePolynomial& b) {
    a.check_dim(b);
    SpaceTimePolynomial r(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e;
        for (int s = 0; s < 4; ++s) e[s] = ea[s] + eb[s];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend bool operator==(const SpaceTimePolynomial& a, const SpaceTimePolynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

 private:
  void check_dim(const SpaceTimePolynomial& o) const {
    if (o.dim_ != dim_) raise(ErrorKind::DimensionMismatch, "polynomial dimensions differ");
  }

  int dim_;
  Terms terms_;
};

using Polynomial = SpaceTimePolynomial<double>;

template <typename Scalar>
SpaceTimePolynomial<Scalar> derivative(const SpaceTimePolynomial<Scalar>& p, Axis axis) {
  if (axis.slot < 0 || axis.slot > p.dim()) raise(ErrorKind::DimensionMismatch, "derivative axis out of range");
  SpaceTimePolynomial<Scalar> r(p.dim());
  for (const auto& [e, c] : p.terms()) {
    if (e[axis.slot] == 0) continue;
    Exponents f = e;
    f[axis.slot] -= 1;
    r.add_term(f, c * Scalar(e[axis.slot]));
  }
  return r;
}

// q(x, t) = p(M x, t).
template <typename Scalar, typename Derived>
SpaceTimePolynomial<Scalar> compose_linear(const SpaceTimePolynomial<Scalar>& p, const Eigen::MatrixBase<Derived>& M) {
  const int d = p.dim();
  if (M.rows() != d || M.cols() != d) raise(ErrorKind::DimensionMismatch, "compose_linear needs a d x d matrix");
  const int deg = std::max(p.degree(), 0);
  // rows[i][j] = ((M x)_i)^j
  std::array<std::vector<SpaceTimePolynomial<Scalar>>, 3> row_pow;
  for (int i = 0; i < d; ++i) {
    SpaceTimePolynomial<Scalar> lin(d);
    for (int j = 0; j < d; ++j) {
      std::array<int, 3> a{0, 0, 0};
      a[j] = 1;
      lin += SpaceTimePolynomial<Scalar>::monomial(d, 0, a, Scalar(M(i, j)));
    }
    row_pow[i].push_back(SpaceTimePolynomial<Scalar>::constant(d, Scalar(1)));
    for (int j = 1; j <= deg; ++j) row_pow[i].push_back(row_pow[i].back() * lin);
  }
  SpaceTimePolynomial<Scalar> q(d);
  for (const auto& [e, c] : p.terms()) {
    SpaceTimePolynomial<Scalar> term = SpaceTimePolynomial<Scalar>::monomial(d, e[0], {0, 0, 0}, c);
    for (int i = 0; i < d; ++i)
      if (e[i + 1] > 0) term = term * row_pow[i][e[i + 1]];
    q += term;
  }
  return q;
}

}  // namespace tdg
