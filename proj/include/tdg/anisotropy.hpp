#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tdg/error.hpp"
#include "tdg/polynomial.hpp"

namespace tdg {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SymmetricEigen {
  VectorX<Scalar> values;   // ascending
  MatrixX<Scalar> vectors;  // columns are eigenvectors
  int sweeps = 0;
};

// Cyclic Jacobi on a symmetric matrix. Stops once the off-diagonal Frobenius
// norm drops below tol times the full norm.
template <typename Scalar>
SymmetricEigen<Scalar> jacobi_eigen(MatrixX<Scalar> a, Scalar tol = Scalar(1e-14), int max_sweeps = 100) {
  using std::abs;
  using std::sqrt;
  const int n = static_cast<int>(a.rows());
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar total = a.norm();
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    Scalar off(0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += Scalar(2) * a(i, j) * a(i, j);
    if (sqrt(off) <= tol * total) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * a(p, q));
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (int k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  SymmetricEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

// A = P^T diag(lambda) P with ascending lambda, det P = +1, S = Lambda^{-1/2} P.
template <typename Scalar>
class AnisotropyTensor {
 public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  AnisotropyTensor() = default;

  int dim() const { return static_cast<int>(A_.rows()); }
  const Matrix& A() const { return A_; }
  const Matrix& P() const { return P_; }
  const Vector& lambda() const { return lambda_; }
  const Matrix& S() const { return S_; }
  const Matrix& S_inv() const { return S_inv_; }
  Scalar lambda_min() const { return lambda_(0); }
  Scalar lambda_max() const { return lambda_(dim() - 1); }
  Scalar rho() const { return lambda_max() / lambda_min(); }
  // Factor the caller's matrix was divided by (1 when built without normalization).
  Scalar scale() const { return scale_; }

  // P^T Lambda^s P
  Matrix power(Scalar s) const {
    using std::pow;
    Vector ls(dim());
    for (int i = 0; i < dim(); ++i) ls(i) = pow(lambda_(i), s);
    return P_.transpose() * ls.asDiagonal() * P_;
  }

  // det(Lambda^s)
  Scalar det_power(Scalar s) const {
    using std::pow;
    Scalar r(1);
    for (int i = 0; i < dim(); ++i) r *= pow(lambda_(i), s);
    return r;
  }

  template <typename Derived>
  Vector to_hat(const Eigen::MatrixBase<Derived>& x) const { return S_ * x; }
  template <typename Derived>
  Vector from_hat(const Eigen::MatrixBase<Derived>& xh) const { return S_inv_ * xh; }

  // sigma = P^T sigma_hat; v is unchanged by the scaling.
  template <typename Derived>
  Vector pull_sigma(const Eigen::MatrixBase<Derived>& sigma_hat) const { return P_.transpose() * sigma_hat; }
  template <typename Derived>
  Vector push_sigma(const Eigen::MatrixBase<Derived>& sigma) const { return P_ * sigma; }

  // Unit hat normal S^{-T} n / |S^{-T} n| and the length |Lambda^{1/2} P n|.
  template <typename Derived>
  std::pair<Vector, Scalar> hat_normal(const Eigen::MatrixBase<Derived>& n) const {
    Vector m = lambda_.cwiseSqrt().asDiagonal() * (P_ * n);
    const Scalar mu = m.norm();
    return {m / mu, mu};
  }

  static AnisotropyTensor from_factors(const Matrix& A, const Matrix& P, const Vector& lambda, Scalar scale) {
    AnisotropyTensor t;
    t.A_ = A;
    t.P_ = P;
    t.lambda_ = lambda;
    t.scale_ = scale;
    t.S_ = lambda.cwiseSqrt().cwiseInverse().asDiagonal() * P;
    t.S_inv_ = P.transpose() * lambda.cwiseSqrt().asDiagonal();
    return t;
  }

 private:
  Matrix A_, P_, S_, S_inv_;
  Vector lambda_;
  Scalar scale_ = Scalar(1);
};

using Anisotropy = AnisotropyTensor<double>;

namespace detail {
template <typename Scalar>
void check_symmetric(const MatrixX<Scalar>& A) {
  using std::abs;
  if (A.rows() != A.cols() || A.rows() < 1 || A.rows() > 3)
    raise(ErrorKind::DimensionMismatch, "anisotropy matrix must be square with d in {1,2,3}");
  const Scalar scale = std::max(Scalar(1), A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
    raise(ErrorKind::NotSymmetric, "anisotropy matrix is not symmetric");
}
}  // namespace detail

template <typename Scalar>
AnisotropyTensor<Scalar> decompose(const MatrixX<Scalar>& A_in, Scalar scale = Scalar(1)) {
  using std::abs;
  detail::check_symmetric(A_in);
  const MatrixX<Scalar> A = Scalar(0.5) * (A_in + A_in.transpose());
  SymmetricEigen<Scalar> eig = jacobi_eigen<Scalar>(A);
  const int d = static_cast<int>(A.rows());
  const Scalar top = eig.values.cwiseAbs().maxCoeff();
  if (!(eig.values(0) > Scalar(1e-14) * top) || top == Scalar(0))
    raise(ErrorKind::NotPositiveDefinite, "anisotropy matrix is not positive definite");
  MatrixX<Scalar> V = eig.vectors;
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      if (abs(V(i, k)) > Scalar(1e-12)) {
        if (V(i, k) < 0) V.col(k) = -V.col(k);
        break;
      }
    }
  }
  if (V.determinant() < 0) V.col(d - 1) = -V.col(d - 1);
  return AnisotropyTensor<Scalar>::from_factors(A, V.transpose(), eig.values, scale);
}

// A / lambda_max(A) together with lambda_max(A).
template <typename Scalar>
std::pair<MatrixX<Scalar>, Scalar> normalize(const MatrixX<Scalar>& A) {
  AnisotropyTensor<Scalar> t = decompose<Scalar>(A);
  const Scalar s = t.lambda_max();
  return {A / s, s};
}

// decompose(normalize(A)), keeping the scale factor.
template <typename Scalar>
AnisotropyTensor<Scalar> make_normalized_tensor(const MatrixX<Scalar>& A) {
  auto [An, s] = normalize<Scalar>(A);
  return decompose<Scalar>(An, s);
}

struct TransformResidual {
  double gradient = 0;    // max |A^{1/2} grad v - P^T grad_hat v_hat|
  double divergence = 0;  // max |div(A^{1/2} sigma) - div_hat sigma_hat|
};

// Physical fields v(x,t) = v_hat(Sx,t), sigma = P^T sigma_hat(Sx,t) are built by
// composition and differentiated exactly; the hat-side expressions are
// evaluated at Sx.
template <typename Scalar>
TransformResidual check_transform_identities(const AnisotropyTensor<Scalar>& tensor,
                                             const SpaceTimePolynomial<Scalar>& v_hat,
                                             const std::vector<SpaceTimePolynomial<Scalar>>& sigma_hat,
                                             const MatrixX<Scalar>& points, const VectorX<Scalar>& times) {
  using std::abs;
  const int d = tensor.dim();
  if (v_hat.dim() != d || static_cast<int>(sigma_hat.size()) != d || points.rows() != d)
    raise(ErrorKind::DimensionMismatch, "transform identity inputs have inconsistent dimensions");
  const MatrixX<Scalar>& S = tensor.S();
  const MatrixX<Scalar>& P = tensor.P();
  const MatrixX<Scalar> Ah = tensor.power(Scalar(0.5));

  const SpaceTimePolynomial<Scalar> v = compose_linear(v_hat, S);
  std::vector<SpaceTimePolynomial<Scalar>> grad_v, grad_hat_v;
  for (int i = 0; i < d; ++i) {
    grad_v.push_back(derivative(v, Axis::space(i)));
    grad_hat_v.push_back(derivative(v_hat, Axis::space(i)));
  }
  std::vector<SpaceTimePolynomial<Scalar>> comp;
  for (int i = 0; i < d; ++i) comp.push_back(compose_linear(sigma_hat[i], S));
  // (A^{1/2} sigma)_j = sum_i (A^{1/2} P^T)_{ji} sigma_hat_i(Sx)
  const MatrixX<Scalar> B = Ah * P.transpose();
  SpaceTimePolynomial<Scalar> div(d), div_hat(d);
  for (int j = 0; j < d; ++j) {
    SpaceTimePolynomial<Scalar> flux(d);
    for (int i = 0; i < d; ++i) flux += comp[i] * B(j, i);
    div += derivative(flux, Axis::space(j));
    div_hat += derivative(sigma_hat[j], Axis::space(j));
  }

  TransformResidual r;
  for (int q = 0; q < points.cols(); ++q) {
    const VectorX<Scalar> x = points.col(q);
    const VectorX<Scalar> xh = S * x;
    const Scalar t = times(q);
    VectorX<Scalar> gv(d), ghv(d);
    for (int i = 0; i < d; ++i) {
      gv(i) = grad_v[i](x, t);
      ghv(i) = grad_hat_v[i](xh, t);
    }
    r.gradient = std::max<double>(r.gradient, (Ah * gv - P.transpose() * ghv).cwiseAbs().maxCoeff());
    r.divergence = std::max<double>(r.divergence, abs(div(x, t) - div_hat(xh, t)));
  }
  return r;
}

}  // namespace tdg
