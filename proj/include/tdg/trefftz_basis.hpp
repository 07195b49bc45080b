#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "tdg/anisotropy.hpp"
#include "tdg/polynomial.hpp"
#include "tdg/traces.hpp"

namespace tdg {

long long binomial(int n, int k);

// dim of the scalar Trefftz space of degree p in d space dimensions.
long long dim_scalar(int p, int d);

struct ScalarTrefftzSpace {
  int d = 1;
  int p = 0;
  double c = 1.0;
  std::vector<Polynomial> members;
};

// Members are seeded by monomials at k = 0 (|alpha| <= p) and k = 1
// (|alpha| <= p - 1). For c = 1 every coefficient is an integer, so the
// wave residual vanishes exactly.
ScalarTrefftzSpace build_scalar_space(int p, int d, double c = 1.0);

// -Laplace(u) + c^{-2} u_tt
Polynomial wave_residual(const Polynomial& u, double c);

struct TrefftzPair {
  Polynomial w;
  std::vector<Polynomial> tau;
};

struct FirstOrderResidual {
  std::vector<Polynomial> momentum;  // grad w + d/dt tau
  Polynomial mass;                   // div tau + c^{-2} d/dt w
};

FirstOrderResidual first_order_residual(const TrefftzPair& pair, double c);

// Maps hat coordinates to the unit-speed local variables of an element:
// eta = (xh - hat_center) / half_width, s = c (t - t_mid) / half_width.
struct LocalFrame {
  Eigen::VectorXd hat_center;
  double half_width = 1.0;
  double t_mid = 0.0;
};

struct PairValue {
  double w = 0;
  Eigen::VectorXd tau;
};

class TrefftzBasis {
 public:
  TrefftzBasis(int p, int d, double c, std::shared_ptr<const Anisotropy> tensor);

  int degree() const { return p_; }
  int dim() const { return d_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  double wave_speed() const { return c_; }
  const Anisotropy& tensor() const { return *tensor_; }
  std::shared_ptr<const Anisotropy> tensor_ptr() const { return tensor_; }

  // Unscaled pairs in unit-speed local variables (integer coefficients).
  const TrefftzPair& pair(int j) const;
  // Diagonal rescaling applied to pair j in all evaluations.
  double scale(int j) const;

  LocalFrame identity_frame() const;

  // Scaled values of (w, tau_hat) at a hat point.
  PairValue evaluate_hat(int j, const Eigen::VectorXd& xh, double t, const LocalFrame& frame) const;
  // Scaled values of (w, P^T tau_hat(Sx, t)) at a physical point.
  PairValue evaluate_physical(int j, const Eigen::VectorXd& x, double t, const LocalFrame& frame) const;
  PairValue evaluate_physical(int j, const Eigen::VectorXd& x, double t) const {
    return evaluate_physical(j, x, t, identity_frame());
  }

  // Physical traces of all pairs at the columns of x (d x nq).
  Traces tabulate(const LocalFrame& frame, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const;

 private:
  Eigen::MatrixXd monomial_table(const LocalFrame& frame, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const;

  int p_, d_;
  double c_;
  std::shared_ptr<const Anisotropy> tensor_;
  std::vector<TrefftzPair> pairs_;
  std::vector<double> scale_;
  std::vector<Exponents> monomials_;
  Eigen::MatrixXd coeff_w_;                // nmon x size, scaled
  std::vector<Eigen::MatrixXd> coeff_tau_;  // d of nmon x size, scaled
};

TrefftzBasis build_first_order_basis(int p, int d, double c, std::shared_ptr<const Anisotropy> tensor);

// Smallest singular value of the column-normalized coefficient matrix.
double min_singular_value(const std::vector<Polynomial>& members);

}  // namespace tdg
