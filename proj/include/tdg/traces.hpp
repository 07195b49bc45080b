#pragma once

#include <vector>

#include <Eigen/Dense>

namespace tdg {

// Values of a family of fields at nq points: v is nq x n, sigma[k] is the
// k-th component, also nq x n. Columns index the fields.
struct Traces {
  Eigen::MatrixXd v;
  std::vector<Eigen::MatrixXd> sigma;

  int points() const { return static_cast<int>(v.rows()); }
  int cols() const { return static_cast<int>(v.cols()); }
  int dim() const { return static_cast<int>(sigma.size()); }

  // sum_k m_k sigma[k]
  Eigen::MatrixXd project(const Eigen::VectorXd& m) const {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(v.rows(), v.cols());
    for (int k = 0; k < dim(); ++k) r += m(k) * sigma[k];
    return r;
  }

  // sigma <- M sigma pointwise (used for P sigma on the hat side).
  Traces transformed(const Eigen::MatrixXd& M) const {
    Traces out;
    out.v = v;
    out.sigma.assign(dim(), Eigen::MatrixXd::Zero(v.rows(), v.cols()));
    for (int i = 0; i < dim(); ++i)
      for (int k = 0; k < dim(); ++k)
        if (M(i, k) != 0.0) out.sigma[i] += M(i, k) * sigma[k];
    return out;
  }

  Traces& operator-=(const Traces& o) {
    v -= o.v;
    for (int k = 0; k < dim(); ++k) sigma[k] -= o.sigma[k];
    return *this;
  }
  Traces& operator+=(const Traces& o) {
    v += o.v;
    for (int k = 0; k < dim(); ++k) sigma[k] += o.sigma[k];
    return *this;
  }
  Traces& operator*=(double s) {
    v *= s;
    for (auto& m : sigma) m *= s;
    return *this;
  }

  static Traces zero(int nq, int d, int n = 1) {
    Traces t;
    t.v = Eigen::MatrixXd::Zero(nq, n);
    t.sigma.assign(d, Eigen::MatrixXd::Zero(nq, n));
    return t;
  }

  Traces times(const Eigen::VectorXd& coeff) const {
    Traces t;
    t.v = v * coeff;
    for (const auto& m : sigma) t.sigma.push_back(m * coeff);
    return t;
  }
};

}  // namespace tdg
