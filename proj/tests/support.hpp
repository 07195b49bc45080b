#pragma once

#include <functional>
#include <memory>
#include <random>

#include <Eigen/Dense>

#include "tdg/anisotropy.hpp"
#include "tdg/properties.hpp"

namespace tdg::test {

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline std::shared_ptr<const Anisotropy> identity_tensor(int d) {
  return std::make_shared<const Anisotropy>(decompose<double>(Eigen::MatrixXd::Identity(d, d)));
}

inline std::shared_ptr<const Anisotropy> tensor_of(const Eigen::MatrixXd& A) {
  return std::make_shared<const Anisotropy>(make_normalized_tensor<double>(A));
}

// central differences, step h
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                   double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

inline double fd_dt(const std::function<double(double)>& f, double t, double h = 1e-5) {
  return (f(t + h) - f(t - h)) / (2 * h);
}

// fourth-order central differences, for smooth non-polynomial fields
inline double fd4(const std::function<double(double)>& f, double s, double h = 1e-3) {
  return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
}

inline Eigen::VectorXd fd4_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                    double h = 1e-3) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i)
    g(i) = fd4([&](double s) {
      Eigen::VectorXd y = x;
      y(i) = s;
      return f(y);
    }, x(i), h);
  return g;
}

}  // namespace tdg::test
