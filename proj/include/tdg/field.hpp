#pragma once

#include <memory>

#include <Eigen/Dense>

#include "tdg/traces.hpp"

namespace tdg {

// A (possibly element-wise discontinuous) pair (v, sigma). Sampling returns
// one column: v is nq x 1 and sigma[k] is nq x 1.
class Field {
 public:
  virtual ~Field() = default;
  virtual Traces sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const = 0;
};

class ZeroField : public Field {
 public:
  explicit ZeroField(int d) : d_(d) {}
  Traces sample(int, const Eigen::MatrixXd& x, const Eigen::VectorXd&) const override {
    return Traces::zero(static_cast<int>(x.cols()), d_);
  }

 private:
  int d_;
};

// a - b
class DifferenceField : public Field {
 public:
  DifferenceField(std::shared_ptr<const Field> a, std::shared_ptr<const Field> b) : a_(std::move(a)), b_(std::move(b)) {}
  Traces sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const override {
    Traces r = a_->sample(element, x, t);
    r -= b_->sample(element, x, t);
    return r;
  }

 private:
  std::shared_ptr<const Field> a_, b_;
};

// a + b
class SumField : public Field {
 public:
  SumField(std::shared_ptr<const Field> a, std::shared_ptr<const Field> b) : a_(std::move(a)), b_(std::move(b)) {}
  Traces sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const override {
    Traces r = a_->sample(element, x, t);
    r += b_->sample(element, x, t);
    return r;
  }

 private:
  std::shared_ptr<const Field> a_, b_;
};

}  // namespace tdg
