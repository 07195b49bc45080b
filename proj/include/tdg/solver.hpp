#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "tdg/assembly.hpp"
#include "tdg/field.hpp"

namespace tdg {

struct SolveOptions {
  int dense_limit = 4000;  // blocks up to this size use dense LU
  bool reuse_factorization = true;
  double singular_tol = 1e-14;
};

struct SolveReport {
  std::vector<double> residuals;  // ||D x - b|| / ||b|| per slab
  int factorizations = 0;
};

// LU of one diagonal block, dense with partial pivoting or sparse.
class BlockFactor {
 public:
  void factor(const Eigen::SparseMatrix<double>& A, int slab, const SolveOptions& opts);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool dense() const { return dense_; }

 private:
  bool dense_ = true;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> slu_;
};

// Forward substitution over slabs; diagonal blocks equal to the previous
// one reuse its factorization.
Eigen::VectorXd solve_blocks(const BlockSystem& sys, const std::vector<Eigen::VectorXd>& rhs, SolveReport* report = nullptr,
                             const SolveOptions& opts = {});

class DiscreteSolution : public Field {
 public:
  DiscreteSolution(std::shared_ptr<const TrefftzSpace> space, Eigen::VectorXd coeffs, Method method)
      : space_(std::move(space)), coeffs_(std::move(coeffs)), method_(method) {}

  const TrefftzSpace& space() const { return *space_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  Method method() const { return method_; }
  Eigen::VectorXd block(int element) const { return coeffs_.segment(space_->offset(element), space_->local_size()); }

  // Method II values are the mapped-back pair (v_hat, P^T sigma_hat), which
  // is what the shared basis evaluates to in physical coordinates.
  Traces sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const override;

 private:
  std::shared_ptr<const TrefftzSpace> space_;
  Eigen::VectorXd coeffs_;
  Method method_;
};

DiscreteSolution solve(std::shared_ptr<const TrefftzSpace> space, const BlockSystem& sys, Method method,
                       SolveReport* report = nullptr, const SolveOptions& opts = {});

// Piecewise Q_q particular solution on the global elements.
class ParticularSolution : public Field {
 public:
  struct Piece {
    Eigen::VectorXd coeffs;  // (d+1) (q+1)^{d+1}: v block, then sigma_k blocks
    Eigen::VectorXd center;
    Eigen::MatrixXd jacobian_inv;
    double t_mid = 0, ht = 1;
  };

  ParticularSolution(int d, int q, std::vector<Piece> pieces) : space_(d, q), pieces_(std::move(pieces)) {}

  int degree() const { return space_.degree(); }
  int num_elements() const { return static_cast<int>(pieces_.size()); }
  const Piece& piece(int e) const { return pieces_.at(e); }
  Traces sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const override;

 private:
  LegendreSpace space_;
  std::vector<Piece> pieces_;
};

struct ParticularOptions {
  LocalMode mode = LocalMode::Overlapping;
  double gamma = 1.0;
  int patch = 1;  // overlapping: cells per axis of K*
  int quad_order = 0;  // 0 picks q + 3
  SolveOptions solve;
};

ParticularSolution solve_particular(const SpaceTimeMesh& mesh, int q,
                                    const std::function<double(const Eigen::VectorXd&, double)>& f,
                                    const FluxParameters& flux, double c, const ParticularOptions& opts = {},
                                    SolveReport* report = nullptr);

}  // namespace tdg
