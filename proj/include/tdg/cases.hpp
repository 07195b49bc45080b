#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdg/anisotropy.hpp"
#include "tdg/field.hpp"
#include "tdg/mesh.hpp"

namespace tdg {

// Rotated family: the 2x2 block
//   [l1^2 a^2 + l2^2 b^2, ab(l2 - l1); ab(l2 - l1), l1^2 b^2 + l2^2 a^2]
// and, for d = 3, a unit third axis. d = 1 gives A = 1.
struct TensorParameters {
  int dim = 2;
  double lambda1 = 0.5;
  double lambda2 = 1.0;
  double a = 0.70710678118654752440;
  double b = 0.70710678118654752440;
};

Eigen::MatrixXd family_matrix(const TensorParameters& params);

// lambda1 giving condition number rho for lambda2 = 1, a = b = 1/sqrt(2), d = 2.
double lambda1_for_rho(double rho);

enum class BoundaryMode { Dirichlet, Neumann, Mixed };
BoundaryMode parse_boundary_mode(const std::string& s);
const char* to_string(BoundaryMode m);
BoundarySpec make_boundary(int d, BoundaryMode mode);

// Scalar potential U with its derivatives; v = dU/dt, sigma = -A^{1/2} grad U.
struct ScalarPotential {
  std::function<double(const Eigen::VectorXd&, double)> value, dt, dtt;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> grad, grad_dt;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)> hessian;
};

struct ManufacturedCase {
  std::string id;
  int d = 1;
  TensorParameters params;
  std::shared_ptr<const Anisotropy> tensor;
  double c = 1.0;
  CoordinateFrame frame = CoordinateFrame::Physical;
  bool homogeneous = true;
  BoundaryMode boundary = BoundaryMode::Neumann;
  ScalarPotential potential;

  double U(const Eigen::VectorXd& x, double t) const { return potential.value(x, t); }
  double v(const Eigen::VectorXd& x, double t) const { return potential.dt(x, t); }
  Eigen::VectorXd sigma(const Eigen::VectorXd& x, double t) const;
  // c^{-2} v_t + div(A^{1/2} sigma) = c^{-2} U_tt - div(A grad U); zero for homogeneous cases.
  double f(const Eigen::VectorXd& x, double t) const;
  double v0(const Eigen::VectorXd& x) const { return v(x, 0.0); }
  Eigen::VectorXd sigma0(const Eigen::VectorXd& x) const { return sigma(x, 0.0); }
  double g_D(const Eigen::VectorXd& x, double t) const { return v(x, t); }
  // A^{1/2} sigma . n
  double g_N(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& n) const;

  DomainSpec domain() const { return DomainSpec::unit_box(d, frame, 1.0); }
  BoundarySpec boundary_spec() const { return make_boundary(d, boundary); }
  std::shared_ptr<const Field> exact_field() const;
};

// Ids: hom2d_hat, hom3d_hat, nonhom1d, nonhom2d, nonhom3d, patch, zero.
ManufacturedCase make_case(const std::string& id, const TensorParameters& params, BoundaryMode mode);
std::vector<std::string> case_ids();

// U(x, t) = prod_i sin(pi (B x)_i) sin(omega t).
ScalarPotential sine_potential(const Eigen::MatrixXd& B, double omega);
// U(x, t) = (B x)_1^2 + t^2 (c = 1 Trefftz when B = S).
ScalarPotential quadratic_potential(const Eigen::MatrixXd& B);

// Evaluates the case's (v, sigma) in physical coordinates.
class ExactField : public Field {
 public:
  explicit ExactField(const ManufacturedCase& mc) : mc_(mc) {}
  Traces sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const override;

 private:
  ManufacturedCase mc_;
};

}  // namespace tdg
