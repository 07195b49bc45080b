#include "tdg/cases.hpp"

#include <cmath>

#include "tdg/error.hpp"

namespace tdg {

Eigen::MatrixXd family_matrix(const TensorParameters& p) {
  if (p.dim < 1 || p.dim > 3) raise(ErrorKind::DimensionMismatch, "tensor family needs d in 1..3");
  if (p.dim == 1) return Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(p.dim, p.dim);
  const double l1 = p.lambda1, l2 = p.lambda2;
  A(0, 0) = l1 * l1 * p.a * p.a + l2 * l2 * p.b * p.b;
  A(0, 1) = A(1, 0) = p.a * p.b * (l2 - l1);
  A(1, 1) = l1 * l1 * p.b * p.b + l2 * l2 * p.a * p.a;
  return A;
}

double lambda1_for_rho(double rho) {
  if (!(rho >= 1)) raise(ErrorKind::InvalidArgument, "condition number must be >= 1");
  if (rho == 1) return 1.0;
  // (rho - 1) l^2 + (rho + 1) l - 2 = 0, positive root
  const double b = rho + 1;
  return (-b + std::sqrt(b * b + 8 * (rho - 1))) / (2 * (rho - 1));
}

BoundaryMode parse_boundary_mode(const std::string& s) {
  if (s == "dirichlet") return BoundaryMode::Dirichlet;
  if (s == "neumann") return BoundaryMode::Neumann;
  if (s == "mixed") return BoundaryMode::Mixed;
  raise(ErrorKind::InvalidBoundarySpec, "unknown boundary mode '" + s + "'");
}

const char* to_string(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::Dirichlet: return "dirichlet";
    case BoundaryMode::Neumann: return "neumann";
    case BoundaryMode::Mixed: return "mixed";
  }
  return "?";
}

BoundarySpec make_boundary(int d, BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::Dirichlet: return BoundarySpec::all(d, BoundaryType::Dirichlet);
    case BoundaryMode::Neumann: return BoundarySpec::all(d, BoundaryType::Neumann);
    case BoundaryMode::Mixed: return BoundarySpec::mixed(d);
  }
  return BoundarySpec::all(d, BoundaryType::Neumann);
}

ScalarPotential sine_potential(const Eigen::MatrixXd& B, double omega) {
  const int d = static_cast<int>(B.rows());
  // product of sin(pi y_k) over k, skipping up to two indices, with cos on the skipped ones
  auto part = [B, d](const Eigen::VectorXd& x, int i, int j) {
    const Eigen::VectorXd y = B * x;
    double r = 1;
    for (int k = 0; k < d; ++k) r *= (k == i || k == j) ? std::cos(M_PI * y(k)) : std::sin(M_PI * y(k));
    return r;
  };
  auto gradient = [B, d, part](const Eigen::VectorXd& x, double tf) {
    Eigen::VectorXd gy(d);
    for (int i = 0; i < d; ++i) gy(i) = M_PI * part(x, i, -1) * tf;
    return Eigen::VectorXd(B.transpose() * gy);
  };
  ScalarPotential u;
  u.value = [=](const Eigen::VectorXd& x, double t) { return part(x, -1, -1) * std::sin(omega * t); };
  u.dt = [=](const Eigen::VectorXd& x, double t) { return omega * part(x, -1, -1) * std::cos(omega * t); };
  u.dtt = [=](const Eigen::VectorXd& x, double t) { return -omega * omega * part(x, -1, -1) * std::sin(omega * t); };
  u.grad = [=](const Eigen::VectorXd& x, double t) { return gradient(x, std::sin(omega * t)); };
  u.grad_dt = [=](const Eigen::VectorXd& x, double t) { return gradient(x, omega * std::cos(omega * t)); };
  u.hessian = [=](const Eigen::VectorXd& x, double t) {
    const double tf = std::sin(omega * t);
    Eigen::MatrixXd H(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        H(i, j) = i == j ? -M_PI * M_PI * part(x, -1, -1) * tf : M_PI * M_PI * part(x, i, j) * tf;
    return Eigen::MatrixXd(B.transpose() * H * B);
  };
  return u;
}

ScalarPotential quadratic_potential(const Eigen::MatrixXd& B) {
  const int d = static_cast<int>(B.rows());
  ScalarPotential u;
  u.value = [=](const Eigen::VectorXd& x, double t) {
    const double y = B.row(0).dot(x);
    return y * y + t * t;
  };
  u.dt = [](const Eigen::VectorXd&, double t) { return 2 * t; };
  u.dtt = [](const Eigen::VectorXd&, double) { return 2.0; };
  u.grad = [=](const Eigen::VectorXd& x, double) {
    return Eigen::VectorXd(2.0 * B.row(0).dot(x) * B.row(0).transpose());
  };
  u.grad_dt = [=](const Eigen::VectorXd&, double) { return Eigen::VectorXd(Eigen::VectorXd::Zero(d)); };
  u.hessian = [=](const Eigen::VectorXd&, double) {
    return Eigen::MatrixXd(2.0 * B.row(0).transpose() * B.row(0));
  };
  return u;
}

namespace {

ScalarPotential zero_potential(int d) {
  ScalarPotential u;
  u.value = u.dt = u.dtt = [](const Eigen::VectorXd&, double) { return 0.0; };
  u.grad = u.grad_dt = [d](const Eigen::VectorXd&, double) { return Eigen::VectorXd(Eigen::VectorXd::Zero(d)); };
  u.hessian = [d](const Eigen::VectorXd&, double) { return Eigen::MatrixXd(Eigen::MatrixXd::Zero(d, d)); };
  return u;
}

}  // namespace

Eigen::VectorXd ManufacturedCase::sigma(const Eigen::VectorXd& x, double t) const {
  return -(tensor->power(0.5) * potential.grad(x, t));
}

double ManufacturedCase::f(const Eigen::VectorXd& x, double t) const {
  if (homogeneous) return 0.0;
  return potential.dtt(x, t) / (c * c) - (tensor->A().cwiseProduct(potential.hessian(x, t))).sum();
}

double ManufacturedCase::g_N(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& n) const {
  return (tensor->power(0.5) * sigma(x, t)).dot(n);
}

std::shared_ptr<const Field> ManufacturedCase::exact_field() const { return std::make_shared<ExactField>(*this); }

Traces ExactField::sample(int, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const {
  const int nq = static_cast<int>(x.cols());
  Traces r = Traces::zero(nq, mc_.d);
  const Eigen::MatrixXd half = mc_.tensor->power(0.5);
  for (int j = 0; j < nq; ++j) {
    const Eigen::VectorXd xj = x.col(j);
    r.v(j, 0) = mc_.potential.dt(xj, t(j));
    const Eigen::VectorXd s = -(half * mc_.potential.grad(xj, t(j)));
    for (int k = 0; k < mc_.d; ++k) r.sigma[k](j, 0) = s(k);
  }
  return r;
}

std::vector<std::string> case_ids() { return {"hom2d_hat", "hom3d_hat", "nonhom1d", "nonhom2d", "nonhom3d", "patch", "zero"}; }

ManufacturedCase make_case(const std::string& id, const TensorParameters& params_in, BoundaryMode mode) {
  ManufacturedCase mc;
  mc.id = id;
  mc.params = params_in;
  mc.boundary = mode;
  auto set_dim = [&](int d) {
    mc.d = d;
    mc.params.dim = d;
    mc.tensor = std::make_shared<const Anisotropy>(decompose(family_matrix(mc.params)));
  };
  const double pi = M_PI;
  if (id == "hom2d_hat" || id == "hom3d_hat") {
    set_dim(id == "hom2d_hat" ? 2 : 3);
    mc.frame = CoordinateFrame::Hat;
    mc.homogeneous = true;
    mc.potential = sine_potential(mc.tensor->S(), std::sqrt(static_cast<double>(mc.d)) * pi);
  } else if (id == "nonhom1d" || id == "nonhom2d" || id == "nonhom3d") {
    const int d = id == "nonhom1d" ? 1 : (id == "nonhom2d" ? 2 : 3);
    set_dim(d);
    mc.frame = CoordinateFrame::Physical;
    mc.homogeneous = false;
    const double omega = d == 1 ? std::sqrt(2.0) * pi : (d == 2 ? std::sqrt(3.0) * pi : 2 * pi);
    mc.potential = sine_potential(Eigen::MatrixXd::Identity(d, d), omega);
  } else if (id == "patch") {
    set_dim(params_in.dim);
    mc.frame = CoordinateFrame::Hat;
    mc.homogeneous = true;
    mc.potential = quadratic_potential(mc.tensor->S());
  } else if (id == "zero") {
    set_dim(params_in.dim);
    mc.frame = CoordinateFrame::Physical;
    mc.homogeneous = true;
    mc.potential = zero_potential(mc.d);
  } else {
    raise(ErrorKind::UnknownCase, "unknown case '" + id + "'");
  }
  return mc;
}

}  // namespace tdg
