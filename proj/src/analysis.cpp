#include "tdg/analysis.hpp"

#include <cmath>
#include <limits>

#include "tdg/error.hpp"

namespace tdg {

namespace {

double seminorm_sq(const SpaceTimeMesh& mesh, const Field& u, const FluxParameters& flux, const SeminormOptions& opts,
                   bool plus) {
  const Anisotropy& A = mesh.tensor();
  const int d = mesh.dim();
  const bool hat = opts.frame == CoordinateFrame::Hat;
  const int n = opts.quad_order > 0 ? opts.quad_order : 6;
  const double c2 = opts.c * opts.c;
  const double alpha = flux.alpha, beta = flux.beta;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd half = hat ? I : A.power(0.5);
  const Eigen::MatrixXd jump_w = hat ? I : A.power(0.5 + flux.delta);  // squared weight of the w jump
  const Eigen::MatrixXd avg_tau = hat ? I : A.power(0.5 - flux.delta);

  auto active = [&](int e) { return e >= 0 && (opts.slab_limit < 0 || mesh.element(e).slab <= opts.slab_limit); };
  double total = 0;
  for (const FaceRecord& f : mesh.faces()) {
    const bool am = active(f.minus), ap = active(f.plus);
    if (!am && !ap) continue;
    const QuadratureRule q = mapped_rule(f.origin, f.tangents, f.t0, f.t1, n, A.S());
    const Eigen::VectorXd& O = hat ? q.hat_weights : q.weights;
    const int nq = q.size();
    auto traces = [&](int e, bool on) {
      if (!on) return Traces::zero(nq, d);
      Traces t = u.sample(e, q.x, q.t);
      return hat ? t.transformed(A.P()) : t;
    };
    const Traces tm = traces(f.minus, am);
    const Traces tp = f.plus >= 0 ? traces(f.plus, ap) : Traces::zero(nq, d);
    auto sq = [&](const Traces& t) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(nq);
      for (int k = 0; k < d; ++k) s += t.sigma[k].col(0).cwiseAbs2();
      return s;
    };
    auto quad_form = [&](const Traces& t, const Eigen::MatrixXd& M) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(nq);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) s += M(i, k) * t.sigma[i].col(0).cwiseProduct(t.sigma[k].col(0));
      return s;
    };
    const Eigen::VectorXd nrm = hat ? f.hat_normal : f.normal;
    const Eigen::VectorXd m = half * nrm;
    Eigen::VectorXd integrand = Eigen::VectorXd::Zero(nq);
    switch (f.cls) {
      case FaceClass::SpaceLikeInternal: {
        Traces jmp = tm;
        jmp -= tp;
        integrand = 0.5 * jmp.v.col(0).cwiseAbs2() / c2 + 0.5 * sq(jmp);
        if (plus) integrand += 2.0 * tm.v.col(0).cwiseAbs2() / c2 + 2.0 * sq(tm);
        break;
      }
      case FaceClass::Initial:
      case FaceClass::Final:
        integrand = 0.5 * tm.v.col(0).cwiseAbs2() / c2 + 0.5 * sq(tm);
        break;
      case FaceClass::TimeLikeInternal: {
        Traces jmp = tm;
        jmp -= tp;
        Traces avg = tm;
        avg += tp;
        avg *= 0.5;
        const double kappa = nrm.dot(jump_w * nrm);
        integrand = alpha * kappa * jmp.v.col(0).cwiseAbs2() + beta * jmp.project(m).col(0).cwiseAbs2();
        if (plus) integrand += quad_form(avg, avg_tau) / alpha + avg.v.col(0).cwiseAbs2() / beta;
        break;
      }
      case FaceClass::Dirichlet: {
        const double kappa = nrm.dot(jump_w * nrm);
        integrand = alpha * kappa * tm.v.col(0).cwiseAbs2();
        if (plus) integrand += quad_form(tm, avg_tau) / alpha;
        break;
      }
      case FaceClass::Neumann: {
        const double bn = hat && opts.hat_neumann_scale ? beta * f.normal_scale : beta;
        integrand = bn * tm.project(m).col(0).cwiseAbs2();
        if (plus) integrand += tm.v.col(0).cwiseAbs2() / beta;
        break;
      }
    }
    total += O.dot(integrand);
  }
  return total;
}

}  // namespace

double dg_seminorm(const SpaceTimeMesh& mesh, const Field& u, const FluxParameters& flux, const SeminormOptions& opts) {
  return std::sqrt(std::max(0.0, seminorm_sq(mesh, u, flux, opts, false)));
}

double dg_plus_seminorm(const SpaceTimeMesh& mesh, const Field& u, const FluxParameters& flux,
                        const SeminormOptions& opts) {
  return std::sqrt(std::max(0.0, seminorm_sq(mesh, u, flux, opts, true)));
}

double transformation_stability_constant(const Anisotropy& A) {
  return A.det_power(0.25) * std::pow(A.lambda_min(), -0.25);
}

L2Error l2_error_at_time(const SpaceTimeMesh& mesh, const Field& approx, const Field& exact, double t, int quad_order) {
  const auto& nodes = mesh.time_nodes();
  int slab = -1;
  const double tol = 1e-12 * std::max(1.0, nodes.back());
  if (std::abs(t - nodes.front()) <= tol) slab = 0;
  for (int k = 1; k < static_cast<int>(nodes.size()) && slab < 0; ++k)
    if (std::abs(t - nodes[k]) <= tol) slab = k - 1;
  if (slab < 0) raise(ErrorKind::TimeNotOnSlabBoundary, "time " + std::to_string(t) + " is not a slab boundary");
  const int n = quad_order > 0 ? quad_order : 8;
  const int d = mesh.dim();
  double ev = 0, es = 0, nv = 0, ns = 0;
  for (const SpatialCell& cell : mesh.cells()) {
    const int e = mesh.element_id(cell.id, slab);
    const QuadratureRule q = mapped_rule(cell.center, cell.jacobian, t, t, n, mesh.tensor().S());
    const Traces a = approx.sample(e, q.x, q.t);
    const Traces x = exact.sample(e, q.x, q.t);
    ev += q.weights.dot((a.v - x.v).col(0).cwiseAbs2());
    nv += q.weights.dot(x.v.col(0).cwiseAbs2());
    for (int k = 0; k < d; ++k) {
      es += q.weights.dot((a.sigma[k] - x.sigma[k]).col(0).cwiseAbs2());
      ns += q.weights.dot(x.sigma[k].col(0).cwiseAbs2());
    }
  }
  L2Error r;
  r.abs_v = std::sqrt(ev);
  r.abs_sigma = std::sqrt(es);
  r.norm_v = std::sqrt(nv);
  r.norm_sigma = std::sqrt(ns);
  r.absolute_v = r.norm_v < 1e-14;
  r.absolute_sigma = r.norm_sigma < 1e-14;
  r.err_v = r.absolute_v ? r.abs_v : r.abs_v / r.norm_v;
  r.err_sigma = r.absolute_sigma ? r.abs_sigma : r.abs_sigma / r.norm_sigma;
  return r;
}

std::vector<double> rates(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size()) raise(ErrorKind::DimensionMismatch, "errors and mesh sizes differ in length");
  std::vector<double> r(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (!(h[k] < h[k - 1])) raise(ErrorKind::NonMonotoneH, "mesh sizes must decrease strictly");
    if (errors[k] == errors[k - 1]) {
      r[k] = 0;
      continue;
    }
    r[k] = std::log(errors[k - 1] / errors[k]) / std::log(h[k - 1] / h[k]);
  }
  return r;
}

std::vector<double> rho_rates(const std::vector<double>& errors, const std::vector<double>& rho) {
  if (errors.size() != rho.size()) raise(ErrorKind::DimensionMismatch, "errors and rho values differ in length");
  std::vector<double> r(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (errors[k] == errors[k - 1] || std::abs(std::log(rho[k] / rho[k - 1])) < 1e-14) {
      r[k] = 0;
      continue;
    }
    r[k] = std::log(errors[k] / errors[k - 1]) / std::log(rho[k] / rho[k - 1]);
  }
  return r;
}

}  // namespace tdg
