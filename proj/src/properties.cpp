#include "tdg/properties.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "tdg/analysis.hpp"
#include "tdg/assembly.hpp"
#include "tdg/cases.hpp"
#include "tdg/mesh.hpp"
#include "tdg/solver.hpp"
#include "tdg/trefftz_basis.hpp"

namespace tdg {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

PropertyResult result(const std::string& name, double value, double tol, bool passed, const std::string& detail = "") {
  PropertyResult r;
  r.name = name;
  r.value = value;
  r.tol = tol;
  r.passed = passed;
  r.detail = detail.empty() ? "worst " + fmt(value) + " vs tolerance " + fmt(tol) : detail;
  return r;
}

Eigen::MatrixXd suite_matrix(int d, const PropertyOptions& opts, std::mt19937_64& rng) {
  if (!opts.random_tensor) return Eigen::MatrixXd::Identity(d, d);
  return random_spd(d, opts.rho_max, rng);
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// 2 x 2 x 2 space-time mesh (space cells per axis x slabs), mixed boundary.
std::shared_ptr<const SpaceTimeMesh> small_mesh(int d, std::shared_ptr<const Anisotropy> A, CoordinateFrame frame) {
  return std::make_shared<const SpaceTimeMesh>(
      generate(DomainSpec::unit_box(d, frame), std::move(A), 1, 2, make_boundary(d, BoundaryMode::Mixed)));
}

SeminormOptions seminorm_options(Method m) {
  SeminormOptions so;
  if (m == Method::II) {
    so.frame = CoordinateFrame::Hat;
    so.hat_neumann_scale = true;
  }
  return so;
}

}  // namespace

Eigen::MatrixXd random_spd(int d, double rho_max, std::mt19937_64& rng) {
  if (!(rho_max >= 1)) raise(ErrorKind::InvalidArgument, "rho_max must be >= 1");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd lam(d);
  for (int i = 0; i < d; ++i) lam(i) = std::pow(rho_max, -u(rng));
  if (d > 1) {
    lam(0) = 1.0;
    lam(1) = 1.0 / rho_max;  // pin the extremes so rho = rho_max
  }
  Eigen::MatrixXd G(d, d);
  std::normal_distribution<double> g;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) G(i, j) = g(rng);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
  Eigen::MatrixXd A = Q * lam.asDiagonal() * Q.transpose();
  return 0.5 * (A + A.transpose());
}

PropertyResult check_eigen_reconstruction(const PropertyOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  double worst = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int k = 0; k < 50; ++k) {
      const Eigen::MatrixXd A = random_spd(d, opts.rho_max, rng);
      const Anisotropy t = decompose<double>(A);
      const Eigen::MatrixXd back = t.P().transpose() * t.lambda().asDiagonal() * t.P();
      const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
      worst = std::max(worst, (back - A).cwiseAbs().maxCoeff() / scale);
      worst = std::max(worst, (t.P() * t.P().transpose() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
    }
  }
  return result("eigen_reconstruction", worst, 1e-12, worst <= 1e-12);
}

PropertyResult check_transform_identities(const PropertyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int k = 0; k < 10; ++k) {
      const Anisotropy t = decompose<double>(random_spd(d, opts.rho_max, rng));
      auto random_poly = [&]() {
        Polynomial p(d);
        for (int kt = 0; kt <= 2; ++kt)
          for (int a0 = 0; a0 <= 2; ++a0)
            for (int a1 = 0; a1 <= (d > 1 ? 2 : 0); ++a1)
              for (int a2 = 0; a2 <= (d > 2 ? 1 : 0); ++a2) p += Polynomial::monomial(d, kt, {a0, a1, a2}, u(rng));
        return p;
      };
      const Polynomial v_hat = random_poly();
      std::vector<Polynomial> sigma_hat;
      for (int i = 0; i < d; ++i) sigma_hat.push_back(random_poly());
      Eigen::MatrixXd pts(d, 20);
      Eigen::VectorXd ts(20);
      for (int j = 0; j < 20; ++j) {
        for (int i = 0; i < d; ++i) pts(i, j) = u(rng);
        ts(j) = u(rng);
      }
      const TransformResidual r = tdg::check_transform_identities(t, v_hat, sigma_hat, pts, ts);
      worst = std::max({worst, r.gradient, r.divergence});
    }
  }
  return result("appendix_identities", worst, 1e-10, worst <= 1e-10);
}

PropertyResult check_trefftz_residuals(const PropertyOptions& opts) {
  (void)opts;
  int nonzero = 0, checked = 0;
  for (int d = 1; d <= 3; ++d) {
    const int pmax = d == 3 ? 3 : 4;
    auto I = std::make_shared<const Anisotropy>(decompose<double>(Eigen::MatrixXd::Identity(d, d)));
    for (int p = 0; p <= pmax; ++p) {
      for (const Polynomial& m : build_scalar_space(p, d).members) {
        ++checked;
        if (!wave_residual(m, 1.0).is_zero()) ++nonzero;
      }
      const TrefftzBasis basis(p, d, 1.0, I);
      for (int j = 0; j < basis.size(); ++j) {
        const FirstOrderResidual r = first_order_residual(basis.pair(j), 1.0);
        ++checked;
        bool ok = r.mass.is_zero();
        for (const Polynomial& q : r.momentum) ok = ok && q.is_zero();
        if (!ok) ++nonzero;
      }
    }
  }
  return result("trefftz_residuals", nonzero, 0, nonzero == 0,
                std::to_string(nonzero) + " of " + std::to_string(checked) + " members with nonzero residual coefficients");
}

PropertyResult check_mesh_lemmas(const PropertyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 2);
  const int d = opts.dim;
  double area = 0, spread = 0;
  for (int k = 0; k < 5; ++k) {
    auto A = std::make_shared<const Anisotropy>(decompose<double>(random_spd(d, opts.rho_max, rng)));
    double lo = 1e300, hi = 0;
    for (int l = 0; l <= 2; ++l) {
      const SpaceTimeMesh mesh =
          generate(DomainSpec::unit_box(d, CoordinateFrame::Hat), A, l, 1 << l, BoundarySpec::all(d, BoundaryType::Neumann));
      const GeometryReport g = verify_geometry_lemmas(mesh);
      area = std::max(area, g.area_ratio_max);
      lo = std::min(lo, g.diameter_ratio_max);
      hi = std::max(hi, g.diameter_ratio_max);
    }
    spread = std::max(spread, hi / lo - 1.0);
  }
  // area ratio is normalised by the bound, so <= 1; diameter ratios must not drift with the level
  const double worst = std::max(area - 1.0, spread);
  return result("mesh_lemmas", worst, 1e-9, area <= 1.0 + 1e-12 && spread <= 1e-9,
                "area ratio/bound " + fmt(area) + ", diameter ratio drift over levels " + fmt(spread));
}

PropertyResult check_coercivity(const PropertyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 3);
  const int d = opts.dim;
  auto A = std::make_shared<const Anisotropy>(decompose<double>(suite_matrix(d, opts, rng)));
  const FluxParameters flux;
  AssemblyOptions ao;
  ao.corrupt_flux_sign = opts.corrupt_flux_sign;
  double worst = 0;
  for (Method m : {Method::I, Method::II}) {
    auto mesh = small_mesh(d, A, CoordinateFrame::Physical);
    auto space = std::make_shared<const TrefftzSpace>(mesh, 2);
    const BlockSystem sys = assemble(*space, m, flux, ProblemData::zero(d), ao);
    for (int k = 0; k < opts.samples; ++k) {
      const Eigen::VectorXd u = random_vector(space->size(), rng);
      const double a = bilinear_form(sys, u, u);
      const DiscreteSolution uh(space, u, m);
      const double s = dg_seminorm(*mesh, uh, flux, seminorm_options(m));
      worst = std::max(worst, std::abs(a - s * s) / std::max(s * s, 1e-300));
    }
  }
  return result("coercivity_identity", worst, 1e-9, worst <= 1e-9);
}

PropertyResult check_continuity(const PropertyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 4);
  const int d = opts.dim;
  auto A = std::make_shared<const Anisotropy>(decompose<double>(suite_matrix(d, opts, rng)));
  const FluxParameters flux;
  auto mesh = small_mesh(d, A, CoordinateFrame::Physical);
  auto space = std::make_shared<const TrefftzSpace>(mesh, 1);
  AssemblyOptions ao;
  ao.corrupt_flux_sign = opts.corrupt_flux_sign;
  const BlockSystem sys = assemble(*space, Method::I, flux, ProblemData::zero(d), ao);
  double worst = 0;  // max of |A(u;w)| / (2 |u|_+ |w|) and the mirrored bound
  for (int k = 0; k < opts.continuity_pairs; ++k) {
    const Eigen::VectorXd u = random_vector(space->size(), rng), w = random_vector(space->size(), rng);
    const DiscreteSolution uh(space, u, Method::I), wh(space, w, Method::I);
    const double a = std::abs(bilinear_form(sys, u, w));
    const double b1 = 2 * dg_plus_seminorm(*mesh, uh, flux) * dg_seminorm(*mesh, wh, flux);
    const double b2 = 2 * dg_seminorm(*mesh, uh, flux) * dg_plus_seminorm(*mesh, wh, flux);
    worst = std::max({worst, a / b1, a / b2});
  }
  return result("continuity_bounds", worst, 1.0, worst <= 1.0 + 1e-12,
                "worst |A(u;w)| / bound = " + fmt(worst));
}

PropertyResult check_transformation_stability(const PropertyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 5);
  const int d = opts.dim;
  auto A = std::make_shared<const Anisotropy>(decompose<double>(suite_matrix(d, opts, rng)));
  const FluxParameters flux;  // delta = 1/2
  const double C = transformation_stability_constant(*A);
  auto mesh = small_mesh(d, A, CoordinateFrame::Physical);
  auto space = std::make_shared<const TrefftzSpace>(mesh, 2);
  SeminormOptions hat;
  hat.frame = CoordinateFrame::Hat;
  double worst = 0;  // max of |u|_DG / (C |u_hat|_DG)
  for (int k = 0; k < 50; ++k) {
    const DiscreteSolution uh(space, random_vector(space->size(), rng), Method::I);
    worst = std::max(worst, dg_seminorm(*mesh, uh, flux) / (C * dg_seminorm(*mesh, uh, flux, hat)));
  }
  return result("transformation_stability", worst, 1.0, worst <= 1.0 + 1e-12,
                "worst |u|_DG / (C |u_hat|_DG) = " + fmt(worst) + ", C = " + fmt(C));
}

PropertyResult check_patch_test(const PropertyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 6);
  const int d = opts.dim;
  TensorParameters tp;
  tp.dim = d;
  double worst = 0;
  for (BoundaryMode bm : {BoundaryMode::Dirichlet, BoundaryMode::Neumann, BoundaryMode::Mixed}) {
    ManufacturedCase mc = make_case("patch", tp, bm);
    mc.tensor = std::make_shared<const Anisotropy>(decompose<double>(suite_matrix(d, opts, rng)));
    mc.potential = quadratic_potential(mc.tensor->S());
    auto exact = mc.exact_field();
    for (Method m : {Method::I, Method::II}) {
      auto mesh = std::make_shared<const SpaceTimeMesh>(generate(mc.domain(), mc.tensor, 1, 2, mc.boundary_spec()));
      auto space = std::make_shared<const TrefftzSpace>(mesh, 1);
      const BlockSystem sys = assemble(*space, m, FluxParameters{}, ProblemData::from_case(mc));
      const DiscreteSolution uh = solve(space, sys, m);
      for (int e = 0; e < mesh->num_elements(); ++e) {
        const QuadratureRule q = rule_for(*mesh, {EntityKind::Element, e}, 3);
        Traces diff = uh.sample(e, q.x, q.t);
        diff -= exact->sample(e, q.x, q.t);
        worst = std::max(worst, diff.v.cwiseAbs().maxCoeff());
        for (const auto& s : diff.sigma) worst = std::max(worst, s.cwiseAbs().maxCoeff());
      }
    }
  }
  return result("patch_test", worst, 1e-9, worst <= 1e-9);
}

std::vector<PropertyResult> run_property_suite(const PropertyOptions& opts) {
  return {check_eigen_reconstruction(opts), check_transform_identities(opts), check_trefftz_residuals(opts),
          check_mesh_lemmas(opts),          check_coercivity(opts),           check_continuity(opts),
          check_transformation_stability(opts), check_patch_test(opts)};
}

}  // namespace tdg
