#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include <Eigen/SparseLU>

#include "support.hpp"
#include "tdg/analysis.hpp"
#include "tdg/assembly.hpp"
#include "tdg/solver.hpp"

using namespace tdg;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::shared_ptr<const SpaceTimeMesh> unit_mesh(int d, std::shared_ptr<const Anisotropy> A, int level, int steps,
                                               const BoundarySpec& b, CoordinateFrame fr = CoordinateFrame::Physical) {
  return std::make_shared<const SpaceTimeMesh>(generate(DomainSpec::unit_box(d, fr), std::move(A), level, steps, b));
}

SeminormOptions options_for(Method m) {
  SeminormOptions so;
  if (m == Method::II) {
    so.frame = CoordinateFrame::Hat;
    so.hat_neumann_scale = true;
  }
  return so;
}

TensorParameters family(double l1) {
  TensorParameters tp;
  tp.lambda1 = l1;
  return tp;
}

double max_entry(const Eigen::SparseMatrix<double>& m) {
  double r = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

// Field from a scalar potential U in 1D with A = 1: v = U_t, sigma = -U_x.
class PotentialField : public Field {
 public:
  explicit PotentialField(Polynomial U) : vt_(derivative(U, Axis::time())), sx_(derivative(U, Axis::space(0)) * -1.0) {}
  Traces sample(int, const MatrixXd& x, const VectorXd& t) const override {
    Traces r = Traces::zero(static_cast<int>(x.cols()), 1);
    for (int j = 0; j < x.cols(); ++j) {
      r.v(j, 0) = vt_(x.col(j), t(j));
      r.sigma[0](j, 0) = sx_(x.col(j), t(j));
    }
    return r;
  }
  double v(const VectorXd& x, double t) const { return vt_(x, t); }
  double s(const VectorXd& x, double t) const { return sx_(x, t); }

 private:
  Polynomial vt_, sx_;
};

}  // namespace

TEST_CASE("flux parameters validate") {
  FluxParameters f;
  CHECK(f.alpha == 1.0);
  CHECK(f.beta == 1.0);
  CHECK(f.delta == 0.5);
  f.alpha = 0;
  CHECK_THROWS_AS(f.validate(), Error);
}

TEST_CASE("single 1D element: A((1,0);(1,0)) = 3 = |(1,0)|_DG^2") {
  auto mesh = unit_mesh(1, test::identity_tensor(1), 0, 1, BoundarySpec::all(1, BoundaryType::Dirichlet));
  auto space = std::make_shared<const TrefftzSpace>(mesh, 0);
  const BlockSystem sys = assemble_method1(*space, FluxParameters{}, ProblemData::zero(1));
  MatrixXd x(1, 1);
  x << 0.3;
  VectorXd t(1);
  t << 0.6;
  VectorXd u;
  for (int j = 0; j < space->local_size(); ++j) {
    const DiscreteSolution e(space, VectorXd::Unit(space->size(), j), Method::I);
    const Traces tr = e.sample(0, x, t);
    if (std::abs(tr.sigma[0](0, 0)) < 1e-14 && std::abs(tr.v(0, 0)) > 1e-14) u = VectorXd::Unit(space->size(), j) / tr.v(0, 0);
  }
  REQUIRE(u.size() == space->size());
  const DiscreteSolution uh(space, u, Method::I);
  CHECK(bilinear_form(sys, u, u) == doctest::Approx(3.0).epsilon(1e-12));
  const double s = dg_seminorm(*mesh, uh, FluxParameters{});
  CHECK(s * s == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(dg_plus_seminorm(*mesh, uh, FluxParameters{}) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("zero data gives a zero load vector") {
  auto mesh = unit_mesh(2, test::identity_tensor(2), 1, 2, BoundarySpec::mixed(2));
  const TrefftzSpace space(mesh, 2);
  for (Method m : {Method::I, Method::II}) {
    const BlockSystem sys = assemble(space, m, FluxParameters{}, ProblemData::zero(2));
    CHECK(sys.global_rhs().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("A = I: Method I and Method II coincide") {
  const ManufacturedCase mc = make_case("hom2d_hat", family(1.0), BoundaryMode::Mixed);
  REQUIRE(mc.tensor->rho() == doctest::Approx(1.0));
  auto mesh = unit_mesh(2, mc.tensor, 1, 2, mc.boundary_spec(), mc.frame);
  const TrefftzSpace space(mesh, 2);
  const ProblemData data = ProblemData::from_case(mc);
  const BlockSystem a = assemble_method1(space, FluxParameters{}, data);
  const BlockSystem b = assemble_method2(space, FluxParameters{}, data);
  const Eigen::SparseMatrix<double> diff = a.global_matrix() - b.global_matrix();
  CHECK(max_entry(diff) <= 1e-12 * max_entry(a.global_matrix()));
  CHECK((a.global_rhs() - b.global_rhs()).cwiseAbs().maxCoeff() <= 1e-12 * a.global_rhs().cwiseAbs().maxCoeff());
}

TEST_CASE("rho = 7/3: Method I and Method II differ") {
  const ManufacturedCase mc = make_case("hom2d_hat", family(0.5), BoundaryMode::Neumann);
  REQUIRE(mc.tensor->rho() == doctest::Approx(7.0 / 3.0));
  auto mesh = unit_mesh(2, mc.tensor, 1, 2, mc.boundary_spec(), mc.frame);
  const TrefftzSpace space(mesh, 1);
  const ProblemData data = ProblemData::from_case(mc);
  const Eigen::SparseMatrix<double> diff =
      assemble_method1(space, FluxParameters{}, data).global_matrix() - assemble_method2(space, FluxParameters{}, data).global_matrix();
  CHECK(max_entry(diff) > 1e-6);
}

TEST_CASE("coercivity identity for both methods") {
  std::mt19937_64 rng(41);
  for (int d = 1; d <= 3; ++d) {
    auto A = test::tensor_of(random_spd(d, 50, rng));
    auto mesh = unit_mesh(d, A, 1, 2, BoundarySpec::mixed(d));
    auto space = std::make_shared<const TrefftzSpace>(mesh, d == 3 ? 1 : 2);
    for (Method m : {Method::I, Method::II}) {
      const BlockSystem sys = assemble(*space, m, FluxParameters{}, ProblemData::zero(d));
      double worst = 0;
      for (int k = 0; k < 20; ++k) {
        const VectorXd u = test::random_vector(space->size(), rng);
        const double a = bilinear_form(sys, u, u);
        const double s = dg_seminorm(*mesh, DiscreteSolution(space, u, m), FluxParameters{}, options_for(m));
        worst = std::max(worst, std::abs(a - s * s) / (s * s));
      }
      CAPTURE(d);
      CHECK(worst <= 1e-9);
    }
  }
}

TEST_CASE("non-default flux parameters keep the identity") {
  std::mt19937_64 rng(42);
  auto A = test::tensor_of(random_spd(2, 10, rng));
  auto mesh = unit_mesh(2, A, 1, 2, BoundarySpec::mixed(2));
  auto space = std::make_shared<const TrefftzSpace>(mesh, 1);
  FluxParameters f;
  f.alpha = 2.5;
  f.beta = 0.3;
  f.delta = 0.2;
  const BlockSystem sys = assemble(*space, Method::I, f, ProblemData::zero(2));
  const VectorXd u = test::random_vector(space->size(), rng);
  const double s = dg_seminorm(*mesh, DiscreteSolution(space, u, Method::I), f);
  CHECK(bilinear_form(sys, u, u) == doctest::Approx(s * s).epsilon(1e-9));
}

TEST_CASE("corrupted flux sign breaks coercivity") {
  std::mt19937_64 rng(43);
  auto mesh = unit_mesh(2, test::identity_tensor(2), 1, 2, BoundarySpec::mixed(2));
  auto space = std::make_shared<const TrefftzSpace>(mesh, 2);
  AssemblyOptions ao;
  ao.corrupt_flux_sign = true;
  const BlockSystem sys = assemble(*space, Method::I, FluxParameters{}, ProblemData::zero(2), ao);
  const VectorXd u = test::random_vector(space->size(), rng);
  const double s = dg_seminorm(*mesh, DiscreteSolution(space, u, Method::I), FluxParameters{});
  CHECK(std::abs(bilinear_form(sys, u, u) - s * s) / (s * s) > 1e-6);
}

TEST_CASE("block sparsity: slab n couples only to n and n-1") {
  auto mesh = unit_mesh(1, test::identity_tensor(1), 2, 4, BoundarySpec::all(1, BoundaryType::Neumann));
  const TrefftzSpace space(mesh, 1);
  const BlockSystem sys = assemble_method1(space, FluxParameters{}, ProblemData::zero(1));
  CHECK(sys.num_slabs() == 4);
  CHECK(sys.lower[0].nonZeros() == 0);
  const Eigen::SparseMatrix<double> G = sys.global_matrix();
  const int b = sys.block_size;
  int bad = 0;
  for (int k = 0; k < G.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(G, k); it; ++it) {
      const int row_slab = static_cast<int>(it.row()) / b, col_slab = static_cast<int>(it.col()) / b;
      if (col_slab != row_slab && col_slab != row_slab - 1) ++bad;
    }
  CHECK(bad == 0);
  for (int n = 1; n < 4; ++n) CHECK(sys.lower[n].nonZeros() > 0);
}

TEST_CASE("nonhomogeneous load with f = 0 and no particular part is the Method I load") {
  const ManufacturedCase mc = make_case("hom2d_hat", family(0.5), BoundaryMode::Mixed);
  auto mesh = unit_mesh(2, mc.tensor, 1, 2, mc.boundary_spec(), mc.frame);
  const TrefftzSpace space(mesh, 1);
  const ProblemData data = ProblemData::from_case(mc);
  const BlockSystem sys = assemble_method1(space, FluxParameters{}, data);
  const auto rhs = assemble_nonhomogeneous_rhs(space, Method::I, FluxParameters{}, data, ZeroField(2));
  for (int n = 0; n < sys.num_slabs(); ++n)
    CHECK((rhs[n] - sys.rhs[n]).cwiseAbs().maxCoeff() <= 1e-13 * (1 + sys.rhs[n].cwiseAbs().maxCoeff()));
}

TEST_CASE("combined scheme with an exact polynomial split") {
  // U = U1 + U2, U1 = x^2 t^2 carries the source, U2 = x^2 + t^2 is Trefftz
  const Polynomial U1 = Polynomial::monomial(1, 2, {2, 0, 0});
  const Polynomial U2 = Polynomial::monomial(1, 0, {2, 0, 0}) + Polynomial::monomial(1, 2, {0, 0, 0});
  auto u1 = std::make_shared<PotentialField>(U1);
  auto u2 = std::make_shared<PotentialField>(U2);
  const PotentialField whole(U1 + U2);
  ProblemData data;
  data.v0 = [&](const VectorXd& x) { return whole.v(x, 0.0); };
  data.sigma0 = [&](const VectorXd& x) { return VectorXd::Constant(1, whole.s(x, 0.0)); };
  data.g_D = [&](const VectorXd& x, double t) { return whole.v(x, t); };
  data.g_N = [&](const VectorXd& x, double t, const VectorXd& n) { return whole.s(x, t) * n(0); };
  data.f = [](const VectorXd& x, double t) { return 2 * x(0) * x(0) - 2 * t * t; };  // U1_tt - U1_xx

  auto mesh = unit_mesh(1, test::identity_tensor(1), 2, 2, BoundarySpec::from_lists(1, {0}, {1}));
  auto space = std::make_shared<const TrefftzSpace>(mesh, 1);
  const BlockSystem sys = assemble_method1(*space, FluxParameters{}, ProblemData::zero(1));
  const auto rhs = assemble_nonhomogeneous_rhs(*space, Method::I, FluxParameters{}, data, *u1);
  const DiscreteSolution uh(space, solve_blocks(sys, rhs), Method::I);
  double worst = 0;
  for (int e = 0; e < mesh->num_elements(); ++e) {
    const QuadratureRule q = rule_for(*mesh, {EntityKind::Element, e}, 3);
    Traces d = uh.sample(e, q.x, q.t);
    d -= u2->sample(e, q.x, q.t);
    worst = std::max({worst, d.v.cwiseAbs().maxCoeff(), d.sigma[0].cwiseAbs().maxCoeff()});
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("local DG: zero source gives zero") {
  auto mesh = unit_mesh(2, test::identity_tensor(2), 1, 2, BoundarySpec::all(2, BoundaryType::Neumann));
  for (LocalMode mode : {LocalMode::Overlapping, LocalMode::Nonoverlapping}) {
    const ParticularOptions po{mode};
    const ParticularSolution ps = solve_particular(*mesh, 1, [](const VectorXd&, double) { return 0.0; }, FluxParameters{}, 1.0, po);
    double worst = 0;
    for (int e = 0; e < ps.num_elements(); ++e) worst = std::max(worst, ps.piece(e).coeffs.cwiseAbs().maxCoeff());
    CHECK(worst == 0.0);
  }
}

TEST_CASE("local DG against a Fourier series") {
  // v_t + sigma_x = 1 on (0,1)^2 with zero initial and zero Dirichlet data:
  // sigma(x, 1) = sum over odd k of -8/(k pi)^2 cos(k pi x)
  auto exact = [](double x) {
    double s = 0;
    for (int k = 1; k < 4000; k += 2) {
      const double w = k * M_PI;
      s += -4 / (w * w) * (1 - std::cos(w)) * std::cos(w * x);
    }
    return s;
  };
  auto A = test::identity_tensor(1);
  std::vector<double> errs, initial;
  for (int l = 2; l <= 4; ++l) {
    auto mesh = unit_mesh(1, A, l, 1 << l, BoundarySpec::all(1, BoundaryType::Dirichlet));
    const LocalRegion r{mesh, LegendreSpace(1, 2), 2};
    const auto M = assemble_local_matrix(r, FluxParameters{}, 1.0, 5);
    const VectorXd b = assemble_local_rhs(r, [](const VectorXd&, double) { return 1.0; }, VectorXd::Zero(1), 0.0, 5);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(M);
    const VectorXd x = lu.solve(b);
    const int nl = r.local_size();
    double err = 0, nrm = 0, init = 0;
    for (int c = 0; c < mesh->num_cells(); ++c) {
      const int e = mesh->element_id(c, mesh->num_slabs() - 1);
      const QuadratureRule q = mapped_rule(mesh->cell(c).center, mesh->cell(c).jacobian, 1.0, 1.0, 10, A->S());
      const VectorXd sh = local_traces(r, e, q.x, q.t).sigma[0] * x.segment(e * nl, nl);
      for (int j = 0; j < q.size(); ++j) {
        const double ex = exact(q.x(0, j));
        err += q.weights(j) * std::pow(sh(j) - ex, 2);
        nrm += q.weights(j) * ex * ex;
      }
      const QuadratureRule q0 = mapped_rule(mesh->cell(c).center, mesh->cell(c).jacobian, 0.0, 0.0, 10, A->S());
      const Traces t0 = local_traces(r, c, q0.x, q0.t);
      const VectorXd v0 = t0.v * x.segment(c * nl, nl), s0 = t0.sigma[0] * x.segment(c * nl, nl);
      for (int j = 0; j < q0.size(); ++j) init += q0.weights(j) * (v0(j) * v0(j) + s0(j) * s0(j));
    }
    errs.push_back(std::sqrt(err / nrm));
    initial.push_back(std::sqrt(init));
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  CHECK(errs[2] < 1e-2);
  CHECK(initial[1] < initial[0]);
  CHECK(initial[2] < initial[1]);
}

TEST_CASE("local regions") {
  auto mesh = unit_mesh(2, test::identity_tensor(2), 2, 4, BoundarySpec::all(2, BoundaryType::Neumann));
  const LocalRegion o = make_local_region(*mesh, LocalMode::Overlapping, 1);
  CHECK(o.mesh->num_elements() == 1);
  CHECK(o.components == 3);
  CHECK(o.local_size() == 3 * 8);
  const LocalRegion p = make_local_region(*mesh, LocalMode::Overlapping, 1, 1.0, 3);
  CHECK(p.mesh->num_cells() == 9);
  CHECK(p.center_cell() == 4);
  const LocalRegion n = make_local_region(*mesh, LocalMode::Nonoverlapping, 2);
  CHECK(n.mesh->num_cells() == 16);
  CHECK(n.mesh->num_slabs() == 1);
  CHECK_THROWS_AS(make_local_region(*mesh, LocalMode::Overlapping, 1, 1.0, 2), Error);
}
