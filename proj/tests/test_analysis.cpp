#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support.hpp"
#include "tdg/analysis.hpp"
#include "tdg/solver.hpp"

using namespace tdg;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// (w, tau) = (1, 0) everywhere
class UnitField : public Field {
 public:
  explicit UnitField(int d) : d_(d) {}
  Traces sample(int, const MatrixXd& x, const VectorXd&) const override {
    Traces t = Traces::zero(static_cast<int>(x.cols()), d_);
    t.v.setOnes();
    return t;
  }

 private:
  int d_;
};

}  // namespace

TEST_CASE("seminorms of (1, 0) on one 1D element") {
  const SpaceTimeMesh m = generate(DomainSpec::unit_box(1, CoordinateFrame::Physical), test::identity_tensor(1), 0, 1,
                                   BoundarySpec::all(1, BoundaryType::Dirichlet));
  const UnitField u(1);
  CHECK(dg_seminorm(m, u, FluxParameters{}) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  CHECK(dg_plus_seminorm(m, u, FluxParameters{}) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  // Neumann sides: beta |A^{1/2} tau.n|^2 vanishes, so only the F0/FT terms remain
  const SpaceTimeMesh n = generate(DomainSpec::unit_box(1, CoordinateFrame::Physical), test::identity_tensor(1), 0, 1,
                                   BoundarySpec::all(1, BoundaryType::Neumann));
  CHECK(dg_seminorm(n, u, FluxParameters{}) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("continuous fields: jump terms vanish") {
  // constant field (1, 0) on a refined Neumann mesh: only the F0/FT terms contribute
  const SpaceTimeMesh m = generate(DomainSpec::unit_box(2, CoordinateFrame::Physical), test::identity_tensor(2), 2, 4,
                                   BoundarySpec::all(2, BoundaryType::Neumann));
  const double s = dg_seminorm(m, UnitField(2), FluxParameters{});
  CHECK(s * s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("DG+ dominates DG and stability holds") {
  std::mt19937_64 rng(61);
  auto A = test::tensor_of(random_spd(2, 50, rng));
  auto mesh = std::make_shared<const SpaceTimeMesh>(
      generate(DomainSpec::unit_box(2, CoordinateFrame::Physical), A, 1, 2, BoundarySpec::mixed(2)));
  auto space = std::make_shared<const TrefftzSpace>(mesh, 2);
  const double C = transformation_stability_constant(*A);
  CHECK(C == doctest::Approx(std::pow(A->det_power(0.25), 1.0) * std::pow(A->lambda_min(), -0.25)));
  SeminormOptions hat;
  hat.frame = CoordinateFrame::Hat;
  for (int k = 0; k < 50; ++k) {
    const DiscreteSolution u(space, test::random_vector(space->size(), rng), Method::I);
    const double s = dg_seminorm(*mesh, u, FluxParameters{});
    CHECK(dg_plus_seminorm(*mesh, u, FluxParameters{}) >= s);
    CHECK(s <= C * dg_seminorm(*mesh, u, FluxParameters{}, hat) * (1 + 1e-12));
  }
}

TEST_CASE("truncated seminorm is monotone in the slab index") {
  std::mt19937_64 rng(62);
  auto mesh = std::make_shared<const SpaceTimeMesh>(generate(DomainSpec::unit_box(1, CoordinateFrame::Physical),
                                                             test::identity_tensor(1), 2, 4, BoundarySpec::mixed(1)));
  auto space = std::make_shared<const TrefftzSpace>(mesh, 2);
  for (int k = 0; k < 5; ++k) {
    const DiscreteSolution u(space, test::random_vector(space->size(), rng), Method::I);
    double prev = 0;
    for (int n = 0; n < mesh->num_slabs(); ++n) {
      SeminormOptions so;
      so.slab_limit = n;
      const double s = dg_seminorm(*mesh, u, FluxParameters{}, so);
      CHECK(s >= prev);
      prev = s;
    }
    CHECK(prev == doctest::Approx(dg_seminorm(*mesh, u, FluxParameters{})).epsilon(1e-13));
  }
}

TEST_CASE("seminorm detects nonzero discrete functions") {
  // A(u;u) = |u|^2 is positive definite on the discrete space
  auto mesh = std::make_shared<const SpaceTimeMesh>(generate(DomainSpec::unit_box(2, CoordinateFrame::Physical),
                                                             test::identity_tensor(2), 1, 1, BoundarySpec::mixed(2)));
  const TrefftzSpace space(mesh, 1);
  const MatrixXd G(assemble_method1(space, FluxParameters{}, ProblemData::zero(2)).global_matrix());
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (G + G.transpose()));
  CHECK(eig.eigenvalues().minCoeff() > 1e-10);
}

TEST_CASE("L2 errors at slab boundaries") {
  TensorParameters tp;
  const ManufacturedCase mc = make_case("hom2d_hat", tp, BoundaryMode::Neumann);
  const SpaceTimeMesh m = generate(mc.domain(), mc.tensor, 1, 2, mc.boundary_spec());
  auto ex = mc.exact_field();
  const L2Error e = l2_error_at_time(m, *ex, *ex, 1.0);
  CHECK(e.err_v == 0.0);
  CHECK(e.err_sigma == 0.0);
  CHECK(l2_error_at_time(m, *ex, *ex, 0.5).err_v == 0.0);
  try {
    l2_error_at_time(m, *ex, *ex, 0.3);
    FAIL("accepted interior time");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::TimeNotOnSlabBoundary);
  }
  // zero exact solution: absolute errors with a flag
  const L2Error z = l2_error_at_time(m, ZeroField(2), ZeroField(2), 1.0);
  CHECK(z.absolute_v);
  CHECK(z.absolute_sigma);
  CHECK(z.err_v == 0.0);
  const L2Error u = l2_error_at_time(m, UnitField(2), ZeroField(2), 1.0);
  CHECK(u.absolute_v);
  CHECK(u.err_v == doctest::Approx(std::sqrt(std::abs(mc.tensor->S_inv().determinant()))).epsilon(1e-12));
}

TEST_CASE("rate conventions") {
  auto r = rates({4e-2, 1e-2}, {0.5, 0.25});
  CHECK(std::isnan(r[0]));
  CHECK(r[1] == doctest::Approx(2.0));
  CHECK(rates({1e-3, 1e-3}, {0.5, 0.25})[1] == doctest::Approx(0.0));
  CHECK(rho_rates({4.61e-2, 4.84e-2}, {32, 64})[1] == doctest::Approx(0.0702).epsilon(1e-3));
  CHECK(rho_rates({1e-2, 1e-2}, {1, 1})[1] == 0.0);
  try {
    rates({1e-2, 1e-3}, {0.25, 0.5});
    FAIL("accepted increasing h");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotoneH);
  }
}
