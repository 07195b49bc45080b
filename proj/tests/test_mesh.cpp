#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>

#include "support.hpp"
#include "tdg/mesh.hpp"

using namespace tdg;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::map<FaceClass, int> count_classes(const SpaceTimeMesh& m) {
  std::map<FaceClass, int> c;
  for (const auto& f : m.faces()) ++c[f.cls];
  return c;
}

}  // namespace

TEST_CASE("2x2x2 grid face counts") {
  const SpaceTimeMesh m = generate(DomainSpec::unit_box(2, CoordinateFrame::Physical), test::identity_tensor(2), 1, 2,
                                   BoundarySpec::all(2, BoundaryType::Dirichlet));
  CHECK(m.num_cells() == 4);
  CHECK(m.num_elements() == 8);
  auto c = count_classes(m);
  CHECK(c[FaceClass::SpaceLikeInternal] == 4);
  CHECK(c[FaceClass::TimeLikeInternal] == 8);
  CHECK(c[FaceClass::Initial] + c[FaceClass::Final] == 8);
  CHECK(c[FaceClass::Dirichlet] + c[FaceClass::Neumann] == 16);
  for (const auto& f : m.faces()) {
    if (f.cls == FaceClass::SpaceLikeInternal) {
      CHECK(f.normal_t == 1.0);
      CHECK(f.normal.norm() == 0.0);
      CHECK(m.element(f.plus).slab == m.element(f.minus).slab + 1);
      CHECK(f.t0 == doctest::Approx(0.5));
    }
    if (f.time_like()) {
      CHECK(f.normal_t == 0.0);
      CHECK(f.normal.norm() == doctest::Approx(1.0));
    }
    CHECK(f.measure > 0);
  }
}

TEST_CASE("single 1D element") {
  const SpaceTimeMesh m = generate(DomainSpec::unit_box(1, CoordinateFrame::Physical), test::identity_tensor(1), 0, 1,
                                   BoundarySpec::all(1, BoundaryType::Dirichlet));
  auto c = count_classes(m);
  CHECK(m.num_elements() == 1);
  CHECK(c[FaceClass::SpaceLikeInternal] == 0);
  CHECK(c[FaceClass::TimeLikeInternal] == 0);
  CHECK(c[FaceClass::Initial] == 1);
  CHECK(c[FaceClass::Final] == 1);
  CHECK(c[FaceClass::Dirichlet] == 2);
}

TEST_CASE("mixed boundary marks the x1 sides Dirichlet") {
  const SpaceTimeMesh m = generate(DomainSpec::unit_box(2, CoordinateFrame::Physical), test::identity_tensor(2), 1, 1,
                                   BoundarySpec::mixed(2));
  for (const auto& f : m.faces()) {
    if (f.cls == FaceClass::Dirichlet) CHECK(f.boundary_side / 2 == 0);
    if (f.cls == FaceClass::Neumann) CHECK(f.boundary_side / 2 == 1);
  }
  CHECK_THROWS_AS(BoundarySpec::from_lists(2, {0, 1, 2}, {2, 3}), Error);
  CHECK_THROWS_AS(BoundarySpec::from_lists(2, {0, 1}, {2}), Error);
}

TEST_CASE("invalid inputs") {
  DomainSpec bad = DomainSpec::unit_box(2, CoordinateFrame::Physical);
  bad.upper(1) = bad.lower(1);
  CHECK_THROWS_AS(generate(bad, test::identity_tensor(2), 1, 1, BoundarySpec::all(2, BoundaryType::Neumann)), Error);
  CHECK_THROWS_AS(generate(DomainSpec::unit_box(2, CoordinateFrame::Physical), test::identity_tensor(2), -1, 1,
                           BoundarySpec::all(2, BoundaryType::Neumann)),
                  Error);
}

TEST_CASE("tiling, face partition and counts on an anisotropic hat mesh") {
  std::mt19937_64 rng(21);
  for (int d = 1; d <= 3; ++d) {
    auto T = test::tensor_of(random_spd(d, 20, rng));
    for (CoordinateFrame fr : {CoordinateFrame::Physical, CoordinateFrame::Hat}) {
      const SpaceTimeMesh m = generate(DomainSpec::unit_box(d, fr), T, 1, 3, BoundarySpec::mixed(d));
      double vol = 0;
      for (const auto& e : m.elements()) vol += m.cell(e.cell).volume * (e.t1 - e.t0);
      const double box = fr == CoordinateFrame::Physical ? 1.0 : std::abs(T->S_inv().determinant());
      CHECK(vol == doctest::Approx(box).epsilon(1e-10));

      std::vector<int> appearances(m.num_faces(), 0);
      for (int e = 0; e < m.num_elements(); ++e) {
        const auto& el = m.element(e);
        const auto& cell = m.cell(el.cell);
        double faces = 0;
        for (int f : m.element_faces(e)) {
          faces += m.face(f).measure;
          ++appearances[f];
        }
        // |boundary of cell x I| = 2|cell| + h_t |boundary of cell|
        double perimeter = 0;
        for (int i = 0; i < d; ++i) {
          MatrixXd J = cell.jacobian;
          MatrixXd T2(d, d - 1);
          for (int k = 0, c = 0; k < d; ++k)
            if (k != i) T2.col(c++) = J.col(k);
          perimeter += 2 * std::pow(2.0, d - 1) * gram_factor(T2);
        }
        CHECK(faces == doctest::Approx(2 * cell.volume + (el.t1 - el.t0) * perimeter).epsilon(1e-10));
      }
      for (const auto& f : m.faces()) {
        const int expect = (f.cls == FaceClass::SpaceLikeInternal || f.cls == FaceClass::TimeLikeInternal) ? 2 : 1;
        CHECK(appearances[f.id] == expect);
        if (f.time_like() && f.cls != FaceClass::TimeLikeInternal) CHECK(f.normal.norm() == doctest::Approx(1.0));
      }
      CHECK(std::isfinite(m.quasi_uniformity()));
    }
  }
}

TEST_CASE("geometry lemmas") {
  const GeometryReport gi = verify_geometry_lemmas(generate(DomainSpec::unit_box(2, CoordinateFrame::Hat),
                                                            test::identity_tensor(2), 2, 4,
                                                            BoundarySpec::all(2, BoundaryType::Neumann)));
  CHECK(gi.diameter_ratio_min == doctest::Approx(1.0));
  CHECK(gi.diameter_ratio_max == doctest::Approx(1.0));
  CHECK(gi.area_ratio_max == doctest::Approx(1.0));

  MatrixXd A = MatrixXd::Zero(2, 2);
  A(0, 0) = 0.25;
  A(1, 1) = 1;
  auto T = test::tensor_of(A);
  std::vector<double> r;
  for (int l = 1; l <= 3; ++l)
    r.push_back(verify_geometry_lemmas(generate(DomainSpec::unit_box(2, CoordinateFrame::Hat), T, l, 1 << l,
                                                BoundarySpec::all(2, BoundaryType::Neumann)))
                    .diameter_ratio_max);
  CHECK(r[1] == doctest::Approx(r[0]).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(r[0]).epsilon(1e-12));

  std::mt19937_64 rng(4);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 2;
    auto Tk = test::tensor_of(random_spd(d, 100, rng));
    for (CoordinateFrame fr : {CoordinateFrame::Physical, CoordinateFrame::Hat})
      worst = std::max(worst, verify_geometry_lemmas(generate(DomainSpec::unit_box(d, fr), Tk, 1, 1,
                                                              BoundarySpec::all(d, BoundaryType::Neumann)))
                                  .area_ratio_max);
  }
  CHECK(worst <= 1.0 + 1e-10);
}

TEST_CASE("refinement halves h and h_hat together") {
  std::mt19937_64 rng(8);
  auto T = test::tensor_of(random_spd(2, 30, rng));
  double prev_h = 0, prev_hh = 0;
  for (int l = 0; l <= 3; ++l) {
    const SpaceTimeMesh m = generate(DomainSpec::unit_box(2, CoordinateFrame::Physical), T, l, 1 << l,
                                     BoundarySpec::all(2, BoundaryType::Dirichlet));
    if (l > 0) {
      CHECK(prev_h / m.max_diameter() == doctest::Approx(2.0));
      CHECK(prev_hh / m.max_hat_diameter() == doctest::Approx(2.0));
    }
    prev_h = m.max_diameter();
    prev_hh = m.max_hat_diameter();
  }
}

TEST_CASE("gram factor and dump") {
  MatrixXd T(3, 2);
  T << 1, 0, 0, 2, 0, 0;
  CHECK(gram_factor(T) == doctest::Approx(2.0));
  CHECK(gram_factor(MatrixXd(3, 0)) == 1.0);
  const SpaceTimeMesh m = generate(DomainSpec::unit_box(1, CoordinateFrame::Physical), test::identity_tensor(1), 1, 1,
                                   BoundarySpec::all(1, BoundaryType::Dirichlet));
  std::ostringstream os;
  write_mesh_dump(m, os);
  std::istringstream is(os.str());
  std::string line;
  int elements = 0, faces = 0;
  while (std::getline(is, line)) {
    if (line.rfind("element ", 0) == 0) ++elements;
    if (line.rfind("face ", 0) == 0) ++faces;
  }
  CHECK(elements == m.num_elements());
  CHECK(faces == m.num_faces());
}
