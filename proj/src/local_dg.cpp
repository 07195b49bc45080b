#include <cmath>

#include "tdg/assembly.hpp"
#include "tdg/error.hpp"

namespace tdg {

namespace {

// Orthonormal Legendre values and derivatives on [-1,1], degrees 0..q.
void legendre_table(int q, double z, double* val, double* der) {
  double p0 = 1, p1 = z, d0 = 0, d1 = 1;
  for (int k = 0; k <= q; ++k) {
    double p, d;
    if (k == 0) {
      p = 1;
      d = 0;
    } else if (k == 1) {
      p = z;
      d = 1;
    } else {
      p = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
      d = d0 + (2.0 * k - 1) * p1;  // P_k' = P_{k-2}' + (2k-1) P_{k-1}
      p0 = p1;
      p1 = p;
      d0 = d1;
      d1 = d;
    }
    const double s = std::sqrt(0.5 * (2 * k + 1));
    val[k] = s * p;
    der[k] = s * d;
  }
}

}  // namespace

LegendreSpace::LegendreSpace(int d, int q) : d_(d), q_(q) {
  if (q < 0) raise(ErrorKind::InvalidArgument, "local degree must be nonnegative");
  if (d < 1 || d > 3) raise(ErrorKind::DimensionMismatch, "local space needs d in 1..3");
  n_ = 1;
  for (int i = 0; i <= d; ++i) n_ *= q + 1;
}

void LegendreSpace::tabulate(const Eigen::MatrixXd& xi, const Eigen::VectorXd& s, Eigen::MatrixXd& values,
                             std::vector<Eigen::MatrixXd>* derivatives) const {
  const int nq = static_cast<int>(s.size());
  const int m = q_ + 1;
  values.resize(nq, n_);
  if (derivatives) derivatives->assign(d_ + 1, Eigen::MatrixXd(nq, n_));
  std::vector<double> val((d_ + 1) * m), der((d_ + 1) * m);
  for (int j = 0; j < nq; ++j) {
    for (int k = 0; k < d_; ++k) legendre_table(q_, xi(k, j), &val[k * m], &der[k * m]);
    legendre_table(q_, s(j), &val[d_ * m], &der[d_ * m]);
    for (int a = 0; a < n_; ++a) {
      int digits[4];
      int rem = a;
      for (int k = 0; k <= d_; ++k) {
        digits[k] = rem % m;
        rem /= m;
      }
      double prod = 1;
      for (int k = 0; k <= d_; ++k) prod *= val[k * m + digits[k]];
      values(j, a) = prod;
      if (!derivatives) continue;
      for (int i = 0; i <= d_; ++i) {
        double g = der[i * m + digits[i]];
        for (int k = 0; k <= d_; ++k)
          if (k != i) g *= val[k * m + digits[k]];
        (*derivatives)[i](j, a) = g;
      }
    }
  }
}

LocalRegion make_local_region(const SpaceTimeMesh& global, LocalMode mode, int q, double gamma, int patch) {
  if (!(gamma >= 1.0)) raise(ErrorKind::InvalidArgument, "fictitious enlargement must be >= 1");
  if (patch < 1 || patch % 2 == 0) raise(ErrorKind::InvalidArgument, "fictitious patch size must be odd and >= 1");
  const int d = global.dim();
  DomainSpec dom = global.domain();
  dom.final_time = global.time_step();
  const auto dirichlet = BoundarySpec::all(d, BoundaryType::Dirichlet);
  std::shared_ptr<const SpaceTimeMesh> mesh;
  if (mode == LocalMode::Overlapping) {
    // patch^d cells centred at the origin; callers shift by the element centre
    const Eigen::VectorXd delta = (dom.upper - dom.lower) / static_cast<double>(global.cells_per_axis()[0]);
    dom.lower = -0.5 * gamma * patch * delta;
    dom.upper = 0.5 * gamma * patch * delta;
    mesh = std::make_shared<const SpaceTimeMesh>(generate_cells(dom, global.tensor_ptr(), patch, 1, dirichlet));
  } else {
    mesh = std::make_shared<const SpaceTimeMesh>(generate(dom, global.tensor_ptr(), global.level(), 1, dirichlet));
  }
  LocalRegion r{mesh, LegendreSpace(d, q), d + 1};
  return r;
}

int LocalRegion::center_cell() const { return (mesh->num_cells() - 1) / 2; }

Traces local_traces(const LocalRegion& region, int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) {
  const Element& e = region.mesh->element(element);
  const SpatialCell& cell = region.mesh->cell(e.cell);
  const Eigen::MatrixXd xi = cell.jacobian.inverse() * (x.colwise() - cell.center);
  const double ht = e.t1 - e.t0;
  const Eigen::VectorXd s = (2.0 / ht) * (t.array() - 0.5 * (e.t0 + e.t1)).matrix();
  Eigen::MatrixXd phi;
  region.space.tabulate(xi, s, phi, nullptr);
  const int nb = region.space.size();
  const int d = region.mesh->dim();
  Traces tr = Traces::zero(static_cast<int>(t.size()), d, region.local_size());
  tr.v.leftCols(nb) = phi;
  for (int k = 0; k < d; ++k) tr.sigma[k].middleCols((k + 1) * nb, nb) = phi;
  return tr;
}

Eigen::SparseMatrix<double> assemble_local_matrix(const LocalRegion& region, const FluxParameters& flux, double c, int n,
                                                  bool corrupt) {
  const SpaceTimeMesh& mesh = *region.mesh;
  const int d = mesh.dim();
  const int nb = region.space.size();
  const int nl = region.local_size();
  const Eigen::MatrixXd half = mesh.tensor().power(0.5);
  std::vector<Eigen::Triplet<double>> trip;
  auto place = [&](int ea, int eb, const Eigen::MatrixXd& blk) {
    const int r0 = ea * nl, c0 = eb * nl;
    for (int j = 0; j < blk.cols(); ++j)
      for (int i = 0; i < blk.rows(); ++i)
        if (blk(i, j) != 0.0) trip.emplace_back(r0 + i, c0 + j, blk(i, j));
  };

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const QuadratureRule q = rule_for(mesh, {EntityKind::Element, e}, n);
    const Element& el = mesh.element(e);
    const SpatialCell& cell = mesh.cell(el.cell);
    const Eigen::MatrixXd Jinv = cell.jacobian.inverse();
    const double ht = el.t1 - el.t0;
    const Eigen::MatrixXd xi = Jinv * (q.x.colwise() - cell.center);
    const Eigen::VectorXd s = (2.0 / ht) * (q.t.array() - 0.5 * (el.t0 + el.t1)).matrix();
    Eigen::MatrixXd phi;
    std::vector<Eigen::MatrixXd> dref;
    region.space.tabulate(xi, s, phi, &dref);
    std::vector<Eigen::MatrixXd> dx(d, Eigen::MatrixXd::Zero(phi.rows(), nb));
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) dx[j] += Jinv(i, j) * dref[i];
    const Eigen::MatrixXd dt = (2.0 / ht) * dref[d];
    const Eigen::VectorXd& O = q.weights;
    const Eigen::MatrixXd dtOphi = dt.transpose() * O.asDiagonal() * phi;
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(nl, nl);
    blk.block(0, 0, nb, nb) = -dtOphi / (c * c);
    for (int k = 0; k < d; ++k) {
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(phi.rows(), nb);
      for (int j = 0; j < d; ++j) G += half(k, j) * dx[j];
      const Eigen::MatrixXd GOphi = G.transpose() * O.asDiagonal() * phi;
      blk.block(0, (k + 1) * nb, nb, nb) = -GOphi;
      blk.block((k + 1) * nb, 0, nb, nb) = -GOphi;
      blk.block((k + 1) * nb, (k + 1) * nb, nb, nb) = -dtOphi;
    }
    place(e, e, blk);
  }

  for (const FaceRecord& f : mesh.faces()) {
    if (f.cls == FaceClass::Initial) continue;
    const FaceWeights fw = face_weights(mesh, f, Method::I, flux, n);
    const int elems[2] = {f.minus, f.plus};
    const int nsides = f.plus >= 0 ? 2 : 1;
    Traces tr[2];
    for (int s = 0; s < nsides; ++s) tr[s] = local_traces(region, elems[s], fw.rule.x, fw.rule.t);
    for (int sa = 0; sa < nsides; ++sa)
      for (int sb = 0; sb < nsides; ++sb) place(elems[sa], elems[sb], face_form(f, fw, tr[sa], sa, tr[sb], sb, flux, c, corrupt));
  }
  Eigen::SparseMatrix<double> M(region.size(), region.size());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

Eigen::VectorXd assemble_local_rhs(const LocalRegion& region, const std::function<double(const Eigen::VectorXd&, double)>& f,
                                   const Eigen::VectorXd& shift, double t_shift, int n) {
  const SpaceTimeMesh& mesh = *region.mesh;
  const int nb = region.space.size();
  const int nl = region.local_size();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(region.size());
  if (!f) return r;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const QuadratureRule q = rule_for(mesh, {EntityKind::Element, e}, n);
    Eigen::VectorXd fv(q.size());
    for (int j = 0; j < q.size(); ++j) fv(j) = f(q.x.col(j) + shift, q.t(j) + t_shift);
    const Traces tr = local_traces(region, e, q.x, q.t);
    r.segment(e * nl, nb) = tr.v.leftCols(nb).transpose() * q.weights.cwiseProduct(fv);
  }
  return r;
}

}  // namespace tdg
