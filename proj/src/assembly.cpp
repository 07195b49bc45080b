#include "tdg/assembly.hpp"

#include <cmath>
#include <string>

#include "tdg/error.hpp"

namespace tdg {

void FluxParameters::validate() const {
  if (!(alpha > 0)) raise(ErrorKind::InvalidArgument, "flux alpha must be positive");
  if (!(beta > 0)) raise(ErrorKind::InvalidArgument, "flux beta must be positive");
  if (!std::isfinite(delta)) raise(ErrorKind::InvalidArgument, "flux delta must be finite");
}

TrefftzSpace::TrefftzSpace(std::shared_ptr<const SpaceTimeMesh> mesh, int p, double c)
    : mesh_(std::move(mesh)), basis_(p, mesh_->dim(), c, mesh_->tensor_ptr()) {}

LocalFrame TrefftzSpace::frame(int element) const {
  const Element& e = mesh_->element(element);
  const SpatialCell& cell = mesh_->cell(e.cell);
  LocalFrame f;
  f.hat_center = cell.hat_center;
  f.half_width = 0.5 * cell.hat_diameter;
  f.t_mid = 0.5 * (e.t0 + e.t1);
  return f;
}

Traces TrefftzSpace::tabulate(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const {
  return basis_.tabulate(frame(element), x, t);
}

ProblemData ProblemData::from_case(const ManufacturedCase& mc) {
  ProblemData d;
  d.v0 = [mc](const Eigen::VectorXd& x) { return mc.v0(x); };
  d.sigma0 = [mc](const Eigen::VectorXd& x) { return mc.sigma0(x); };
  d.g_D = [mc](const Eigen::VectorXd& x, double t) { return mc.g_D(x, t); };
  d.g_N = [mc](const Eigen::VectorXd& x, double t, const Eigen::VectorXd& n) { return mc.g_N(x, t, n); };
  if (!mc.homogeneous) d.f = [mc](const Eigen::VectorXd& x, double t) { return mc.f(x, t); };
  return d;
}

ProblemData ProblemData::zero(int dim) {
  ProblemData d;
  d.v0 = [](const Eigen::VectorXd&) { return 0.0; };
  d.sigma0 = [dim](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::VectorXd::Zero(dim)); };
  d.g_D = [](const Eigen::VectorXd&, double) { return 0.0; };
  d.g_N = [](const Eigen::VectorXd&, double, const Eigen::VectorXd&) { return 0.0; };
  return d;
}

Eigen::SparseMatrix<double> BlockSystem::global_matrix() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (int n = 0; n < num_slabs(); ++n) {
    const int r0 = n * block_size;
    for (int k = 0; k < diag[n].outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(diag[n], k); it; ++it)
        trip.emplace_back(r0 + it.row(), r0 + it.col(), it.value());
    if (n == 0) continue;
    for (int k = 0; k < lower[n].outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lower[n], k); it; ++it)
        trip.emplace_back(r0 + it.row(), r0 - block_size + it.col(), it.value());
  }
  Eigen::SparseMatrix<double> G(size(), size());
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

Eigen::VectorXd BlockSystem::global_rhs() const {
  Eigen::VectorXd b(size());
  for (int n = 0; n < num_slabs(); ++n) b.segment(n * block_size, block_size) = rhs[n];
  return b;
}

double bilinear_form(const BlockSystem& sys, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  const int B = sys.block_size;
  double s = 0;
  for (int n = 0; n < sys.num_slabs(); ++n) {
    Eigen::VectorXd r = sys.diag[n] * u.segment(n * B, B);
    if (n > 0) r += sys.lower[n] * u.segment((n - 1) * B, B);
    s += w.segment(n * B, B).dot(r);
  }
  return s;
}

FaceWeights face_weights(const SpaceTimeMesh& mesh, const FaceRecord& face, Method method, const FluxParameters& flux,
                         int n) {
  const Anisotropy& A = mesh.tensor();
  FaceWeights fw;
  fw.rule = mapped_rule(face.origin, face.tangents, face.t0, face.t1, n, A.S());
  const int d = mesh.dim();
  if (method == Method::I) {
    fw.omega = fw.rule.weights;
    fw.M = Eigen::MatrixXd::Identity(d, d);
    fw.m = A.power(0.5) * face.normal;
    fw.kappa = face.normal.dot(A.power(flux.delta + 0.5) * face.normal);
    fw.beta_n = flux.beta;
    fw.w_factor = 1;
  } else {
    fw.omega = fw.rule.hat_weights;
    fw.M = A.P();
    fw.m = face.hat_normal;
    fw.kappa = 1;
    fw.beta_n = face.time_like() ? flux.beta * face.normal_scale : flux.beta;
    fw.w_factor = face.time_like() ? 1.0 / face.normal_scale : 1.0;
  }
  return fw;
}

namespace {

// a^T diag(w) b
Eigen::MatrixXd wdot(const Eigen::MatrixXd& a, const Eigen::VectorXd& w, const Eigen::MatrixXd& b) {
  return a.transpose() * (w.asDiagonal() * b);
}

Eigen::MatrixXd mass(const FaceWeights& fw, const Traces& test, const Traces& trial, double c) {
  Eigen::MatrixXd r = wdot(test.v, fw.omega, trial.v) / (c * c);
  for (int k = 0; k < test.dim(); ++k) r += wdot(test.sigma[k], fw.omega, trial.sigma[k]);
  return r;
}

}  // namespace

Eigen::MatrixXd face_form(const FaceRecord& face, const FaceWeights& fw, const Traces& test, int side_a,
                          const Traces& trial, int side_b, const FluxParameters& flux, double c, bool corrupt) {
  const Eigen::VectorXd& O = fw.omega;
  switch (face.cls) {
    case FaceClass::Initial:
      return Eigen::MatrixXd::Zero(test.cols(), trial.cols());
    case FaceClass::SpaceLikeInternal:
      // upwind: only the earlier trace of the trial field enters
      if (side_b != 0) return Eigen::MatrixXd::Zero(test.cols(), trial.cols());
      return (side_a == 0 ? 1.0 : -1.0) * mass(fw, test, trial, c);
    case FaceClass::Final:
      return mass(fw, test, trial, c);
    case FaceClass::TimeLikeInternal: {
      const double sa = side_a == 0 ? 1.0 : -1.0, sb = side_b == 0 ? 1.0 : -1.0;
      const Eigen::MatrixXd TM = test.project(fw.m), SM = trial.project(fw.m);
      Eigen::MatrixXd r = (corrupt ? -0.5 : 0.5) * wdot(TM, O, trial.v);
      r += 0.5 * wdot(test.v, O, SM);
      r += flux.alpha * fw.kappa * sb * wdot(test.v, O, trial.v);
      r += flux.beta * sb * wdot(TM, O, SM);
      return sa * r;
    }
    case FaceClass::Dirichlet: {
      const Eigen::MatrixXd SM = trial.project(fw.m);
      return wdot(test.v, O, SM) + flux.alpha * fw.kappa * wdot(test.v, O, trial.v);
    }
    case FaceClass::Neumann: {
      const Eigen::MatrixXd TM = test.project(fw.m), SM = trial.project(fw.m);
      return wdot(TM, O, trial.v) + fw.beta_n * wdot(TM, O, SM);
    }
  }
  return Eigen::MatrixXd::Zero(test.cols(), trial.cols());
}

Eigen::VectorXd face_load(const FaceRecord& face, const FaceWeights& fw, const Traces& test, const ProblemData& data,
                          const FluxParameters& flux, double c) {
  const QuadratureRule& q = fw.rule;
  const int nq = q.size();
  const Eigen::VectorXd& O = fw.omega;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(test.cols());
  switch (face.cls) {
    case FaceClass::Initial: {
      if (!data.v0 || !data.sigma0) raise(ErrorKind::MissingBoundaryData, "initial data missing");
      Eigen::VectorXd v0(nq);
      Eigen::MatrixXd s0(nq, test.dim());
      for (int j = 0; j < nq; ++j) {
        v0(j) = data.v0(q.x.col(j));
        s0.row(j) = (fw.M * data.sigma0(q.x.col(j))).transpose();
      }
      r = test.v.transpose() * O.cwiseProduct(v0) / (c * c);
      for (int k = 0; k < test.dim(); ++k) r += test.sigma[k].transpose() * O.cwiseProduct(s0.col(k));
      return r;
    }
    case FaceClass::Dirichlet: {
      if (!data.g_D) raise(ErrorKind::MissingBoundaryData, "Dirichlet data missing on face " + std::to_string(face.id));
      Eigen::VectorXd g(nq);
      for (int j = 0; j < nq; ++j) g(j) = data.g_D(q.x.col(j), q.t(j));
      const Eigen::VectorXd Og = O.cwiseProduct(g);
      return flux.alpha * fw.kappa * (test.v.transpose() * Og) - test.project(fw.m).transpose() * Og;
    }
    case FaceClass::Neumann: {
      if (!data.g_N) raise(ErrorKind::MissingBoundaryData, "Neumann data missing on face " + std::to_string(face.id));
      Eigen::VectorXd g(nq);
      for (int j = 0; j < nq; ++j) g(j) = data.g_N(q.x.col(j), q.t(j), face.normal);
      const Eigen::VectorXd Og = O.cwiseProduct(g);
      return flux.beta * (test.project(fw.m).transpose() * Og) - fw.w_factor * (test.v.transpose() * Og);
    }
    default:
      return r;
  }
}

namespace {

int default_order(const TrefftzSpace& space, const AssemblyOptions& opts) {
  return opts.quad_order > 0 ? opts.quad_order : space.degree() + 3;
}

Traces side_traces(const TrefftzSpace& space, int element, const FaceWeights& fw, Method method) {
  Traces t = space.tabulate(element, fw.rule.x, fw.rule.t);
  return method == Method::I ? t : t.transformed(fw.M);
}

}  // namespace

BlockSystem assemble(const TrefftzSpace& space, Method method, const FluxParameters& flux, const ProblemData& data,
                     const AssemblyOptions& opts) {
  flux.validate();
  const SpaceTimeMesh& mesh = space.mesh();
  const int nb = space.local_size();
  const int ncells = mesh.num_cells();
  const int nslabs = mesh.num_slabs();
  const double c = space.wave_speed();
  const int n = default_order(space, opts);

  BlockSystem sys;
  sys.block_size = space.slab_size();
  sys.rhs.assign(nslabs, Eigen::VectorXd::Zero(sys.block_size));
  for (int e = 0; e < mesh.num_elements(); ++e) sys.element_offset.push_back(space.offset(e));
  std::vector<std::vector<Eigen::Triplet<double>>> dtrip(nslabs), ltrip(nslabs);

  auto place = [&](int ea, int eb, const Eigen::MatrixXd& blk) {
    const Element& a = mesh.element(ea);
    const Element& b = mesh.element(eb);
    auto& trip = a.slab == b.slab ? dtrip[a.slab] : ltrip[a.slab];
    const int r0 = a.cell * nb, c0 = b.cell * nb;
    for (int j = 0; j < blk.cols(); ++j)
      for (int i = 0; i < blk.rows(); ++i)
        if (blk(i, j) != 0.0) trip.emplace_back(r0 + i, c0 + j, blk(i, j));
  };

  for (const FaceRecord& f : mesh.faces()) {
    const FaceWeights fw = face_weights(mesh, f, method, flux, n);
    const int elems[2] = {f.minus, f.plus};
    const int nsides = f.plus >= 0 ? 2 : 1;
    Traces tr[2];
    for (int s = 0; s < nsides; ++s) tr[s] = side_traces(space, elems[s], fw, method);
    if (f.cls != FaceClass::Initial)
      for (int sa = 0; sa < nsides; ++sa)
        for (int sb = 0; sb < nsides; ++sb) {
          if (f.cls == FaceClass::SpaceLikeInternal && sb == 1) continue;
          place(elems[sa], elems[sb], face_form(f, fw, tr[sa], sa, tr[sb], sb, flux, c, opts.corrupt_flux_sign));
        }
    if (f.cls == FaceClass::Initial || f.cls == FaceClass::Dirichlet || f.cls == FaceClass::Neumann) {
      const Element& e = mesh.element(f.minus);
      sys.rhs[e.slab].segment(e.cell * nb, nb) += face_load(f, fw, tr[0], data, flux, c);
    }
  }

  sys.diag.resize(nslabs);
  sys.lower.resize(nslabs);
  for (int s = 0; s < nslabs; ++s) {
    sys.diag[s].resize(sys.block_size, sys.block_size);
    sys.diag[s].setFromTriplets(dtrip[s].begin(), dtrip[s].end());
    sys.lower[s].resize(sys.block_size, sys.block_size);
    sys.lower[s].setFromTriplets(ltrip[s].begin(), ltrip[s].end());
  }
  (void)ncells;
  return sys;
}

BlockSystem assemble_method1(const TrefftzSpace& space, const FluxParameters& flux, const ProblemData& data,
                             const AssemblyOptions& opts) {
  return assemble(space, Method::I, flux, data, opts);
}

BlockSystem assemble_method2(const TrefftzSpace& space, const FluxParameters& flux, const ProblemData& data,
                             const AssemblyOptions& opts) {
  return assemble(space, Method::II, flux, data, opts);
}

std::vector<Eigen::VectorXd> assemble_nonhomogeneous_rhs(const TrefftzSpace& space, Method method,
                                                         const FluxParameters& flux, const ProblemData& data,
                                                         const Field& particular, const AssemblyOptions& opts) {
  flux.validate();
  const SpaceTimeMesh& mesh = space.mesh();
  const int nb = space.local_size();
  const double c = space.wave_speed();
  const int n = default_order(space, opts);
  std::vector<Eigen::VectorXd> rhs(mesh.num_slabs(), Eigen::VectorXd::Zero(space.slab_size()));
  auto rows = [&](int e) { return rhs[mesh.element(e).slab].segment(mesh.element(e).cell * nb, nb); };

  for (const FaceRecord& f : mesh.faces()) {
    const FaceWeights fw = face_weights(mesh, f, method, flux, n);
    const int elems[2] = {f.minus, f.plus};
    const int nsides = f.plus >= 0 ? 2 : 1;
    Traces tr[2], u1[2];
    for (int s = 0; s < nsides; ++s) {
      tr[s] = side_traces(space, elems[s], fw, method);
      u1[s] = particular.sample(elems[s], fw.rule.x, fw.rule.t);
      if (method == Method::II) u1[s] = u1[s].transformed(fw.M);
    }
    if (f.cls == FaceClass::Initial || f.cls == FaceClass::Dirichlet || f.cls == FaceClass::Neumann)
      rows(f.minus) += face_load(f, fw, tr[0], data, flux, c);
    if (f.cls == FaceClass::Initial) continue;
    for (int sa = 0; sa < nsides; ++sa)
      for (int sb = 0; sb < nsides; ++sb) {
        if (f.cls == FaceClass::SpaceLikeInternal && sb == 1) continue;
        rows(elems[sa]) -= face_form(f, fw, tr[sa], sa, u1[sb], sb, flux, c, opts.corrupt_flux_sign).col(0);
      }
  }

  if (data.f) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const QuadratureRule q = rule_for(mesh, {EntityKind::Element, e}, n);
      const Eigen::VectorXd& O = method == Method::I ? q.weights : q.hat_weights;
      Eigen::VectorXd fv(q.size());
      for (int j = 0; j < q.size(); ++j) fv(j) = data.f(q.x.col(j), q.t(j));
      const Traces t = space.tabulate(e, q.x, q.t);
      rows(e) += t.v.transpose() * O.cwiseProduct(fv);
    }
  }
  return rhs;
}

}  // namespace tdg
