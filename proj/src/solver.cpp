#include "tdg/solver.hpp"

#include <cmath>
#include <string>

#include "tdg/error.hpp"

namespace tdg {

void BlockFactor::factor(const Eigen::SparseMatrix<double>& A, int slab, const SolveOptions& opts) {
  dense_ = A.rows() <= opts.dense_limit;
  const std::string where = "diagonal block of slab " + std::to_string(slab);
  if (dense_) {
    const Eigen::MatrixXd D(A);
    lu_.compute(D);
    const double norm = D.cwiseAbs().rowwise().sum().maxCoeff();
    const double piv = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(norm > 0) || !(piv >= opts.singular_tol * norm))
      throw SingularBlockError(slab, where + " is singular (pivot " + std::to_string(piv) + ")");
  } else {
    slu_.analyzePattern(A);
    slu_.factorize(A);
    if (slu_.info() != Eigen::Success) throw SingularBlockError(slab, where + " is singular: " + slu_.lastErrorMessage());
  }
}

Eigen::VectorXd BlockFactor::solve(const Eigen::VectorXd& b) const {
  if (dense_) return lu_.solve(b);
  return const_cast<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>&>(slu_).solve(b);
}

namespace {

bool same_matrix(const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b) {
  if (a.rows() != b.rows()) return false;
  const double nb = b.norm();
  return (a - b).norm() <= 1e-13 * nb;
}

}  // namespace

Eigen::VectorXd solve_blocks(const BlockSystem& sys, const std::vector<Eigen::VectorXd>& rhs, SolveReport* report,
                             const SolveOptions& opts) {
  const int B = sys.block_size;
  Eigen::VectorXd x(sys.size());
  BlockFactor lu;
  int factored = -1;
  for (int n = 0; n < sys.num_slabs(); ++n) {
    Eigen::VectorXd b = rhs[n];
    if (n > 0) b -= sys.lower[n] * x.segment((n - 1) * B, B);
    if (factored < 0 || !opts.reuse_factorization || !same_matrix(sys.diag[n], sys.diag[factored])) {
      lu.factor(sys.diag[n], n, opts);
      factored = n;
      if (report) ++report->factorizations;
    }
    Eigen::VectorXd xn = lu.solve(b);
    const double bn = b.norm();
    const double res = bn > 0 ? (sys.diag[n] * xn - b).norm() / bn : (sys.diag[n] * xn).norm();
    if (!std::isfinite(res) || res > 1e-6)
      throw SingularBlockError(n, "slab " + std::to_string(n) + " solve failed (relative residual " + std::to_string(res) + ")");
    if (report) report->residuals.push_back(res);
    x.segment(n * B, B) = xn;
  }
  return x;
}

Traces DiscreteSolution::sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const {
  return space_->tabulate(element, x, t).times(block(element));
}

DiscreteSolution solve(std::shared_ptr<const TrefftzSpace> space, const BlockSystem& sys, Method method,
                       SolveReport* report, const SolveOptions& opts) {
  Eigen::VectorXd x = solve_blocks(sys, sys.rhs, report, opts);
  return DiscreteSolution(std::move(space), std::move(x), method);
}

Traces ParticularSolution::sample(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const {
  const Piece& pc = pieces_.at(element);
  const int d = static_cast<int>(x.rows());
  const Eigen::MatrixXd xi = pc.jacobian_inv * (x.colwise() - pc.center);
  const Eigen::VectorXd s = (2.0 / pc.ht) * (t.array() - pc.t_mid).matrix();
  Eigen::MatrixXd phi;
  space_.tabulate(xi, s, phi, nullptr);
  const int nb = space_.size();
  Traces r;
  r.v = phi * pc.coeffs.segment(0, nb);
  for (int k = 0; k < d; ++k) r.sigma.push_back(phi * pc.coeffs.segment((k + 1) * nb, nb));
  return r;
}

ParticularSolution solve_particular(const SpaceTimeMesh& mesh, int q,
                                    const std::function<double(const Eigen::VectorXd&, double)>& f,
                                    const FluxParameters& flux, double c, const ParticularOptions& opts,
                                    SolveReport* report) {
  const LocalRegion region = make_local_region(mesh, opts.mode, q, opts.gamma, opts.patch);
  const int n = opts.quad_order > 0 ? opts.quad_order : q + 3;
  const int nl = region.local_size();
  std::vector<ParticularSolution::Piece> pieces(mesh.num_elements());
  const double ht = mesh.time_step();

  const Eigen::SparseMatrix<double> M = f ? assemble_local_matrix(region, flux, c, n) : Eigen::SparseMatrix<double>();
  BlockFactor lu;
  if (f) {
    lu.factor(M, 0, opts.solve);
    if (report) ++report->factorizations;
  }
  auto check = [&](const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b, int slab) {
    const double bn = b.norm();
    const double res = bn > 0 ? (A * x - b).norm() / bn : 0.0;
    if (!std::isfinite(res) || res > 1e-6)
      throw SingularBlockError(slab, "local solve in slab " + std::to_string(slab) + " failed");
    if (report) report->residuals.push_back(res);
  };

  if (opts.mode == LocalMode::Overlapping) {
    const int kc = region.center_cell();
    const SpatialCell& rc = region.mesh->cell(kc);
    const Eigen::MatrixXd Jinv = rc.jacobian.inverse();
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Element& el = mesh.element(e);
      const SpatialCell& cell = mesh.cell(el.cell);
      ParticularSolution::Piece& pc = pieces[e];
      pc.center = cell.center + rc.center;
      pc.jacobian_inv = Jinv;
      pc.t_mid = el.t0 + 0.5 * ht;
      pc.ht = ht;
      if (!f) {
        pc.coeffs = Eigen::VectorXd::Zero(nl);
        continue;
      }
      const Eigen::VectorXd b = assemble_local_rhs(region, f, cell.center, el.t0, n);
      const Eigen::VectorXd x = lu.solve(b);
      pc.coeffs = x.segment(kc * nl, nl);
      if (e == 0 || e + 1 == mesh.num_elements()) check(M, x, b, el.slab);
    }
  } else {
    for (int s = 0; s < mesh.num_slabs(); ++s) {
      const double t0 = mesh.time_nodes()[s];
      Eigen::VectorXd x = Eigen::VectorXd::Zero(region.size());
      if (f) {
        const Eigen::VectorXd b = assemble_local_rhs(region, f, Eigen::VectorXd::Zero(mesh.dim()), t0, n);
        x = lu.solve(b);
        check(M, x, b, s);
      }
      for (int cidx = 0; cidx < mesh.num_cells(); ++cidx) {
        const SpatialCell& rc = region.mesh->cell(cidx);
        ParticularSolution::Piece& pc = pieces[mesh.element_id(cidx, s)];
        pc.coeffs = x.segment(cidx * nl, nl);
        pc.center = rc.center;
        pc.jacobian_inv = rc.jacobian.inverse();
        pc.t_mid = t0 + 0.5 * ht;
        pc.ht = ht;
      }
    }
  }
  return ParticularSolution(mesh.dim(), q, std::move(pieces));
}

}  // namespace tdg
