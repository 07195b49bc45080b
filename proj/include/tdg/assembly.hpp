#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tdg/cases.hpp"
#include "tdg/field.hpp"
#include "tdg/mesh.hpp"
#include "tdg/quadrature.hpp"
#include "tdg/traces.hpp"
#include "tdg/trefftz_basis.hpp"

namespace tdg {

struct FluxParameters {
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 0.5;

  void validate() const;
};

enum class Method { I, II };

struct AssemblyOptions {
  int quad_order = 0;  // points per direction; 0 picks degree + 3
  bool corrupt_flux_sign = false;  // test hook: flips the {{v}} [tau] time-like term
};

// Same Trefftz basis on every element, in the element's local frame.
class TrefftzSpace {
 public:
  TrefftzSpace(std::shared_ptr<const SpaceTimeMesh> mesh, int p, double c = 1.0);

  const SpaceTimeMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const SpaceTimeMesh> mesh_ptr() const { return mesh_; }
  const TrefftzBasis& basis() const { return basis_; }
  int degree() const { return basis_.degree(); }
  double wave_speed() const { return basis_.wave_speed(); }
  int local_size() const { return basis_.size(); }
  int size() const { return local_size() * mesh_->num_elements(); }
  int offset(int element) const { return element * local_size(); }
  int slab_size() const { return local_size() * mesh_->num_cells(); }

  LocalFrame frame(int element) const;
  Traces tabulate(int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const;

 private:
  std::shared_ptr<const SpaceTimeMesh> mesh_;
  TrefftzBasis basis_;
};

// Initial, boundary and source data on physical points.
struct ProblemData {
  std::function<double(const Eigen::VectorXd&)> v0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> sigma0;
  std::function<double(const Eigen::VectorXd&, double)> g_D;
  std::function<double(const Eigen::VectorXd&, double, const Eigen::VectorXd&)> g_N;
  std::function<double(const Eigen::VectorXd&, double)> f;

  static ProblemData from_case(const ManufacturedCase& mc);
  static ProblemData zero(int d);
};

struct BlockSystem {
  std::vector<Eigen::SparseMatrix<double>> diag;   // slab n with itself
  std::vector<Eigen::SparseMatrix<double>> lower;  // slab n with slab n-1 (empty for n = 0)
  std::vector<Eigen::VectorXd> rhs;
  std::vector<int> element_offset;  // first global column of each element
  int block_size = 0;

  int num_slabs() const { return static_cast<int>(diag.size()); }
  int size() const { return block_size * num_slabs(); }
  Eigen::SparseMatrix<double> global_matrix() const;
  Eigen::VectorXd global_rhs() const;
};

// Method-dependent face data: weights over the physical or hat face, the
// map applied to sigma traces, and the flux normal.
struct FaceWeights {
  QuadratureRule rule;
  Eigen::VectorXd omega;
  Eigen::MatrixXd M;
  Eigen::VectorXd m;
  double kappa = 1;
  double beta_n = 1;
  double w_factor = 1;
};

FaceWeights face_weights(const SpaceTimeMesh& mesh, const FaceRecord& face, Method method, const FluxParameters& flux,
                         int n);

// Contribution of the trial traces on side b to the test traces on side a of
// one face (side 0 = minus, 1 = plus). Traces must already carry the sigma map.
Eigen::MatrixXd face_form(const FaceRecord& face, const FaceWeights& fw, const Traces& test, int side_a,
                          const Traces& trial, int side_b, const FluxParameters& flux, double c,
                          bool corrupt = false);

// Load functional contribution of one face for the test traces.
Eigen::VectorXd face_load(const FaceRecord& face, const FaceWeights& fw, const Traces& test, const ProblemData& data,
                          const FluxParameters& flux, double c);

BlockSystem assemble(const TrefftzSpace& space, Method method, const FluxParameters& flux, const ProblemData& data,
                     const AssemblyOptions& opts = {});
BlockSystem assemble_method1(const TrefftzSpace& space, const FluxParameters& flux, const ProblemData& data,
                             const AssemblyOptions& opts = {});
BlockSystem assemble_method2(const TrefftzSpace& space, const FluxParameters& flux, const ProblemData& data,
                             const AssemblyOptions& opts = {});

// l(basis_i) + int_Q f w_i - A(u1; basis_i), slab by slab.
std::vector<Eigen::VectorXd> assemble_nonhomogeneous_rhs(const TrefftzSpace& space, Method method,
                                                         const FluxParameters& flux, const ProblemData& data,
                                                         const Field& particular, const AssemblyOptions& opts = {});

// A(u; w) for all discrete pairs, through the public face kernels (used by
// property checks on the global matrix).
double bilinear_form(const BlockSystem& sys, const Eigen::VectorXd& u, const Eigen::VectorXd& w);

// ---- local DG on tensor Legendre polynomials ----

// Q_q in d space dimensions and time, on [-1,1]^{d+1}.
class LegendreSpace {
 public:
  LegendreSpace(int d, int q);
  int dim() const { return d_; }
  int degree() const { return q_; }
  int size() const { return n_; }

  // values (nq x size), derivatives[k] for k = 0..d-1 (space) and d (time)
  void tabulate(const Eigen::MatrixXd& xi, const Eigen::VectorXd& s, Eigen::MatrixXd& values,
                std::vector<Eigen::MatrixXd>* derivatives) const;

 private:
  int d_, q_, n_;
};

enum class LocalMode { Overlapping, Nonoverlapping };

// Region on which the local problems are posed: zero initial data, zero
// Dirichlet data on every lateral face. Unknowns are ordered by element.
struct LocalRegion {
  std::shared_ptr<const SpaceTimeMesh> mesh;
  LegendreSpace space;
  int components = 0;  // d + 1
  int local_size() const { return components * space.size(); }
  int size() const { return local_size() * mesh->num_elements(); }
  int center_cell() const;  // overlapping mode: the cell standing for K
};

// Overlapping: a box of patch^d cells (patch odd), each gamma times a global
// cell, centred at the origin. Nonoverlapping: one slab of the global grid.
LocalRegion make_local_region(const SpaceTimeMesh& global, LocalMode mode, int q, double gamma = 1.0, int patch = 1);

// Traces of all local unknowns of region element e (columns cover v and each sigma_k).
Traces local_traces(const LocalRegion& region, int element, const Eigen::MatrixXd& x, const Eigen::VectorXd& t);

Eigen::SparseMatrix<double> assemble_local_matrix(const LocalRegion& region, const FluxParameters& flux, double c,
                                                  int n, bool corrupt = false);

// int f(x + shift, t + t_shift) w over the region.
Eigen::VectorXd assemble_local_rhs(const LocalRegion& region, const std::function<double(const Eigen::VectorXd&, double)>& f,
                                   const Eigen::VectorXd& shift, double t_shift, int n);

}  // namespace tdg
