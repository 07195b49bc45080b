#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tdg/assembly.hpp"
#include "tdg/field.hpp"
#include "tdg/mesh.hpp"

namespace tdg {

struct SeminormOptions {
  CoordinateFrame frame = CoordinateFrame::Physical;
  int slab_limit = -1;  // >= 0 restricts the field to slabs 0..slab_limit
  int quad_order = 0;   // 0 picks 6
  double c = 1.0;
  // Hat frame only: weight the Neumann term by beta |Lambda^{1/2} P n|, the
  // weight the hat-domain form carries.
  bool hat_neumann_scale = false;
};

double dg_seminorm(const SpaceTimeMesh& mesh, const Field& u, const FluxParameters& flux, const SeminormOptions& opts = {});
double dg_plus_seminorm(const SpaceTimeMesh& mesh, const Field& u, const FluxParameters& flux,
                        const SeminormOptions& opts = {});

// det(Lambda^{1/4}) lambda_min^{-1/4}
double transformation_stability_constant(const Anisotropy& A);

struct L2Error {
  double err_v = 0, err_sigma = 0;   // relative unless flagged
  double abs_v = 0, abs_sigma = 0;
  double norm_v = 0, norm_sigma = 0;
  bool absolute_v = false, absolute_sigma = false;
};

// t must be a slab boundary; traces come from the slab ending at t (slab 0 for t = 0).
L2Error l2_error_at_time(const SpaceTimeMesh& mesh, const Field& approx, const Field& exact, double t, int quad_order = 0);

// rate_k = log(e_{k-1}/e_k) / log(h_{k-1}/h_k); first entry NaN.
std::vector<double> rates(const std::vector<double>& errors, const std::vector<double>& h);
// rate_k = log(e_k/e_{k-1}) / log(rho_k/rho_{k-1}); 0 when rho does not change.
std::vector<double> rho_rates(const std::vector<double>& errors, const std::vector<double>& rho);

struct ErrorReport {
  int level = 0;
  double h = 0, h_hat = 0;
  long long dofs = 0;
  double err_v = 0, err_sigma = 0, err_dg = 0, err_dg_plus = 0;
  bool absolute = false;  // some error was reported absolute
  double rho = 1;
};

}  // namespace tdg
