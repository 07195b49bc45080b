#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdg/anisotropy.hpp"

namespace tdg {

struct PropertyOptions {
  std::uint64_t seed = 42;
  bool random_tensor = false;  // false: A = I
  double rho_max = 100.0;
  int dim = 2;
  bool corrupt_flux_sign = false;
  int samples = 20;          // random discrete functions for the identity checks
  int continuity_pairs = 100;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  double value = 0;  // measured quantity (residual, worst ratio, ...)
  double tol = 0;
  std::string detail;
};

// SPD matrix with eigenvalues log-uniform in [1/rho_max, 1] and a random rotation.
Eigen::MatrixXd random_spd(int d, double rho_max, std::mt19937_64& rng);

PropertyResult check_eigen_reconstruction(const PropertyOptions& opts);
PropertyResult check_transform_identities(const PropertyOptions& opts);
PropertyResult check_trefftz_residuals(const PropertyOptions& opts);
PropertyResult check_mesh_lemmas(const PropertyOptions& opts);
PropertyResult check_coercivity(const PropertyOptions& opts);
PropertyResult check_continuity(const PropertyOptions& opts);
PropertyResult check_transformation_stability(const PropertyOptions& opts);
PropertyResult check_patch_test(const PropertyOptions& opts);

// All of the above in a fixed order.
std::vector<PropertyResult> run_property_suite(const PropertyOptions& opts);

}  // namespace tdg
