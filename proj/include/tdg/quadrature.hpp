#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tdg/mesh.hpp"

namespace tdg {

struct GaussRule {
  std::vector<double> nodes;    // in (0, 1)
  std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre on [0,1], exact to degree 2n-1; 1 <= n <= 32.
GaussRule gauss_1d(int n);

// Tensor rule on a parallelotope (or a lower-dimensional face of one) times
// an optional time interval. Reference points live in [0,1]^m.
struct QuadratureRule {
  Eigen::MatrixXd ref_points;  // m x nq
  Eigen::VectorXd ref_weights;
  Eigen::MatrixXd x;            // d x nq physical points
  Eigen::VectorXd t;            // nq
  Eigen::VectorXd weights;      // physical measure weights
  Eigen::VectorXd hat_weights;  // hat measure weights
  double measure = 0, hat_measure = 0;

  int size() const { return static_cast<int>(t.size()); }
};

// x = origin + tangents (2r - 1); t = t0 + r_t (t1 - t0) when t1 > t0, else t = t0.
// S maps physical to hat coordinates for the hat weights.
QuadratureRule mapped_rule(const Eigen::VectorXd& origin, const Eigen::MatrixXd& tangents, double t0, double t1, int n,
                           const Eigen::MatrixXd& S);

enum class EntityKind { Element, Face };
struct EntityRef {
  EntityKind kind;
  int index;
};

QuadratureRule rule_for(const SpaceTimeMesh& mesh, EntityRef entity, int n);

}  // namespace tdg
