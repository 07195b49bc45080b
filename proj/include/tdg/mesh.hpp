#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdg/anisotropy.hpp"

namespace tdg {

enum class FaceClass { SpaceLikeInternal, TimeLikeInternal, Initial, Final, Dirichlet, Neumann };
const char* to_string(FaceClass cls);

enum class BoundaryType { Dirichlet, Neumann };
enum class CoordinateFrame { Physical, Hat };

struct DomainSpec {
  CoordinateFrame frame = CoordinateFrame::Physical;
  Eigen::VectorXd lower, upper;
  double final_time = 1.0;

  static DomainSpec unit_box(int d, CoordinateFrame frame, double T = 1.0);
};

// One entry per side of the box: index 2*i is {x_i = lower}, 2*i+1 is {x_i = upper}.
struct BoundarySpec {
  std::vector<BoundaryType> sides;

  static BoundarySpec all(int d, BoundaryType type);
  // Dirichlet on the two x_1 sides, Neumann elsewhere.
  static BoundarySpec mixed(int d);
  // Every side must appear in exactly one list.
  static BoundarySpec from_lists(int d, const std::vector<int>& dirichlet, const std::vector<int>& neumann);

  BoundaryType side(int axis, bool upper) const { return sides.at(2 * axis + (upper ? 1 : 0)); }
};

// Physical parallelotope x = center + J xi, xi in [-1,1]^d.
struct SpatialCell {
  int id = 0;
  std::array<int, 3> index{0, 0, 0};
  Eigen::VectorXd center;
  Eigen::MatrixXd jacobian;
  Eigen::VectorXd hat_center;
  Eigen::MatrixXd hat_jacobian;
  double volume = 0, hat_volume = 0;
  double diameter = 0, hat_diameter = 0;
};

struct Element {
  int id = 0;
  int cell = 0;
  int slab = 0;
  double t0 = 0, t1 = 0;
};

struct FaceRecord {
  int id = 0;
  FaceClass cls = FaceClass::TimeLikeInternal;
  // Space-like: minus is the earlier slab. Time-like: minus is the cell with
  // the lower grid index and the normal points from minus to plus. Boundary,
  // F0 and FT faces: minus is the only element, plus = -1.
  int minus = -1, plus = -1;
  int slab = 0;          // slab of minus
  int boundary_side = -1;  // 2*axis + upper for lateral boundary faces
  double measure = 0, hat_measure = 0;
  Eigen::VectorXd normal;      // physical spatial unit normal (zero when space-like)
  double normal_t = 0;         // temporal component
  Eigen::VectorXd hat_normal;  // unit normal in hat coordinates
  double normal_scale = 0;     // |Lambda^{1/2} P n|
  // Geometry: x = origin + tangents xi, xi in [-1,1]^m, t in [t0, t1].
  Eigen::VectorXd origin;
  Eigen::MatrixXd tangents;
  double t0 = 0, t1 = 0;

  bool time_like() const { return t1 > t0; }
};

class SpaceTimeMesh {
 public:
  int dim() const { return d_; }
  int level() const { return level_; }
  const Anisotropy& tensor() const { return *tensor_; }
  std::shared_ptr<const Anisotropy> tensor_ptr() const { return tensor_; }
  const DomainSpec& domain() const { return domain_; }
  const BoundarySpec& boundary() const { return boundary_; }

  int num_slabs() const { return static_cast<int>(time_nodes_.size()) - 1; }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  const std::vector<double>& time_nodes() const { return time_nodes_; }
  const std::array<int, 3>& cells_per_axis() const { return cells_per_axis_; }

  const SpatialCell& cell(int i) const { return cells_.at(i); }
  const Element& element(int e) const { return elements_.at(e); }
  const FaceRecord& face(int f) const { return faces_.at(f); }
  const std::vector<SpatialCell>& cells() const { return cells_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<FaceRecord>& faces() const { return faces_; }
  const std::vector<int>& element_faces(int e) const { return element_faces_.at(e); }

  int element_id(int cell, int slab) const { return slab * num_cells() + cell; }

  // Grid spacing in the generating frame, and slab length (uniform meshes).
  double grid_spacing() const { return grid_spacing_; }
  double time_step() const { return time_nodes_[1] - time_nodes_[0]; }
  double max_diameter() const;
  double max_hat_diameter() const;
  // max over elements of max(hat diameter, c h_n) over the min of the same.
  double quasi_uniformity(double c = 1.0) const;

  friend SpaceTimeMesh generate(const DomainSpec&, std::shared_ptr<const Anisotropy>, int, int, const BoundarySpec&);
  friend SpaceTimeMesh generate_cells(const DomainSpec&, std::shared_ptr<const Anisotropy>, int, int, const BoundarySpec&);

 private:
  int d_ = 1, level_ = 0;
  std::shared_ptr<const Anisotropy> tensor_;
  DomainSpec domain_;
  BoundarySpec boundary_;
  std::array<int, 3> cells_per_axis_{1, 1, 1};
  double grid_spacing_ = 1;
  std::vector<double> time_nodes_;
  std::vector<SpatialCell> cells_;
  std::vector<Element> elements_;
  std::vector<FaceRecord> faces_;
  std::vector<std::vector<int>> element_faces_;
};

// 2^level cells per axis on the box in its own frame, N uniform slabs.
SpaceTimeMesh generate(const DomainSpec& domain, std::shared_ptr<const Anisotropy> tensor, int level, int time_steps,
                       const BoundarySpec& boundary);
// Same with an arbitrary number of cells per axis; level() reports 0.
SpaceTimeMesh generate_cells(const DomainSpec& domain, std::shared_ptr<const Anisotropy> tensor, int cells_per_axis,
                             int time_steps, const BoundarySpec& boundary);

struct GeometryReport {
  double diameter_ratio_min = 0;  // min over cells of hat_h ||Lambda^{1/2}|| / h
  double diameter_ratio_max = 0;
  double area_ratio_max = 0;  // max over faces of (|F|/|F_hat|) / (det(Lambda^{1/2}) lambda_min^{-1/2})
};

GeometryReport verify_geometry_lemmas(const SpaceTimeMesh& mesh);

// sqrt(det(T^T T)) for a d x m matrix; 1 when m = 0.
double gram_factor(const Eigen::MatrixXd& T);

// Text listing: "element <id> <cell> <slab> <t0> <t1> <volume>" then
// "face <id> <class> <minus> <plus> <measure> <hat_measure> <n_x...> <n_t>".
void write_mesh_dump(const SpaceTimeMesh& mesh, std::ostream& os);

}  // namespace tdg
