#include "tdg/mesh.hpp"

#include <cmath>
#include <ostream>
#include <set>

namespace tdg {

const char* to_string(FaceClass cls) {
  switch (cls) {
    case FaceClass::SpaceLikeInternal: return "space";
    case FaceClass::TimeLikeInternal: return "time";
    case FaceClass::Initial: return "F0";
    case FaceClass::Final: return "FT";
    case FaceClass::Dirichlet: return "FD";
    case FaceClass::Neumann: return "FN";
  }
  return "?";
}

DomainSpec DomainSpec::unit_box(int d, CoordinateFrame frame, double T) {
  DomainSpec s;
  s.frame = frame;
  s.lower = Eigen::VectorXd::Zero(d);
  s.upper = Eigen::VectorXd::Ones(d);
  s.final_time = T;
  return s;
}

BoundarySpec BoundarySpec::all(int d, BoundaryType type) {
  BoundarySpec b;
  b.sides.assign(2 * d, type);
  return b;
}

BoundarySpec BoundarySpec::mixed(int d) {
  BoundarySpec b = all(d, BoundaryType::Neumann);
  b.sides[0] = b.sides[1] = BoundaryType::Dirichlet;
  return b;
}

BoundarySpec BoundarySpec::from_lists(int d, const std::vector<int>& dirichlet, const std::vector<int>& neumann) {
  std::vector<int> seen(2 * d, 0);
  BoundarySpec b;
  b.sides.assign(2 * d, BoundaryType::Neumann);
  auto mark = [&](const std::vector<int>& list, BoundaryType type) {
    for (int s : list) {
      if (s < 0 || s >= 2 * d) raise(ErrorKind::InvalidBoundarySpec, "boundary side " + std::to_string(s) + " out of range");
      if (seen[s]++) raise(ErrorKind::InvalidBoundarySpec, "boundary side " + std::to_string(s) + " assigned twice");
      b.sides[s] = type;
    }
  };
  mark(dirichlet, BoundaryType::Dirichlet);
  mark(neumann, BoundaryType::Neumann);
  for (int s = 0; s < 2 * d; ++s)
    if (!seen[s]) raise(ErrorKind::InvalidBoundarySpec, "boundary side " + std::to_string(s) + " not assigned");
  return b;
}

double gram_factor(const Eigen::MatrixXd& T) {
  if (T.cols() == 0) return 1.0;
  return std::sqrt(std::abs((T.transpose() * T).determinant()));
}

namespace {

double parallelotope_diameter(const Eigen::MatrixXd& J) {
  const int d = static_cast<int>(J.rows());
  double best = 0;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Eigen::VectorXd xi(d);
    for (int i = 0; i < d; ++i) xi(i) = (mask >> i) & 1 ? 1.0 : -1.0;
    best = std::max(best, 2.0 * (J * xi).norm());
  }
  return best;
}

Eigen::MatrixXd drop_column(const Eigen::MatrixXd& J, int col) {
  Eigen::MatrixXd T(J.rows(), J.cols() - 1);
  for (int j = 0, k = 0; j < J.cols(); ++j)
    if (j != col) T.col(k++) = J.col(j);
  return T;
}

}  // namespace

double SpaceTimeMesh::max_diameter() const {
  double h = 0;
  for (const auto& c : cells_) h = std::max(h, c.diameter);
  return h;
}

double SpaceTimeMesh::max_hat_diameter() const {
  double h = 0;
  for (const auto& c : cells_) h = std::max(h, c.hat_diameter);
  return h;
}

double SpaceTimeMesh::quasi_uniformity(double c) const {
  double lo = INFINITY, hi = 0;
  for (const auto& e : elements_) {
    const double s = std::max(cells_[e.cell].hat_diameter, c * (e.t1 - e.t0));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi / lo;
}

SpaceTimeMesh generate(const DomainSpec& domain, std::shared_ptr<const Anisotropy> tensor, int level, int time_steps,
                       const BoundarySpec& boundary) {
  if (level < 0 || level > 12) raise(ErrorKind::InvalidDomain, "refinement level out of range");
  SpaceTimeMesh m = generate_cells(domain, std::move(tensor), 1 << level, time_steps, boundary);
  m.level_ = level;
  return m;
}

SpaceTimeMesh generate_cells(const DomainSpec& domain, std::shared_ptr<const Anisotropy> tensor, int cells_per_axis,
                             int time_steps, const BoundarySpec& boundary) {
  if (!tensor) raise(ErrorKind::InvalidArgument, "mesh needs an anisotropy tensor");
  const int d = tensor->dim();
  if (domain.lower.size() != d || domain.upper.size() != d) raise(ErrorKind::InvalidDomain, "domain box has wrong dimension");
  for (int i = 0; i < d; ++i)
    if (!(domain.upper(i) > domain.lower(i))) raise(ErrorKind::InvalidDomain, "degenerate domain box");
  if (!(domain.final_time > 0)) raise(ErrorKind::InvalidDomain, "final time must be positive");
  if (cells_per_axis < 1 || cells_per_axis > 4096) raise(ErrorKind::InvalidDomain, "cell count out of range");
  if (time_steps < 1) raise(ErrorKind::InvalidDomain, "need at least one time step");
  if (static_cast<int>(boundary.sides.size()) != 2 * d)
    raise(ErrorKind::InvalidBoundarySpec, "boundary spec must have 2d sides");

  SpaceTimeMesh m;
  m.d_ = d;
  m.level_ = 0;
  m.tensor_ = tensor;
  m.domain_ = domain;
  m.boundary_ = boundary;
  const int n = cells_per_axis;
  for (int i = 0; i < 3; ++i) m.cells_per_axis_[i] = i < d ? n : 1;
  const Eigen::VectorXd delta = (domain.upper - domain.lower) / n;
  m.grid_spacing_ = delta.maxCoeff();
  const Eigen::MatrixXd G =
      domain.frame == CoordinateFrame::Physical ? Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d)) : tensor->S_inv();
  const Eigen::MatrixXd& S = tensor->S();

  m.time_nodes_.resize(time_steps + 1);
  for (int k = 0; k <= time_steps; ++k) m.time_nodes_[k] = domain.final_time * k / time_steps;

  const int ncells = d == 1 ? n : (d == 2 ? n * n : n * n * n);
  const Eigen::MatrixXd J = G * (0.5 * delta).asDiagonal();
  const Eigen::MatrixXd Jh = S * J;
  const double vol = std::abs(J.determinant()) * std::pow(2.0, d);
  const double hat_vol = std::abs(Jh.determinant()) * std::pow(2.0, d);
  const double diam = parallelotope_diameter(J), hat_diam = parallelotope_diameter(Jh);
  for (int id = 0; id < ncells; ++id) {
    SpatialCell c;
    c.id = id;
    c.index = {id % n, d > 1 ? (id / n) % n : 0, d > 2 ? id / (n * n) : 0};
    Eigen::VectorXd r(d);
    for (int i = 0; i < d; ++i) r(i) = domain.lower(i) + (c.index[i] + 0.5) * delta(i);
    c.center = G * r;
    c.jacobian = J;
    c.hat_center = S * c.center;
    c.hat_jacobian = Jh;
    c.volume = vol;
    c.hat_volume = hat_vol;
    c.diameter = diam;
    c.hat_diameter = hat_diam;
    m.cells_.push_back(std::move(c));
  }

  for (int s = 0; s < time_steps; ++s)
    for (int c = 0; c < ncells; ++c) {
      Element e;
      e.id = static_cast<int>(m.elements_.size());
      e.cell = c;
      e.slab = s;
      e.t0 = m.time_nodes_[s];
      e.t1 = m.time_nodes_[s + 1];
      m.elements_.push_back(e);
    }
  m.element_faces_.assign(m.elements_.size(), {});

  auto add_face = [&](FaceRecord f) {
    f.id = static_cast<int>(m.faces_.size());
    m.element_faces_[f.minus].push_back(f.id);
    if (f.plus >= 0) m.element_faces_[f.plus].push_back(f.id);
    m.faces_.push_back(std::move(f));
  };
  auto space_face = [&](int minus, int plus, double t, FaceClass cls, double nt) {
    FaceRecord f;
    f.cls = cls;
    f.minus = minus;
    f.plus = plus;
    f.slab = m.elements_[minus].slab;
    const SpatialCell& c = m.cells_[m.elements_[minus].cell];
    f.measure = c.volume;
    f.hat_measure = c.hat_volume;
    f.normal = Eigen::VectorXd::Zero(d);
    f.hat_normal = Eigen::VectorXd::Zero(d);
    f.normal_t = nt;
    f.origin = c.center;
    f.tangents = c.jacobian;
    f.t0 = f.t1 = t;
    add_face(std::move(f));
  };
  const Eigen::MatrixXd JinvT = J.inverse().transpose();
  auto lateral_face = [&](int minus, int plus, int axis, bool upper, FaceClass cls, int side) {
    FaceRecord f;
    f.cls = cls;
    f.minus = minus;
    f.plus = plus;
    const Element& e = m.elements_[minus];
    f.slab = e.slab;
    f.boundary_side = side;
    const SpatialCell& c = m.cells_[e.cell];
    Eigen::VectorXd nx = JinvT.col(axis).normalized();
    if (!upper) nx = -nx;
    f.normal = nx;
    auto [nh, mu] = tensor->hat_normal(nx);
    f.hat_normal = nh;
    f.normal_scale = mu;
    f.normal_t = 0;
    f.origin = c.center + (upper ? 1.0 : -1.0) * c.jacobian.col(axis);
    f.tangents = drop_column(c.jacobian, axis);
    f.t0 = e.t0;
    f.t1 = e.t1;
    const double ht = e.t1 - e.t0;
    const double scale = std::pow(2.0, d - 1) * ht;
    f.measure = gram_factor(f.tangents) * scale;
    f.hat_measure = gram_factor(S * f.tangents) * scale;
    add_face(std::move(f));
  };

  auto neighbor = [&](int cell, int axis) {
    const SpatialCell& c = m.cells_[cell];
    if (c.index[axis] + 1 >= n) return -1;
    int stride = axis == 0 ? 1 : (axis == 1 ? n : n * n);
    return cell + stride;
  };

  for (int c = 0; c < ncells; ++c) space_face(m.element_id(c, 0), -1, 0.0, FaceClass::Initial, -1.0);
  for (int s = 0; s < time_steps; ++s) {
    for (int c = 0; c < ncells; ++c)
      for (int axis = 0; axis < d; ++axis) {
        const int nb = neighbor(c, axis);
        if (nb >= 0) lateral_face(m.element_id(c, s), m.element_id(nb, s), axis, true, FaceClass::TimeLikeInternal, -1);
      }
    for (int c = 0; c < ncells; ++c)
      for (int axis = 0; axis < d; ++axis)
        for (int up = 0; up < 2; ++up) {
          const int idx = m.cells_[c].index[axis];
          if ((up == 0 && idx != 0) || (up == 1 && idx != n - 1)) continue;
          const int side = 2 * axis + up;
          const FaceClass cls =
              boundary.sides[side] == BoundaryType::Dirichlet ? FaceClass::Dirichlet : FaceClass::Neumann;
          lateral_face(m.element_id(c, s), -1, axis, up == 1, cls, side);
        }
    for (int c = 0; c < ncells; ++c) {
      if (s + 1 < time_steps)
        space_face(m.element_id(c, s), m.element_id(c, s + 1), m.time_nodes_[s + 1], FaceClass::SpaceLikeInternal, 1.0);
      else
        space_face(m.element_id(c, s), -1, m.time_nodes_[s + 1], FaceClass::Final, 1.0);
    }
  }
  return m;
}

GeometryReport verify_geometry_lemmas(const SpaceTimeMesh& mesh) {
  const Anisotropy& A = mesh.tensor();
  const double norm_sqrt = std::sqrt(A.lambda_max());
  const double bound = A.det_power(0.5) / std::sqrt(A.lambda_min());
  GeometryReport r;
  r.diameter_ratio_min = INFINITY;
  for (const auto& c : mesh.cells()) {
    const double q = c.hat_diameter * norm_sqrt / c.diameter;
    r.diameter_ratio_min = std::min(r.diameter_ratio_min, q);
    r.diameter_ratio_max = std::max(r.diameter_ratio_max, q);
  }
  for (const auto& f : mesh.faces()) {
    if (!f.time_like()) continue;
    r.area_ratio_max = std::max(r.area_ratio_max, (f.measure / f.hat_measure) / bound);
  }
  return r;
}

void write_mesh_dump(const SpaceTimeMesh& mesh, std::ostream& os) {
  os << "# dim " << mesh.dim() << " cells " << mesh.num_cells() << " slabs " << mesh.num_slabs() << " faces "
     << mesh.num_faces() << "\n";
  for (const auto& e : mesh.elements())
    os << "element " << e.id << ' ' << e.cell << ' ' << e.slab << ' ' << e.t0 << ' ' << e.t1 << ' '
       << mesh.cell(e.cell).volume * (e.t1 - e.t0) << "\n";
  for (const auto& f : mesh.faces()) {
    os << "face " << f.id << ' ' << to_string(f.cls) << ' ' << f.minus << ' ' << f.plus << ' ' << f.measure << ' '
       << f.hat_measure;
    for (int i = 0; i < mesh.dim(); ++i) os << ' ' << f.normal(i);
    os << ' ' << f.normal_t << "\n";
  }
}

}  // namespace tdg
