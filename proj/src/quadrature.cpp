#include "tdg/quadrature.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace tdg {

namespace {

// (P_n(z), P_n'(z)) by the three-term recurrence.
std::pair<double, double> legendre(int n, double z) {
  double p0 = 1, p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (z * p1 - p0) / (z * z - 1)};
}

}  // namespace

GaussRule gauss_1d(int n) {
  if (n < 1 || n > 32) raise(ErrorKind::UnsupportedOrder, "Gauss-Legendre order " + std::to_string(n) + " unsupported");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = legendre(n, z).second;
    const double w = 1.0 / ((1 - z * z) * dp * dp);
    r.nodes[i] = 0.5 * (1 - z);
    r.nodes[n - 1 - i] = 0.5 * (1 + z);
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.5;
  return r;
}

QuadratureRule mapped_rule(const Eigen::VectorXd& origin, const Eigen::MatrixXd& tangents, double t0, double t1, int n,
                           const Eigen::MatrixXd& S) {
  const GaussRule g = gauss_1d(n);
  const int mx = static_cast<int>(tangents.cols());
  const bool timed = t1 > t0;
  const int m = mx + (timed ? 1 : 0);
  int nq = 1;
  for (int i = 0; i < m; ++i) nq *= n;
  QuadratureRule q;
  q.ref_points.resize(m, nq);
  q.ref_weights.resize(nq);
  for (int j = 0; j < nq; ++j) {
    int rem = j;
    double w = 1;
    for (int i = 0; i < m; ++i) {
      const int k = rem % n;
      rem /= n;
      q.ref_points(i, j) = g.nodes[k];
      w *= g.weights[k];
    }
    q.ref_weights(j) = w;
  }
  const double span = timed ? t1 - t0 : 1.0;
  const double factor = std::pow(2.0, mx) * span;
  q.measure = gram_factor(tangents) * factor;
  q.hat_measure = gram_factor(S * tangents) * factor;
  q.x.resize(origin.size(), nq);
  q.t.resize(nq);
  for (int j = 0; j < nq; ++j) {
    Eigen::VectorXd xi = 2.0 * q.ref_points.col(j).head(mx).array() - 1.0;
    q.x.col(j) = origin + tangents * xi;
    q.t(j) = timed ? t0 + q.ref_points(mx, j) * span : t0;
  }
  q.weights = q.ref_weights * q.measure;
  q.hat_weights = q.ref_weights * q.hat_measure;
  return q;
}

QuadratureRule rule_for(const SpaceTimeMesh& mesh, EntityRef entity, int n) {
  const Eigen::MatrixXd& S = mesh.tensor().S();
  if (entity.kind == EntityKind::Element) {
    if (entity.index < 0 || entity.index >= mesh.num_elements())
      raise(ErrorKind::UnknownEntity, "element " + std::to_string(entity.index) + " does not exist");
    const Element& e = mesh.element(entity.index);
    const SpatialCell& c = mesh.cell(e.cell);
    return mapped_rule(c.center, c.jacobian, e.t0, e.t1, n, S);
  }
  if (entity.index < 0 || entity.index >= mesh.num_faces())
    raise(ErrorKind::UnknownEntity, "face " + std::to_string(entity.index) + " does not exist");
  const FaceRecord& f = mesh.face(entity.index);
  return mapped_rule(f.origin, f.tangents, f.t0, f.t1, n, S);
}

}  // namespace tdg
