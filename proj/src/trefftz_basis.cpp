#include "tdg/trefftz_basis.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace tdg {

namespace {

// All spatial multi-indices of total degree exactly `deg` in d variables.
std::vector<std::array<int, 3>> spatial_indices(int d, int deg) {
  std::vector<std::array<int, 3>> out;
  if (d == 1) {
    out.push_back({deg, 0, 0});
  } else if (d == 2) {
    for (int a = deg; a >= 0; --a) out.push_back({a, deg - a, 0});
  } else {
    for (int a = deg; a >= 0; --a)
      for (int b = deg - a; b >= 0; --b) out.push_back({a, b, deg - a - b});
  }
  return out;
}

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Polynomial seeded_member(int d, int k0, const std::array<int, 3>& alpha, int p, double c) {
  const int deg = alpha[0] + alpha[1] + alpha[2];
  // Seeding with (k0 + deg)! keeps every recurrence value integral.
  const double seed = factorial(k0 + deg);
  std::map<Exponents, double> level;
  level[Exponents{k0, alpha[0], alpha[1], alpha[2]}] = seed;
  Polynomial u(d);
  for (const auto& [e, a] : level) u.add_term(e, a);
  for (int k = k0 + 2; k <= p; k += 2) {
    std::map<Exponents, double> next;
    for (const auto& [e, a] : level)
      for (int m = 1; m <= d; ++m) {
        if (e[m] < 2) continue;
        Exponents f = e;
        f[0] = k;
        f[m] -= 2;
        next[f] += a * e[m] * (e[m] - 1);
      }
    for (auto& [e, a] : next) a = c * c * a / (k * (k - 1));
    if (next.empty()) break;
    for (const auto& [e, a] : next) u.add_term(e, a);
    level = std::move(next);
  }
  if (c == 1.0) {
    long long g = 0;
    for (const auto& [e, a] : u.terms()) g = std::gcd(g, static_cast<long long>(std::llround(std::abs(a))));
    if (g > 1) u *= 1.0 / static_cast<double>(g);
  } else {
    u *= 1.0 / seed;
  }
  return u;
}

}  // namespace

long long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long dim_scalar(int p, int d) {
  if (p < 0 || d < 1) raise(ErrorKind::InvalidArgument, "dim_scalar needs p >= 0 and d >= 1");
  if (p == 0) return 1;
  return binomial(p + d, d) + binomial(p - 1 + d, d);
}

ScalarTrefftzSpace build_scalar_space(int p, int d, double c) {
  if (p < 0) raise(ErrorKind::InvalidArgument, "Trefftz degree must be nonnegative");
  if (d < 1 || d > 3) raise(ErrorKind::DimensionMismatch, "spatial dimension must be 1, 2 or 3");
  ScalarTrefftzSpace space;
  space.d = d;
  space.p = p;
  space.c = c;
  for (int k0 = 0; k0 <= 1; ++k0)
    for (int deg = 0; deg <= p - k0; ++deg)
      for (const auto& alpha : spatial_indices(d, deg)) space.members.push_back(seeded_member(d, k0, alpha, p, c));
  return space;
}

Polynomial wave_residual(const Polynomial& u, double c) {
  Polynomial r = derivative(derivative(u, Axis::time()), Axis::time()) * (1.0 / (c * c));
  for (int i = 0; i < u.dim(); ++i) r -= derivative(derivative(u, Axis::space(i)), Axis::space(i));
  return r;
}

FirstOrderResidual first_order_residual(const TrefftzPair& pair, double c) {
  FirstOrderResidual r;
  const int d = pair.w.dim();
  r.mass = derivative(pair.w, Axis::time()) * (1.0 / (c * c));
  for (int i = 0; i < d; ++i) {
    r.momentum.push_back(derivative(pair.w, Axis::space(i)) + derivative(pair.tau[i], Axis::time()));
    r.mass += derivative(pair.tau[i], Axis::space(i));
  }
  return r;
}

TrefftzBasis::TrefftzBasis(int p, int d, double c, std::shared_ptr<const Anisotropy> tensor)
    : p_(p), d_(d), c_(c), tensor_(std::move(tensor)) {
  if (!tensor_ || tensor_->dim() != d) raise(ErrorKind::DimensionMismatch, "basis tensor dimension differs from d");
  if (!(c > 0)) raise(ErrorKind::InvalidArgument, "wave speed must be positive");
  // Unit-speed local variables; c enters through the time scaling of the frame.
  const ScalarTrefftzSpace space = build_scalar_space(p + 1, d, 1.0);
  for (const Polynomial& b : space.members) {
    if (b.degree() == 0) continue;
    TrefftzPair pr;
    pr.w = derivative(b, Axis::time());
    for (int i = 0; i < d; ++i) pr.tau.push_back(derivative(b, Axis::space(i)) * -1.0);
    double top = 0;
    for (const auto& [e, a] : pr.w.terms()) top = std::max(top, std::abs(a));
    for (const auto& t : pr.tau)
      for (const auto& [e, a] : t.terms()) top = std::max(top, std::abs(a));
    pairs_.push_back(std::move(pr));
    scale_.push_back(1.0 / top);
  }

  std::map<Exponents, int> index;
  for (int deg = 0; deg <= p; ++deg)
    for (int k = 0; k <= deg; ++k)
      for (const auto& alpha : spatial_indices(d, deg - k)) {
        Exponents e{k, alpha[0], alpha[1], alpha[2]};
        index[e] = static_cast<int>(monomials_.size());
        monomials_.push_back(e);
      }
  const int nmon = static_cast<int>(monomials_.size());
  coeff_w_ = Eigen::MatrixXd::Zero(nmon, size());
  coeff_tau_.assign(d, Eigen::MatrixXd::Zero(nmon, size()));
  for (int j = 0; j < size(); ++j) {
    for (const auto& [e, a] : pairs_[j].w.terms()) coeff_w_(index.at(e), j) = a * scale_[j];
    for (int i = 0; i < d; ++i)
      for (const auto& [e, a] : pairs_[j].tau[i].terms()) coeff_tau_[i](index.at(e), j) = a * scale_[j];
  }
}

const TrefftzPair& TrefftzBasis::pair(int j) const {
  if (j < 0 || j >= size()) raise(ErrorKind::IndexOutOfRange, "basis index " + std::to_string(j) + " out of range");
  return pairs_[j];
}

double TrefftzBasis::scale(int j) const {
  pair(j);
  return scale_[j];
}

LocalFrame TrefftzBasis::identity_frame() const {
  LocalFrame f;
  f.hat_center = Eigen::VectorXd::Zero(d_);
  return f;
}

PairValue TrefftzBasis::evaluate_hat(int j, const Eigen::VectorXd& xh, double t, const LocalFrame& frame) const {
  const TrefftzPair& pr = pair(j);
  if (xh.size() != d_) raise(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
  const Eigen::VectorXd eta = (xh - frame.hat_center) / frame.half_width;
  const double s = c_ * (t - frame.t_mid) / frame.half_width;
  PairValue out;
  out.w = c_ * scale_[j] * pr.w(eta, s);
  out.tau.resize(d_);
  for (int i = 0; i < d_; ++i) out.tau(i) = scale_[j] * pr.tau[i](eta, s);
  return out;
}

PairValue TrefftzBasis::evaluate_physical(int j, const Eigen::VectorXd& x, double t, const LocalFrame& frame) const {
  if (x.size() != d_) raise(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
  PairValue hv = evaluate_hat(j, tensor_->to_hat(x), t, frame);
  hv.tau = tensor_->pull_sigma(hv.tau);
  return hv;
}

Eigen::MatrixXd TrefftzBasis::monomial_table(const LocalFrame& frame, const Eigen::MatrixXd& x,
                                             const Eigen::VectorXd& t) const {
  const int nq = static_cast<int>(x.cols());
  const Eigen::MatrixXd eta = ((tensor_->S() * x).colwise() - frame.hat_center) / frame.half_width;
  Eigen::MatrixXd table(nq, monomials_.size());
  std::array<Eigen::MatrixXd, 4> pw;
  for (int s = 0; s <= d_; ++s) {
    pw[s].resize(nq, p_ + 1);
    pw[s].col(0).setOnes();
    const Eigen::VectorXd base =
        s == 0 ? Eigen::VectorXd(c_ * (t.array() - frame.t_mid) / frame.half_width) : Eigen::VectorXd(eta.row(s - 1).transpose());
    for (int k = 1; k <= p_; ++k) pw[s].col(k) = pw[s].col(k - 1).cwiseProduct(base);
  }
  for (std::size_t m = 0; m < monomials_.size(); ++m) {
    const Exponents& e = monomials_[m];
    Eigen::VectorXd col = pw[0].col(e[0]);
    for (int s = 1; s <= d_; ++s)
      if (e[s] > 0) col = col.cwiseProduct(pw[s].col(e[s]));
    table.col(m) = col;
  }
  return table;
}

Traces TrefftzBasis::tabulate(const LocalFrame& frame, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const {
  if (x.rows() != d_ || x.cols() != t.size()) raise(ErrorKind::DimensionMismatch, "tabulation points malformed");
  const Eigen::MatrixXd table = monomial_table(frame, x, t);
  Traces out;
  out.v = c_ * (table * coeff_w_);
  std::vector<Eigen::MatrixXd> tau_hat(d_);
  for (int i = 0; i < d_; ++i) tau_hat[i] = table * coeff_tau_[i];
  const Eigen::MatrixXd& P = tensor_->P();
  out.sigma.assign(d_, Eigen::MatrixXd::Zero(table.rows(), size()));
  for (int k = 0; k < d_; ++k)
    for (int i = 0; i < d_; ++i)
      if (P(i, k) != 0.0) out.sigma[k] += P(i, k) * tau_hat[i];
  return out;
}

TrefftzBasis build_first_order_basis(int p, int d, double c, std::shared_ptr<const Anisotropy> tensor) {
  return TrefftzBasis(p, d, c, std::move(tensor));
}

double min_singular_value(const std::vector<Polynomial>& members) {
  std::map<Exponents, int> index;
  for (const auto& m : members)
    for (const auto& [e, a] : m.terms()) index.emplace(e, 0);
  int r = 0;
  for (auto& [e, i] : index) i = r++;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(r, members.size());
  for (std::size_t j = 0; j < members.size(); ++j) {
    for (const auto& [e, a] : members[j].terms()) G(index.at(e), j) = a;
    const double n = G.col(j).norm();
    if (n > 0) G.col(j) /= n;
  }
  if (G.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  if (G.rows() < G.cols()) return 0;
  return svd.singularValues().minCoeff();
}

}  // namespace tdg
