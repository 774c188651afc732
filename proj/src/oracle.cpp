#include "bgk/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>
#include <mutex>

namespace bgk {

namespace {

// weights below this contribute nothing in double precision
constexpr double kNegligibleWeight = 1e-16;
constexpr int kPanelNodes = 16;

// Golub-Welsch on a symmetric tridiagonal Jacobi matrix with zero diagonal
void golub_welsch(const Eigen::VectorXd& offdiag, double mu0, std::vector<double>& x,
                  std::vector<double>& w) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    w[i] = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

const QuadratureGrid& cached_grid(int n) {
  static std::mutex mu;
  static std::map<int, QuadratureGrid> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_hermite(n)).first;
  return it->second;
}

struct Legendre {
  std::vector<double> x, w;
};
const Legendre& legendre16() {
  static const Legendre L = [] {
    Legendre l;
    Eigen::VectorXd off(kPanelNodes - 1);
    for (int i = 1; i < kPanelNodes; ++i) off(i - 1) = i / std::sqrt(4.0 * i * i - 1.0);
    golub_welsch(off, 2.0, l.x, l.w);
    return l;
  }();
  return L;
}

// Perpendicular Gram of (1, v2, v3, |v_perp|^2): <q> = 2, <q^2> = 8
const Eigen::Matrix4d& perp_gram() {
  static const Eigen::Matrix4d Gp = [] {
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    g(0, 0) = 1;
    g(0, 3) = g(3, 0) = 2;
    g(1, 1) = 1;
    g(2, 2) = 1;
    g(3, 3) = 8;
    return g;
  }();
  return Gp;
}

// e_1..e_5 = (1, v1, v2, v3, (|v|^2 - 3)/sqrt 6) in (A, B, C, D) coordinates at v1 = v
Eigen::Matrix<double, 4, 5> basis_block(double v) {
  const double r6 = std::sqrt(6.0);
  Eigen::Matrix<double, 4, 5> A = Eigen::Matrix<double, 4, 5>::Zero();
  A(0, 0) = 1;
  A(0, 1) = v;
  A(1, 2) = 1;
  A(2, 3) = 1;
  A(0, 4) = (v * v - 3) / r6;
  A(3, 4) = 1 / r6;
  return A;
}

void check_resolution(double im, const QuadratureGrid& g, const char* what) {
  const double need = 3 * g.max_spacing();
  if (std::abs(im) < need)
    throw Error(Errc::resolution, std::string(what) + ": |Im zeta| = " + std::to_string(std::abs(im)) +
                                      " below 3 x node spacing " + std::to_string(need));
}

}  // namespace

double QuadratureGrid::max_spacing() const {
  double h = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (weights[i] >= kNegligibleWeight && weights[i + 1] >= kNegligibleWeight)
      h = std::max(h, nodes[i + 1] - nodes[i]);
  return h;
}

QuadratureGrid gauss_hermite(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "gauss_hermite: n must be >= 1");
  QuadratureGrid g;
  if (n == 1) {
    g.nodes = {0.0};
    g.weights = {1.0};
    return g;
  }
  Eigen::VectorXd off(n - 1);
  for (int i = 1; i < n; ++i) off(i - 1) = std::sqrt(static_cast<double>(i));
  golub_welsch(off, 1.0, g.nodes, g.weights);
  return g;
}

cplx quadrature_Z(cplx zeta, const QuadratureGrid& g) {
  check_resolution(zeta.imag(), g, "quadrature_Z");
  cplx s = 0;
  for (std::size_t j = 0; j < g.size(); ++j) s += g.weights[j] / (g.nodes[j] - zeta);
  return s;
}

cplx quadrature_Z(cplx zeta, int n_nodes) { return quadrature_Z(zeta, cached_grid(n_nodes)); }

CMat5 quadrature_green(cplx zeta, const QuadratureGrid& g) {
  check_resolution(zeta.imag(), g, "quadrature_green");
  const auto& Gp = perp_gram();
  CMat5 G = CMat5::Zero();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const auto A = basis_block(g.nodes[j]);
    const Mat5 Q = A.transpose() * Gp * A;
    G += (g.weights[j] / (g.nodes[j] - zeta)) * Q.cast<cplx>();
  }
  return G;
}

cplx quadrature_sigma(cplx lambda, const SpectralParams& p, int n_nodes) {
  check_strip(lambda, p);
  const cplx is = I * (p.k * p.tau);
  const CMat5 GS = quadrature_green(zeta_of(lambda, p), cached_grid(n_nodes)) / is;
  return (GS - CMat5::Identity()).determinant();
}

cplx quadrature_root(cplx guess, const SpectralParams& p, int n_nodes) {
  cplx l = guess;
  for (int it = 0; it < 60; ++it) {
    const double h = 1e-6 * (1 + std::abs(l));
    const cplx f = quadrature_sigma(l, p, n_nodes);
    const cplx df = (quadrature_sigma(l + h, p, n_nodes) - quadrature_sigma(l - h, p, n_nodes)) / (2 * h);
    if (df == 0.0) break;
    const cplx step = f / df;
    l -= step;
    if (std::abs(step) <= 1e-14 * (1 + std::abs(l))) return l;
  }
  throw Error(Errc::non_convergence, "quadrature_root: Newton did not converge");
}

DiscreteOperator::DiscreteOperator(const SpectralParams& p, int n_nodes)
    : p_(p), g_(cached_grid(n_nodes)) {
  if (!(p.k > 0 && p.tau > 0)) throw Error(Errc::invalid_argument, "DiscreteOperator: k, tau must be positive");
  const int n = static_cast<int>(g_.size());
  diag_.resize(4 * n);
  U_.setZero(4 * n, 5);
  wts_.resize(n);
  for (int j = 0; j < n; ++j) {
    const cplx d = -I * (p.k * g_.nodes[j]) - 1.0 / p.tau;
    diag_.segment<4>(4 * j).setConstant(d);
    U_.block<4, 5>(4 * j, 0) = basis_block(g_.nodes[j]).cast<cplx>();
    wts_(j) = g_.weights[j];
  }
}

Eigen::MatrixXcd DiscreteOperator::gram(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) const {
  const auto& Gp = perp_gram();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(X.cols(), Y.cols());
  for (int j = 0; j < wts_.size(); ++j)
    out += wts_(j) * X.middleRows<4>(4 * j).adjoint() * Gp.cast<cplx>() * Y.middleRows<4>(4 * j);
  return out;
}

Eigen::MatrixXcd DiscreteOperator::moments(const Eigen::MatrixXcd& X) const {
  const auto& Gp = perp_gram();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(5, X.cols());
  for (int j = 0; j < wts_.size(); ++j)
    out += wts_(j) * U_.middleRows<4>(4 * j).transpose() * Gp.cast<cplx>() * X.middleRows<4>(4 * j);
  return out;
}

Eigen::MatrixXcd DiscreteOperator::project(const Eigen::MatrixXcd& X) const { return U_ * moments(X); }

Eigen::MatrixXcd DiscreteOperator::apply(const Eigen::MatrixXcd& X) const {
  return diag_.asDiagonal() * X + (1.0 / p_.tau) * project(X);
}

Eigen::MatrixXcd DiscreteOperator::dense() const {
  return apply(Eigen::MatrixXcd::Identity(dim(), dim()));
}

double DiscreteOperator::norm(const Eigen::VectorXcd& x) const {
  return std::sqrt(std::max(0.0, gram(x, x)(0, 0).real()));
}

double DiscreteOperator::op_norm(const Eigen::MatrixXcd& X) const {
  const Eigen::MatrixXcd g = gram(X, X);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Eigen::VectorXcd DiscreteOperator::eigenfunction(cplx lambda, const CVec5& m) const {
  const int n = static_cast<int>(g_.size());
  Eigen::VectorXcd f(4 * n);
  for (int j = 0; j < n; ++j) {
    const cplx den = p_.tau * lambda + 1.0 + I * (p_.tau * p_.k * g_.nodes[j]);
    f.segment<4>(4 * j) = (U_.block<4, 5>(4 * j, 0) * m) / den;
  }
  return f;
}

CMat5 DiscreteOperator::capacitance(cplx w) const {
  const auto& Gp = perp_gram();
  CMat5 K = CMat5::Zero();
  for (int j = 0; j < wts_.size(); ++j) {
    const Eigen::Matrix<double, 4, 5> A = U_.block<4, 5>(4 * j, 0).real();
    const Mat5 Q = A.transpose() * Gp * A;
    K += (wts_(j) / (diag_(4 * j) - w)) * Q.cast<cplx>();
  }
  return K;
}

CMat5 DiscreteOperator::green_L(cplx w) const {
  const CMat5 GS = -capacitance(w) / p_.tau;
  return GS * (CMat5::Identity() - GS).inverse();
}

CMat5 DiscreteOperator::green_L_dense(cplx w) const {
  Eigen::MatrixXcd A = dense();
  A.diagonal().array() -= w;
  const Eigen::MatrixXcd X = A.partialPivLu().solve(U_);
  return -moments(X) / p_.tau;
}

Eigen::MatrixXcd DiscreteOperator::propagator(double t) const {
  const Eigen::MatrixXcd A = dense() * t;
  return A.exp();
}

double eigenvector_residual(const ModeSet& m, const SpectralParams& p, int n_nodes) {
  const DiscreteOperator L(p, n_nodes);
  const auto l = m.vector();
  const ExactSpectrum es = exact_spectrum(p.k, p.tau, BeyondCritical::Reject);
  double worst = 0;
  for (int j = 0; j < 5; ++j) {
    const CVec5 h = es.Hk.col(j);
    const Eigen::VectorXcd f = L.eigenfunction(l[j], h);
    const Eigen::VectorXcd r = L.apply(f) - l[j] * f;
    worst = std::max(worst, L.norm(r) / L.norm(f));
  }
  return worst;
}

Contour default_contour(const ModeSet& m) {
  double min_re = INFINITY;
  for (const auto& l : m.vector()) min_re = std::min(min_re, std::abs(l.real()));
  const double h = 2 * m.k + 1 / m.tau;
  return {-1 / m.tau + 1 / (10 * m.tau), -min_re / 10, -h, h};
}

RieszResult riesz_projector(const SpectralParams& p, const Contour& c, int n_nodes, int n_contour,
                            bool full) {
  if (!(c.re_lo < c.re_hi && c.im_lo < c.im_hi))
    throw Error(Errc::invalid_argument, "riesz_projector: empty contour");
  if (c.re_lo <= -1 / p.tau)
    throw Error(Errc::resolution, "riesz_projector: contour touches the essential line");
  const DiscreteOperator L(p, n_nodes);
  const auto& leg = legendre16();

  // counter-clockwise corners
  const cplx corner[5] = {{c.re_lo, c.im_lo}, {c.re_hi, c.im_lo}, {c.re_hi, c.im_hi},
                          {c.re_lo, c.im_hi}, {c.re_lo, c.im_lo}};
  double len[4], per = 0;
  for (int e = 0; e < 4; ++e) per += (len[e] = std::abs(corner[e + 1] - corner[e]));
  const int panels = std::max(4, n_contour / kPanelNodes);
  int np[4], used = 0;
  for (int e = 0; e < 4; ++e) used += (np[e] = std::max(1, static_cast<int>(std::lround(panels * len[e] / per))));
  np[0] += panels - used > 0 ? panels - used : 0;

  struct Node {
    cplx w, dw;
  };
  std::vector<Node> nodes;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corner[e], d = (corner[e + 1] - corner[e]) / static_cast<double>(np[e]);
    for (int q = 0; q < np[e]; ++q)
      for (int i = 0; i < kPanelNodes; ++i)
        nodes.push_back({a + d * (q + 0.5 * (leg.x[i] + 1)), d * 0.5 * leg.w[i]});
  }

  const int dim = L.dim(), m = static_cast<int>(nodes.size());
  const cplx inv2pii = 1.0 / (2 * kPi * I);
  const Eigen::MatrixXcd& U = L.basis();
  const Eigen::VectorXcd& D = L.diagonal();
  RieszResult out;
  out.M.setZero();
  Eigen::MatrixXcd Xs, Ys, VT;
  if (full) {
    VT = L.gram(U.conjugate(), Eigen::MatrixXcd::Identity(dim, dim));  // U^T M
    Xs.resize(dim, 5 * m);
    Ys.resize(5 * m, dim);
  }
  for (int i = 0; i < m; ++i) {
    const cplx w = nodes[i].w;
    const CMat5 K = L.capacitance(w);
    for (int a = 0; a < dim; ++a)
      if (std::abs(D(a) - w) < 1e-14) throw Error(Errc::contour_through_zero, "riesz_projector: node on a pole");
    const CMat5 Rinv = (p.tau * CMat5::Identity() + K).inverse();
    const cplx c_i = inv2pii * nodes[i].dw;
    out.M += c_i * (K * Rinv * K);
    if (full) {
      const Eigen::VectorXcd dinv = (D.array() - w).inverse();
      Xs.middleCols(5 * i, 5) = dinv.asDiagonal() * U;
      Ys.middleRows(5 * i, 5) = c_i * Rinv * (VT * dinv.asDiagonal());
    }
  }

  const ExactSpectrum es = exact_spectrum(p.k, p.tau, BeyondCritical::Reject);
  const CMat5 T = out.M * es.Hk.transpose().inverse();
  for (int j = 0; j < 5; ++j) {
    const CVec5 h = es.Hk.col(j), t = T.col(j);
    const CVec5 perp = t - h * (h.dot(t) / h.squaredNorm());
    out.max_angle = std::max(out.max_angle, std::asin(std::min(1.0, perp.norm() / t.norm())));
  }
  if (full) {
    out.full = Xs * Ys;
    const Eigen::MatrixXcd P2 = out.full * out.full;
    out.idempotency = (P2 - out.full).norm() / out.full.norm();
    out.trace_error = std::abs(out.full.trace() - 5.0);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(out.full);
    out.singular_gap = svd.singularValues().size() > 5 ? svd.singularValues()(5) : 0.0;
  }
  return out;
}

double invariance_residual(const SpectralParams& p, int n_nodes, ClosureKind kind) {
  const DiscreteOperator L(p, n_nodes);
  const Eigen::MatrixXcd& U = L.basis();
  const int dim = L.dim();
  Eigen::MatrixXcd C(dim, 5);
  if (kind == ClosureKind::Exact) {
    const ExactSpectrum es = exact_spectrum(p.k, p.tau, BeyondCritical::Reject);
    Eigen::MatrixXcd F(dim, 5);
    for (int j = 0; j < 5; ++j) F.col(j) = L.eigenfunction(es.lambda[j], es.Hk.col(j));
    const Eigen::MatrixXcd Hd = L.moments(F);
    C = (F - U * Hd) * Hd.inverse();
  } else if (kind == ClosureKind::Euler) {
    C.setZero();
  } else {
    // first Chapman-Enskog correction: -tau P5perp (i k v1) U
    Eigen::MatrixXcd vU = U;
    const auto& g = L.grid();
    for (std::size_t j = 0; j < g.size(); ++j) vU.middleRows<4>(4 * j) *= g.nodes[j];
    C = -I * (p.tau * p.k) * (vU - L.project(vU));
  }
  const Eigen::MatrixXcd LY = L.apply(U + C);
  const Eigen::MatrixXcd R = C * L.moments(LY) - (LY - L.project(LY));
  return L.op_norm(R);
}

double capacitance_identity_error(const SpectralParams& p, int n_nodes) {
  const DiscreteOperator L(p, n_nodes);
  const double h = 2 * p.k + 1 / p.tau;
  const cplx pts[4] = {{-0.5 / p.tau, 0.3}, {0.1, h}, {-0.9 / p.tau, -h}, {0.5 / p.tau, 0.0}};
  double worst = 0;
  for (const auto& w : pts) {
    const CMat5 a = L.green_L(w), b = L.green_L_dense(w);
    worst = std::max(worst, (a - b).norm() / b.norm());
  }
  return worst;
}

}  // namespace bgk
