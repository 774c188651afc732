#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bgk/closure.hpp"

namespace bgk {

// Nodes/weights for <f> = int f(v) exp(-v^2/2)/sqrt(2 pi) dv (probabilists'
// Gauss-Hermite, Golub-Welsch).
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
  double max_spacing() const;
};
QuadratureGrid gauss_hermite(int n);

// sum_j w_j / (v_j - zeta); ResolutionError if |Im zeta| < 3 * max spacing
cplx quadrature_Z(cplx zeta, int n_nodes);
cplx quadrature_Z(cplx zeta, const QuadratureGrid& g);

// k-aligned 5x5 G(zeta) = <e_n e_m / (v_par - zeta)> by 1D quadrature in v_par
// with exact Gaussian moments in v_perp
CMat5 quadrature_green(cplx zeta, const QuadratureGrid& g);
// det(G_S - Id), G_S = G/(i tau k)
cplx quadrature_sigma(cplx lambda, const SpectralParams& p, int n_nodes);
// Newton on quadrature_sigma with a central-difference derivative
cplx quadrature_root(cplx guess, const SpectralParams& p, int n_nodes);

// Discrete-velocity BGK operator in the k-aligned frame. A state is
// f(v) = A(v_par) + v2 B(v_par) + v3 C(v_par) + |v_perp|^2 D(v_par), stored
// node-major as x[4j + (0..3)], so L = diagonal + (1/tau) U U^T M (rank 5).
class DiscreteOperator {
 public:
  DiscreteOperator(const SpectralParams& p, int n_nodes);
  const SpectralParams& params() const { return p_; }
  const QuadratureGrid& grid() const { return g_; }
  int dim() const { return 4 * static_cast<int>(g_.size()); }
  // streaming + relaxation part: -i k v_j - 1/tau per node
  const Eigen::VectorXcd& diagonal() const { return diag_; }
  // basis moments e_1..e_5 as 4N x 5 columns
  const Eigen::MatrixXcd& basis() const { return U_; }
  // moments <e_n, x> for each column of X
  Eigen::MatrixXcd moments(const Eigen::MatrixXcd& X) const;
  // P5 X
  Eigen::MatrixXcd project(const Eigen::MatrixXcd& X) const;
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& X) const;
  Eigen::MatrixXcd dense() const;
  // <x, y> Gram of the weighted L2 norm, X^H M Y
  Eigen::MatrixXcd gram(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) const;
  double norm(const Eigen::VectorXcd& x) const;
  // weighted operator norm of a 4N x m block acting on C^m with the
  // Euclidean norm
  double op_norm(const Eigen::MatrixXcd& X) const;
  // eigenfunction P5 f / (tau lambda + 1 + i tau k v_par) for moment vector m
  Eigen::VectorXcd eigenfunction(cplx lambda, const CVec5& m) const;
  // K(w) = U^T M (D - w)^-1 U
  CMat5 capacitance(cplx w) const;
  // G_L = G_S (Id - G_S)^-1 with z = -(1 + tau w), via the capacitance system
  CMat5 green_L(cplx w) const;
  // the same by a dense solve of the full discrete resolvent
  CMat5 green_L_dense(cplx w) const;
  // kinetic propagator exp(L t) (dense)
  Eigen::MatrixXcd propagator(double t) const;

 private:
  SpectralParams p_;
  QuadratureGrid g_;
  Eigen::VectorXcd diag_;
  Eigen::MatrixXcd U_;
  Eigen::VectorXd wts_;  // per-node weights
};

// max over modes of |L f - lambda f| / |f|
double eigenvector_residual(const ModeSet& m, const SpectralParams& p, int n_nodes);

struct Contour {
  double re_lo, re_hi, im_lo, im_hi;
};
// default rectangle: Re in [-1/tau + 1/(10 tau), -min|Re lambda|/10],
// |Im| <= 2k + 1/tau
Contour default_contour(const ModeSet& m);

struct RieszResult {
  CMat5 M;                    // P5 P P5 on moment space
  Eigen::MatrixXcd full;      // full discrete projector (4N x 4N), if requested
  double idempotency = 0;     // |P^2 - P| / |P| on the full projector
  double max_angle = 0;       // max principal angle between M H^-T columns and H columns
  double singular_gap = 0;    // sixth singular value of the full projector
  double trace_error = 0;     // |tr P - 5|
};
// trapezoid-free contour quadrature: composite 16-point Gauss-Legendre panels
// on each edge, n_contour nodes in total
RieszResult riesz_projector(const SpectralParams& p, const Contour& c, int n_nodes, int n_contour,
                            bool full = true);

enum class ClosureKind { Exact, Euler, NavierStokes };
// operator norm of (C P5 - P5perp) L (1 + C) on the hydrodynamic basis
double invariance_residual(const SpectralParams& p, int n_nodes,
                           ClosureKind kind = ClosureKind::Exact);

// max relative difference between green_L and green_L_dense at a few points
double capacitance_identity_error(const SpectralParams& p, int n_nodes);

}  // namespace bgk
