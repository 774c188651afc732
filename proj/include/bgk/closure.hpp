#pragma once

#include <array>
#include <string>
#include <vector>

#include "bgk/modes.hpp"

namespace bgk {

struct SpectralTemperature {
  cplx value;
  cplx lambda;
  double k = 0, tau = 1;
};

// theta(lambda). Evaluated as the ratio -(B11 + B12 i lambda/k)/B15 of the
// stable shifted Green's block, identical to the closed form on the strip.
SpectralTemperature spectral_temperature(cplx lambda, const SpectralParams& p);
// closed form exactly as written (loses digits for small k tau)
cplx theta_closed(cplx lambda, const SpectralParams& p);
// moment-quotient form; agrees with theta only at eigenvalues
cplx theta_quotient(cplx lambda, const SpectralParams& p);

struct BasisMatrixH {
  CMat5 entries;  // Qtilde * Hk
  CMat5 aligned;  // Hk
  ModeSet modes;
  RotationFrame frame;
  std::array<cplx, 3> theta;  // at (diff, ac, ac*)
};

BasisMatrixH basis_H(const ModeSet& m, const RotationFrame& f);
// (2/k)[Im(lambda_ac) theta(diff) - Im((lambda_ac - lambda_diff) theta(ac*))]
double det_H_closed(const ModeSet& m, const std::array<cplx, 3>& theta);

struct ClosureCoefficients {
  double c[6] = {};
  double lambda_shear = 0;
  double k = 0, tau = 1;
  std::array<cplx, 6> C{};           // cyclic sums
  std::array<cplx, 6> C_expanded{};  // expanded real/imaginary forms
  double det_H = 0;
  double max_imag_contamination = 0;  // max |unexpected part|/(1+|c|)
};

ClosureCoefficients transport_coefficients(const ModeSet& m, const SpectralParams& p);
ClosureCoefficients transport_coefficients(const SpectralParams& p);

enum class Model { Exact, Euler, NavierStokes, Burnett };
const char* model_name(Model m);
Model parse_model(const std::string& s);

enum class BeyondCritical { Reject, PinToEssential };

struct HydroGenerator {
  CMat5 matrix;   // h-variables, Qtilde S Qtilde^T
  CMat5 aligned;  // S
  WaveVector kvec;
  Model model = Model::Exact;
  double tau = 1;
  bool physical = false;  // fifth variable T instead of sqrt(3/2) T
  bool pinned = false;    // some eigenvalue pinned to -1/tau
};

HydroGenerator generator(const WaveVector& kv, double tau, Model model,
                         BeyondCritical policy = BeyondCritical::Reject);
// k-aligned S for a given |k| (no rotation)
CMat5 aligned_generator(double k, double tau, Model model,
                        BeyondCritical policy = BeyondCritical::Reject, bool* pinned = nullptr);
// eigen-decomposition data for the Exact model at one |k|
struct ExactSpectrum {
  std::array<cplx, 5> lambda;  // (diff, ac, ac*, shear, shear)
  CMat5 Hk;
  bool pinned = false;
};
ExactSpectrum exact_spectrum(double k, double tau, BeyondCritical policy);

// diag(1,1,1,1,sqrt(2/3)) similarity
HydroGenerator to_physical_variables(const HydroGenerator& g);
CMat5 to_physical(const CMat5& h);
CMat5 from_physical(const CMat5& phys);

// displayed constant-coefficient matrices, physical variables, k-aligned
CMat5 classical_matrix_physical(double k, double tau, Model model);

struct ExpansionTerm {
  std::string name;  // e.g. "c1 k^1"
  int coeff;         // 1..6
  int order;         // power of k
  double extracted;  // fitted coefficient
  double target;     // target coefficient
  double rel_error;
  bool pass;
};
struct ExpansionReport {
  double tau = 1;
  std::vector<ExpansionTerm> terms;
  bool all_pass() const;
};
// polynomial fits of c_j over k tau in {0.1, 0.05, ..., 0.1/2^5};
// perturb: optional additive offsets to c_1..c_6 (fault injection)
ExpansionReport classical_expansion_check(double tau, double tol = 1e-3,
                                          const std::array<double, 6>* perturb = nullptr);

// leading small-k terms of c_1..c_6, for overlays
std::array<double, 6> leading_order(double k, double tau);

struct PhysicalConstants {
  double kB = 1, m = 1, T0 = 1, rho0 = 1, L = 1;
};
struct DimensionalReport {
  double t_thermal, v_thermal, l_mfp, tau_relax;
  // prefactors of I1, I_shear, I2, I3, I4, I5, I6 in the dimensional system
  double pre_I1, pre_shear, pre_I2, pre_I3, pre_I4, pre_I5, pre_I6;
  ClosureCoefficients coeffs;
  double k_dimensional;  // k / L
};
DimensionalReport dimensionalize(const ClosureCoefficients& c, const PhysicalConstants& pc);

// last column of adj(G(zeta) - i tau k), closed form
CVec5 adjugate_column(cplx zeta, const SpectralParams& p);

struct ShearAdjugateReport {
  CMat5 derivative;   // d/dzeta adj(G - i tau k) at the shear root
  cplx A_formula;
  cplx ratio33, ratio44;
  double max_off_pattern;  // relative to |A|
};
ShearAdjugateReport shear_adjugate_derivative(const SpectralParams& p);

}  // namespace bgk
