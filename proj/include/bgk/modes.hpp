#pragma once

#include <array>
#include <vector>

#include "bgk/spectral.hpp"

namespace bgk {

enum class BranchLabel { Diffusion, Shear, AcousticPlus, AcousticMinus };
const char* branch_name(BranchLabel b);

struct ModeSet {
  cplx lambda_diff, lambda_shear, lambda_ac;
  double k = 0, tau = 1;
  int shear_multiplicity = 2;
  bool collision = false;  // shear root within 1e-8 of a longitudinal root
  // (diff, ac, ac*, shear, shear)
  std::array<cplx, 5> vector() const;
};

struct BranchSample {
  double k;
  cplx lambda;
};

struct BranchCurve {
  BranchLabel label;
  double tau = 1;
  std::vector<BranchSample> samples;
  bool terminated = false;  // met the essential line before k_max
  double k_end = 0;         // bisected termination wave number when terminated
};

cplx taylor_seed(BranchLabel label, double k, double tau);

struct RefineOptions {
  int max_iter = 50;
  // follow the Z+ continuation below the essential line instead of raising
  // StripEscape (used to bracket branch termination)
  bool continuation = false;
};

cplx refine_root(BranchLabel label, cplx guess, const SpectralParams& p,
                 const RefineOptions& opt = {});

// residual used as convergence target: shear_condition for Shear, the
// longitudinal factor (stable evaluation) otherwise
cplx root_target(BranchLabel label, cplx lambda, const SpectralParams& p);

BranchCurve trace_branch(BranchLabel label, double tau, double k_max, double dk);

// root of the branch at one (k, tau) by continuation in k tau from Taylor seeds;
// with continuation=true the root may lie below the essential line
cplx branch_root(BranchLabel label, const SpectralParams& p, bool continuation = false);

// all five at one (k, tau); throws BeyondCritical if a branch is dead
ModeSet compute_modes(const SpectralParams& p);

// Shear: analytic sqrt(pi/2)/tau. Others: bisection on branch termination.
double critical_wavenumber(BranchLabel label, double tau);
// termination path for any label (Shear included, for cross-checking)
double critical_wavenumber_traced(BranchLabel label, double tau);
double critical_wavenumber_min(double tau);
bool branch_alive(BranchLabel label, double k, double tau);

struct Rect {
  double re_lo, re_hi, im_lo, im_hi;
};
// winding number of Sigma along the rectangle boundary
int count_roots_in(const SpectralParams& p, const Rect& r);
// rectangle -1/tau + margin < Re < margin, |Im| < 2k + 1/tau
int count_roots(const SpectralParams& p, double margin);

}  // namespace bgk
