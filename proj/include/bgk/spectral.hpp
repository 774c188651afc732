#pragma once

#include "bgk/complexfun.hpp"

namespace bgk {

struct WaveVector {
  double k1 = 0, k2 = 0, k3 = 0;
  double norm() const;
  WaveVector operator-() const { return {-k1, -k2, -k3}; }
};

struct RotationFrame {
  Mat3 Q;
  Mat5 Qtilde;  // diag(1, Q, 1)
};

struct SpectralParams {
  double k = 0;
  double tau = 1;
};

RotationFrame rotation_frame(const WaveVector& kv);

// zeta = i(tau lambda + 1)/(k tau)
cplx zeta_of(cplx lambda, const SpectralParams& p);

// rejects Re(lambda) <= -1/tau + 1e-9/tau, k <= 0 or tau <= 0
void check_strip(cplx lambda, const SpectralParams& p);

// 5x5 G(zeta) in the basis (1, v1, v2, v3, (|v|^2-3)/sqrt6), Im zeta > 0
CMat5 green_matrix(cplx zeta);

// factored closed form, evaluated as written
cplx sigma_closed(cplx lambda, const SpectralParams& p);
// longitudinal factor of the closed form (the bracket multiplying Z and
// polynomials), without the (Z - i tau k)^2/(6 (i k tau)^5) prefactor
cplx longitudinal_closed(cplx lambda, const SpectralParams& p);

// det(G_S - Id). The aligned form factors the determinant through the stable
// shifted block; the directional form rotates the full 5x5 G and is accurate
// only while |zeta| stays moderate
cplx sigma_det(cplx lambda, const SpectralParams& p);
cplx sigma_det(cplx lambda, const SpectralParams& p, const WaveVector& direction);

// Z(zeta) - i tau k
cplx shear_condition(cplx lambda, const SpectralParams& p);

// Ghat = G + Id/zeta on the (rho, u_par, T) block and the shear entry. Ghat is
// O(zeta^-2); for large |zeta| in the upper sector it is summed from exact
// Gaussian moments, otherwise taken from the moment recurrence.
struct ShiftedGreen {
  CMat3 Ghat;    // longitudinal block, order (rho, u_par, T)
  CMat3 dGhat;   // d/dzeta
  cplx ghat_s;   // shear entry
  cplx dghat_s;
  bool series = false;
};
ShiftedGreen shifted_green(cplx zeta);

// B = G(zeta) - i tau k Id. For large |zeta| it is assembled as
// Ghat + (tau lambda/zeta) Id, which keeps det B at full relative accuracy
// when k tau is small; near zeta = 0 it is assembled directly.
struct StableSpectral {
  cplx zeta;
  CMat3 B;       // longitudinal block of G - i tau k
  CMat3 dB;      // d/dlambda
  cplx bs, dbs;  // shear entry and d/dlambda
  cplx det_long() const { return B.determinant(); }
  cplx ddet_long() const;  // d det / dlambda via the adjugate
};
StableSpectral stable_spectral(cplx lambda, const SpectralParams& p);

// 6 det(B_long) equals longitudinal_closed; this is the cancellation-free version
cplx longitudinal_stable(cplx lambda, const SpectralParams& p);

CMat3 adjugate(const CMat3& A);
CMat5 adjugate(const CMat5& A);

}  // namespace bgk
