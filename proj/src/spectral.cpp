#include "bgk/spectral.hpp"

#include <cmath>

namespace bgk {

namespace {

constexpr double kSqrt6 = 2.4494897427831780982;

// polynomials of v_par left after integrating products of basis functions over
// v_perp; index order (rho, u_par, T)
struct Poly {
  double c[5];
};
const Poly kPoly[3][3] = {
    {{{1, 0, 0, 0, 0}}, {{0, 1, 0, 0, 0}}, {{-1 / kSqrt6, 0, 1 / kSqrt6, 0, 0}}},
    {{{0, 1, 0, 0, 0}}, {{0, 0, 1, 0, 0}}, {{0, -1 / kSqrt6, 0, 1 / kSqrt6, 0}}},
    {{{-1 / kSqrt6, 0, 1 / kSqrt6, 0, 0}},
     {{0, -1 / kSqrt6, 0, 1 / kSqrt6, 0}},
     {{5.0 / 6, 0, -2.0 / 6, 0, 1.0 / 6}}},
};

constexpr double kSeriesRadius = 9.5;
constexpr int kSeriesMax = 120;

bool use_series(cplx z) {
  return std::abs(z) >= kSeriesRadius && z.imag() >= 0.38 * std::abs(z);
}

// Ghat_ab = -sum_{n>=1} <p_ab v^n> zeta^{-(n+1)}
ShiftedGreen series_green(cplx z) {
  ShiftedGreen out;
  out.series = true;
  out.Ghat.setZero();
  out.dGhat.setZero();
  out.ghat_s = 0.0;
  out.dghat_s = 0.0;
  const cplx iz = 1.0 / z;
  const double az = std::abs(z);
  cplx zp = iz * iz;  // zeta^{-(n+1)} at n = 1
  double back[2] = {INFINITY, INFINITY};  // scales one and two orders back
  for (int n = 1; n <= kSeriesMax; ++n) {
    const double mom[5] = {gaussian_moment(n), gaussian_moment(n + 1), gaussian_moment(n + 2),
                           gaussian_moment(n + 3), gaussian_moment(n + 4)};
    const cplx dz = -static_cast<double>(n + 1) * zp * iz;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        double m = 0;
        for (int i = 0; i < 5; ++i) m += kPoly[a][b].c[i] * mom[i];
        out.Ghat(a, b) -= m * zp;
        out.dGhat(a, b) -= m * dz;
      }
    out.ghat_s -= mom[0] * zp;
    out.dghat_s -= mom[0] * dz;
    // largest contribution at this order relative to |zeta|^-2; odd moments
    // vanish, so growth is judged against the same parity two orders back
    const double scale = std::max(mom[3], mom[4]) * std::pow(az, 1 - n);
    if (scale < 1e-19 || scale > back[1]) break;
    back[1] = back[0];
    back[0] = scale;
    zp *= iz;
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < a; ++b) {
      out.Ghat(a, b) = out.Ghat(b, a);
      out.dGhat(a, b) = out.dGhat(b, a);
    }
  return out;
}

// plain G (no 1/zeta shift) from the moment recurrence
ShiftedGreen recurrence_green(cplx z) {
  const auto P = resolvent_moments(z);
  // derivative identity P_j' = j P_{j-1} - P_{j+1}
  std::array<cplx, 6> dP{};
  for (int j = 0; j < 6; ++j) dP[j] = static_cast<double>(j) * P[j > 0 ? j - 1 : 0] - P[j + 1];
  ShiftedGreen out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      cplx g = 0, dg = 0;
      for (int i = 0; i < 5; ++i) {
        g += kPoly[a][b].c[i] * P[i];
        dg += kPoly[a][b].c[i] * dP[i];
      }
      out.Ghat(a, b) = g;
      out.dGhat(a, b) = dg;
    }
  out.ghat_s = P[0];
  out.dghat_s = dP[0];
  return out;
}

}  // namespace

double WaveVector::norm() const { return std::sqrt(k1 * k1 + k2 * k2 + k3 * k3); }

RotationFrame rotation_frame(const WaveVector& kv) {
  const double k = kv.norm();
  if (!(k > 0)) throw Error(Errc::degenerate, "rotation_frame: zero wave vector");
  RotationFrame f;
  if (kv.k1 / k < -1.0 + 1e-8) {
    f.Q = Mat3::Zero();
    f.Q(0, 0) = -1;
    f.Q(1, 1) = -1;
    f.Q(2, 2) = 1;
  } else {
    const double k1 = kv.k1, k2 = kv.k2, k3 = kv.k3;
    const double d = k * k + k1 * k;
    f.Q << k1 / k, -k2 / k, -k3 / k,
           k2 / k, 1 - k2 * k2 / d, -k2 * k3 / d,
           k3 / k, -k2 * k3 / d, 1 - k3 * k3 / d;
  }
  f.Qtilde = Mat5::Identity();
  f.Qtilde.block<3, 3>(1, 1) = f.Q;
  return f;
}

cplx zeta_of(cplx lambda, const SpectralParams& p) {
  return I * (p.tau * lambda + 1.0) / (p.k * p.tau);
}

void check_strip(cplx lambda, const SpectralParams& p) {
  if (!(p.tau > 0)) throw Error(Errc::invalid_argument, "tau must be positive");
  if (!(p.k > 0)) throw Error(Errc::invalid_argument, "k must be positive");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw Error(Errc::invalid_argument, "non-finite lambda");
  if (lambda.real() <= -1.0 / p.tau + 1e-9 / p.tau)
    throw Error(Errc::domain, "Re(lambda) on or below the essential line -1/tau");
}

CMat5 green_matrix(cplx zeta) {
  const auto P = resolvent_moments(zeta);
  const cplx Z = P[0];
  CMat5 G = CMat5::Zero();
  G(0, 0) = Z;
  G(0, 1) = G(1, 0) = P[1];
  G(1, 1) = P[2];
  G(0, 4) = G(4, 0) = (P[2] - P[0]) / kSqrt6;
  G(1, 4) = G(4, 1) = (P[3] - P[1]) / kSqrt6;
  G(4, 4) = (P[4] - 2.0 * P[2] + 5.0 * P[0]) / 6.0;
  G(2, 2) = G(3, 3) = Z;
  return G;
}

cplx longitudinal_closed(cplx lambda, const SpectralParams& p) {
  check_strip(lambda, p);
  const cplx z = zeta_of(lambda, p);
  const double s = p.k * p.tau;
  const cplx Z = plasma_Z(z, Branch::Upper);
  const cplx z2 = z * z;
  return z + 6.0 * I * s * s * s - z * (z2 + 5.0) * s * s + 2.0 * I * (z2 + 3.0) * s -
         4.0 * I * Z * Z * ((z2 + 1.0) * s - I * z) +
         Z * (z2 - (z2 * z2 + 4.0 * z2 + 11.0) * s * s + 2.0 * I * s * z2 * z - 5.0);
}

cplx sigma_closed(cplx lambda, const SpectralParams& p) {
  check_strip(lambda, p);
  const cplx z = zeta_of(lambda, p);
  const double s = p.k * p.tau;
  const cplx Z = plasma_Z(z, Branch::Upper);
  const cplx iks = I * s;
  const cplx pre = 1.0 / (6.0 * iks * iks * iks * iks * iks);
  return pre * (Z - iks) * (Z - iks) * longitudinal_closed(lambda, p);
}

cplx sigma_det(cplx lambda, const SpectralParams& p, const WaveVector& direction) {
  check_strip(lambda, p);
  const cplx z = zeta_of(lambda, p);
  const cplx iks = I * (p.k * p.tau);
  const double n = direction.norm();
  const WaveVector kv{p.k * direction.k1 / n, p.k * direction.k2 / n, p.k * direction.k3 / n};
  const auto fr = rotation_frame(kv);
  const CMat5 Qt = fr.Qtilde.cast<cplx>();
  const CMat5 M = (Qt * (green_matrix(z) - iks * CMat5::Identity()) * Qt.transpose()) / iks;
  return M.determinant();
}

cplx sigma_det(cplx lambda, const SpectralParams& p) {
  // aligned frame: the determinant factors into the longitudinal block and
  // the doubled shear entry, both assembled without cancellation
  check_strip(lambda, p);
  const auto st = stable_spectral(lambda, p);
  const cplx iks = I * (p.k * p.tau);
  const cplx q = st.bs / iks;
  return st.det_long() / (iks * iks * iks) * q * q;
}

cplx shear_condition(cplx lambda, const SpectralParams& p) {
  check_strip(lambda, p);
  return plasma_Z(zeta_of(lambda, p), Branch::Upper) - I * (p.k * p.tau);
}

ShiftedGreen shifted_green(cplx zeta) {
  if (use_series(zeta)) return series_green(zeta);
  ShiftedGreen g = recurrence_green(zeta);
  const cplx iz = 1.0 / zeta;
  g.Ghat += iz * CMat3::Identity();
  g.dGhat -= iz * iz * CMat3::Identity();
  g.ghat_s += iz;
  g.dghat_s -= iz * iz;
  return g;
}

cplx StableSpectral::ddet_long() const { return (adjugate(B) * dB).trace(); }

StableSpectral stable_spectral(cplx lambda, const SpectralParams& p) {
  StableSpectral s;
  s.zeta = zeta_of(lambda, p);
  const cplx dzeta = I / p.k;  // dzeta/dlambda
  if (use_series(s.zeta)) {
    // B = Ghat + (tau lambda/zeta) Id, both terms O(zeta^-2)
    const auto g = series_green(s.zeta);
    const cplx shift = p.tau * lambda / s.zeta;
    const cplx dshift = p.tau / s.zeta - p.tau * lambda * dzeta / (s.zeta * s.zeta);
    s.B = g.Ghat + shift * CMat3::Identity();
    s.dB = g.dGhat * dzeta + dshift * CMat3::Identity();
    s.bs = g.ghat_s + shift;
    s.dbs = g.dghat_s * dzeta + dshift;
  } else {
    const auto g = recurrence_green(s.zeta);
    const cplx iks = I * (p.k * p.tau);
    s.B = g.Ghat - iks * CMat3::Identity();
    s.dB = g.dGhat * dzeta;
    s.bs = g.ghat_s - iks;
    s.dbs = g.dghat_s * dzeta;
  }
  return s;
}

cplx longitudinal_stable(cplx lambda, const SpectralParams& p) {
  check_strip(lambda, p);
  return 6.0 * stable_spectral(lambda, p).det_long();
}

CMat3 adjugate(const CMat3& A) {
  CMat3 C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      C(j, i) = A(i1, j1) * A(i2, j2) - A(i1, j2) * A(i2, j1);
    }
  return C;
}

CMat5 adjugate(const CMat5& A) {
  CMat5 C;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      Eigen::Matrix<cplx, 4, 4> m;
      for (int r = 0, rr = 0; r < 5; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < 5; ++c) {
          if (c == j) continue;
          m(rr, cc++) = A(r, c);
        }
        ++rr;
      }
      C(j, i) = (((i + j) % 2) ? -1.0 : 1.0) * m.determinant();
    }
  return C;
}

}  // namespace bgk
