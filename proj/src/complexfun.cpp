#include "bgk/complexfun.hpp"

#include <cmath>
#include <limits>

namespace bgk {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrtHalfPi = 1.2533141373155002512;
constexpr double kSqrt2 = 1.4142135623730950488;

// Weideman's rational expansion; N = 40 keeps the relative error near 1e-15
// for |z| < 8 in the closed upper half plane.
struct Weideman {
  static constexpr int N = 40;
  double L;
  std::array<double, N> a;  // a[n-1] multiplies Z^{n-1}

  Weideman() {
    const int M = 2 * N;
    L = std::sqrt(N / std::sqrt(2.0));
    auto f = [&](int k) {
      const double t = L * std::tan(0.5 * k * kPi / M);
      return std::exp(-t * t) * (L * L + t * t);
    };
    std::array<double, 2 * N> fk{};
    for (int k = 0; k < M; ++k) fk[k] = f(k);
    for (int n = 1; n <= N; ++n) {
      double s = fk[0];
      for (int k = 1; k < M; ++k) s += 2.0 * fk[k] * std::cos(kPi * n * k / M);
      a[n - 1] = s / (2.0 * M);
    }
  }

  cplx operator()(cplx z) const {
    const cplx d = L - I * z;
    const cplx Z = (L + I * z) / d;
    cplx p = a[N - 1];
    for (int n = N - 2; n >= 0; --n) p = p * Z + a[n];
    return 2.0 * p / (d * d) + (1.0 / kSqrtPi) / d;
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

// Laplace continued fraction, Im z >= 0 and |z| large
cplx w_continued_fraction(cplx z) {
  const int n = std::abs(z) < 12.0 ? 40 : 20;
  cplx r = 0.0;
  for (int k = n; k >= 1; --k) r = (0.5 * k) / (z - r);
  return I / (kSqrtPi * (z - r));
}

cplx w_upper(cplx z) {
  if (std::abs(z) >= 8.0) return w_continued_fraction(z);
  return weideman()(z);
}

cplx checked_exp(cplx e) {
  if (e.real() > 700.0)
    throw Error(Errc::range, "faddeeva: exp(-z^2) overflows");
  return std::exp(e);
}

}  // namespace

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ok: return "ok";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::domain: return "DomainError";
    case Errc::range: return "RangeError";
    case Errc::degenerate: return "DegenerateInput";
    case Errc::non_convergence: return "NonConvergence";
    case Errc::strip_escape: return "StripEscape";
    case Errc::contour_through_zero: return "ContourThroughZero";
    case Errc::resolution: return "ResolutionError";
    case Errc::degenerate_modes: return "DegenerateModes";
    case Errc::beyond_critical: return "BeyondCritical";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::io: return "IoError";
    case Errc::internal: return "InternalError";
  }
  return "unknown";
}

cplx faddeeva_w(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(Errc::invalid_argument, "faddeeva: non-finite argument");
  if (z.imag() >= 0.0) return w_upper(z);
  // w(z) = 2 exp(-z^2) - w(-z)
  return 2.0 * checked_exp(-z * z) - w_upper(-z);
}

cplx plasma_Z(cplx zeta, Branch b) {
  if (b == Branch::Upper) return I * kSqrtHalfPi * faddeeva_w(zeta / kSqrt2);
  // Z-(zeta) = -Z+(-zeta)
  return -I * kSqrtHalfPi * faddeeva_w(-zeta / kSqrt2);
}

cplx plasma_Z_derivative(cplx zeta, Branch b, int order) {
  if (order < 1) throw Error(Errc::invalid_argument, "derivative order must be >= 1");
  // Z^{(n+1)} = -zeta Z^{(n)} - n Z^{(n-1)}, with Z^{(0)} = Z and the
  // inhomogeneous -1 entering at n = 0
  cplx prev = plasma_Z(zeta, b);
  cplx cur = -zeta * prev - 1.0;
  for (int n = 1; n < order; ++n) {
    const cplx next = -zeta * cur - static_cast<double>(n) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx plasma_Z_asymptotic(cplx zeta, int terms) {
  if (terms < 1 || terms > 20)
    throw Error(Errc::invalid_argument, "asymptotic series: terms must be in [1, 20]");
  if (zeta == 0.0) throw Error(Errc::domain, "asymptotic series at zeta = 0");
  const double arg = std::arg(zeta);  // (-pi, pi]
  const double lo = -0.25 * kPi + kAsymptoticSectorMargin;
  const double hi = 1.25 * kPi - kAsymptoticSectorMargin;
  const double a = (arg < -0.5 * kPi) ? arg + 2.0 * kPi : arg;
  if (a < lo || a > hi)
    throw Error(Errc::domain, "asymptotic series: arg(zeta) outside the Stokes-free sector");
  const cplx inv2 = 1.0 / (zeta * zeta);
  cplx term = 1.0 / zeta;
  cplx s = 0.0;
  for (int n = 0; n < terms; ++n) {
    s -= term;
    term *= static_cast<double>(2 * n + 1) * inv2;
  }
  return s;
}

double gaussian_moment(int j) {
  if (j < 0 || (j % 2) == 1) return 0.0;
  double m = 1.0;
  for (int i = j - 1; i > 1; i -= 2) m *= i;
  return m;
}

std::array<cplx, 7> resolvent_moments(cplx zeta) {
  std::array<cplx, 7> p{};
  p[0] = plasma_Z(zeta, Branch::Upper);
  for (int j = 0; j < 6; ++j) p[j + 1] = gaussian_moment(j) + zeta * p[j];
  return p;
}

}  // namespace bgk
