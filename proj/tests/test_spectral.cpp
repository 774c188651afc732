#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bgk/spectral.hpp"

using namespace bgk;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// strip point with Re lambda in (-1/tau, re_hi]
cplx strip_point(std::mt19937_64& rng, double tau, double re_hi, double im) {
  std::uniform_real_distribution<double> re(-1.0 / tau + 0.05, re_hi), ui(-im, im);
  return {re(rng), ui(rng)};
}

}  // namespace

TEST_CASE("rotation frame") {
  const auto f0 = rotation_frame({0.7, 0, 0});
  CHECK((f0.Q - Mat3::Identity()).norm() < 1e-15);
  const auto f1 = rotation_frame({0, 1, 0});
  CHECK((f1.Q.col(0) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const WaveVector kv{n(rng), n(rng), n(rng)};
    const auto f = rotation_frame(kv);
    CHECK((f.Q * f.Q.transpose() - Mat3::Identity()).norm() < 1e-12);
    CHECK(f.Q.determinant() == doctest::Approx(1.0));
    CHECK((f.Q.col(0) - Eigen::Vector3d(kv.k1, kv.k2, kv.k3) / kv.norm()).norm() < 1e-14);
    CHECK(f.Qtilde(0, 0) == 1.0);
    CHECK(f.Qtilde(4, 4) == 1.0);
    CHECK((f.Qtilde.block<3, 3>(1, 1) - f.Q).norm() == 0.0);
  }
  CHECK_THROWS_AS(rotation_frame({0, 0, 0}), Error);
}

TEST_CASE("zeta and strip check") {
  const SpectralParams p{0.7, 0.5};
  CHECK(std::abs(zeta_of(cplx(-2.0, 0), p)) < 1e-15);
  CHECK(std::abs(zeta_of(cplx(0, 0), p) - cplx(0, 1.0 / 0.35)) < 1e-14);
  CHECK_THROWS_AS(check_strip(cplx(-2.0, 0.3), p), Error);
  CHECK_THROWS_AS(check_strip(cplx(-0.1, 0), {0, 0.5}), Error);
  CHECK_THROWS_AS(check_strip(cplx(-0.1, 0), {0.7, 0}), Error);
  CHECK_NOTHROW(check_strip(cplx(-1.9, 0), p));
  try {
    check_strip(cplx(-2.5, 0), p);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain);
  }
}

// references: mpmath, moments from erfc at 50 digits
TEST_CASE("Green's matrix entries") {
  const cplx z{1, 1};
  const CMat5 G = green_matrix(z);
  CHECK(rel(G(0, 1), cplx(0.19047451825259115563, 0.23219939005526460574)) < 1e-13);
  CHECK(rel(G(0, 1), 1.0 + z * plasma_Z(z)) < 1e-14);
  CHECK(rel(G(4, 4), cplx(-0.20086888370678753651, 0.44591910321427086705)) < 1e-13);
  CHECK(rel(G(0, 4), cplx(0.10081208740348537876, -0.040085298533202445154)) < 1e-13);
  const cplx z2{0, 2};
  const CMat5 G2 = green_matrix(z2);
  CHECK(G2(2, 2) == plasma_Z(z2));
  CHECK(G2(3, 3) == plasma_Z(z2));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3, 3), v(0.1, 3);
  for (int i = 0; i < 50; ++i) {
    const CMat5 g = green_matrix({u(rng), v(rng)});
    CHECK((g - g.transpose()).norm() == 0.0);
    // middle block decouples
    CHECK(g(2, 0) == 0.0);
    CHECK(g(3, 1) == 0.0);
    CHECK(g(2, 4) == 0.0);
    CHECK(g(2, 3) == 0.0);
  }
}

// references: tests/oracle/references.py, det(G/(i tau k) - Id)
TEST_CASE("spectral function reference values") {
  const SpectralParams p{0.7, 0.5};
  struct R {
    cplx lambda, sigma;
  };
  const R refs[] = {
      {{-0.5, 0.3}, {-0.0017741480061355775405, 0.00034416928430558342886}},
      {{0.2, -1.1}, {0.0081610779974461093061, -0.0031592326399394075006}},
      {{-1.5, 2.0}, {-1.5160399719297339652, 1.8794972927749129728}},
  };
  for (const auto& r : refs) {
    CAPTURE(r.lambda);
    CHECK(rel(sigma_det(r.lambda, p), r.sigma) < 1e-12);
    CHECK(rel(sigma_closed(r.lambda, p), r.sigma) < 1e-10);
  }
}

TEST_CASE("closed and determinant forms agree in the strip") {
  std::mt19937_64 rng(2024);
  for (const double tau : {0.25, 0.5, 1.0}) {
    for (const double k : {0.3, 0.7, 1.1}) {
      const SpectralParams p{k, tau};
      for (int i = 0; i < 200 / 9 + 1; ++i) {
        const cplx l = strip_point(rng, tau, 1.0, 3.0);
        // the closed form cancels to a few digits below its inputs
        CHECK(rel(sigma_closed(l, p), sigma_det(l, p)) < 1e-8);
      }
    }
  }
}

TEST_CASE("spectral function collapses to lambda^5 as k -> 0") {
  // G_S - Id -> -tau lambda/(1 + tau lambda) Id, so the ratio at 2 lambda and
  // lambda tends to 32 ((1 + tau lambda)/(1 + 2 tau lambda))^5
  const SpectralParams p{1e-6, 1.0};
  for (const double a : {1e-3, 1e-2, 1e-1}) {
    const cplx l{a, 2 * a};
    const cplx ratio = sigma_det(2.0 * l, p) / sigma_det(l, p);
    const cplx expect = 32.0 * std::pow((1.0 + l) / (1.0 + 2.0 * l), 5);
    CHECK(rel(ratio, expect) < 1e-6);
  }
  // the rotated 5x5 path agrees at moderate zeta
  const SpectralParams q{0.7, 0.5};
  CHECK(rel(sigma_det(cplx(-0.5, 0.3), q, {1, 0, 0}), sigma_det(cplx(-0.5, 0.3), q)) < 1e-12);
}

TEST_CASE("shear factor and rotation invariance") {
  const SpectralParams p{0.7, 0.5};
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n;
  for (int i = 0; i < 20; ++i) {
    const cplx l = strip_point(rng, p.tau, 0.5, 2.0);
    const cplx z = zeta_of(l, p);
    const cplx itk = I * p.tau * p.k;
    const CMat5 B = green_matrix(z) / itk - CMat5::Identity();
    const cplx mid = B.block<2, 2>(2, 2).determinant();
    const cplx s = shear_condition(l, p);
    CHECK(rel(mid, s * s / (itk * itk)) < 1e-12);
    const WaveVector d1{n(rng), n(rng), n(rng)}, d2{n(rng), n(rng), n(rng)};
    CHECK(rel(sigma_det(l, p, d1), sigma_det(l, p, d2)) < 1e-12);
    CHECK(rel(sigma_det(l, p, d1), sigma_det(l, p)) < 1e-12);
  }
}

TEST_CASE("shear condition vanishes at the analytic critical wave number") {
  const double tau = 0.5;
  const SpectralParams p{std::sqrt(kPi / 2) / tau, tau};
  CHECK(std::abs(shear_condition(cplx(-1.0 / tau + 1e-8, 0), p)) < 1e-7);
}

TEST_CASE("stable block matches the direct Green's matrix") {
  std::mt19937_64 rng(17);
  for (const double k : {0.05, 0.7, 2.0}) {
    // the closed bracket loses about k^-2 in relative accuracy
    const double tol_closed = k < 0.1 ? 1e-6 : 1e-8;
    const SpectralParams p{k, 0.5};
    for (int i = 0; i < 30; ++i) {
      const cplx l = strip_point(rng, p.tau, 1.0, 3.0);
      const auto st = stable_spectral(l, p);
      const CMat5 G = green_matrix(st.zeta);
      const int idx[3] = {0, 1, 4};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const cplx ref = G(idx[a], idx[b]) - (a == b ? I * p.tau * p.k : 0.0);
          CHECK(std::abs(st.B(a, b) - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
        }
      CHECK(std::abs(st.bs - (G(2, 2) - I * p.tau * p.k)) < 1e-10 * std::max(1.0, std::abs(st.bs)));
      CHECK(rel(6.0 * st.det_long(), longitudinal_closed(l, p)) < tol_closed);
      CHECK(rel(longitudinal_stable(l, p), longitudinal_closed(l, p)) < tol_closed);
      // derivatives against central differences
      const double h = 1e-6;
      const auto sp = stable_spectral(l + h, p), sm = stable_spectral(l - h, p);
      const cplx fd = (sp.det_long() - sm.det_long()) / (2 * h);
      CHECK(std::abs(st.ddet_long() - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
      CHECK(std::abs(st.dbs - (sp.bs - sm.bs) / (2 * h)) < 1e-6 * std::max(1.0, std::abs(st.dbs)));
    }
  }
}

TEST_CASE("series and direct shifted Green's matrix agree on their overlap") {
  // |zeta| around the series threshold, upper sector
  for (const double r : {9.6, 12.0, 20.0}) {
    for (const double a : {0.6, 1.2, 1.5708, 2.0}) {
      const cplx z = std::polar(r, a);
      const auto sg = shifted_green(z);
      const CMat5 G = green_matrix(z);
      const int idx[3] = {0, 1, 4};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const cplx ref = G(idx[i], idx[j]) + (i == j ? 1.0 / z : 0.0);
          CHECK(std::abs(sg.Ghat(i, j) - ref) < 1e-12);
        }
    }
  }
}

TEST_CASE("adjugate") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n;
  CMat5 A;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) A(i, j) = {n(rng), n(rng)};
  CHECK((A * adjugate(A) - A.determinant() * CMat5::Identity()).norm() < 1e-12 * std::abs(A.determinant()) * 25);
  CMat3 B = A.block<3, 3>(0, 0);
  CHECK((adjugate(B) * B - B.determinant() * CMat3::Identity()).norm() < 1e-13);
  // rank-deficient matrices keep a nonzero adjugate
  CMat3 C = B;
  C.col(2) = C.col(0) + C.col(1);
  CHECK(adjugate(C).norm() > 1e-3);
  CHECK((C * adjugate(C)).norm() < 1e-12);
}
