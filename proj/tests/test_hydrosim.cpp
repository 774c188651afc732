#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bgk/hydrosim.hpp"

using namespace bgk;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bgk_test_" + name)).string();
}

double state_distance(const FieldState& a, const FieldState& b) {
  double d = 0;
  for (const auto& [n, h] : a.coeffs) d = std::max(d, (h - b.coeffs.at(n)).norm());
  return d;
}

double state_norm(const FieldState& s) {
  double x = 0;
  for (const auto& [n, h] : s.coeffs) x += h.squaredNorm();
  return std::sqrt(x);
}

SimConfig config(double tau, int K, Model m) {
  SimConfig c;
  c.tau = tau;
  c.K_max = K;
  c.model = m;
  return c;
}

}  // namespace

TEST_CASE("lattice") {
  CHECK(lattice_points(0).size() == 1);
  CHECK(lattice_points(1).size() == 7);
  CHECK(lattice_points(2).size() == 33);
  for (const auto& n : lattice_points(3)) CHECK(n[0] * n[0] + n[1] * n[1] + n[2] * n[2] <= 9);
  CHECK(negate({1, -2, 3}) == Lattice{-1, 2, -3});
  CHECK(to_wave_vector({1, -2, 3}).k2 == -2.0);
}

TEST_CASE("assembly") {
  const auto g0 = assemble(config(0.25, 0, Model::Exact));
  REQUIRE(g0.size() == 1);
  CHECK(g0.begin()->second.gen.matrix.norm() == 0.0);
  // |n| = 5 at tau = 0.25 stays below k_crit,min = 5.013
  const auto g5 = assemble(config(0.25, 5, Model::Exact));
  CHECK(g5.size() == lattice_points(5).size());
  try {
    assemble(config(0.25, 6, Model::Exact));
    FAIL("expected BeyondCritical");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::beyond_critical);
  }
  auto pin = config(0.25, 6, Model::Exact);
  pin.beyond_critical = BeyondCritical::PinToEssential;
  const auto gp = assemble(pin);
  CHECK(gp.at({6, 0, 0}).gen.pinned);
  CHECK_FALSE(gp.at({1, 0, 0}).gen.pinned);
  // reality: A(-n) = conj A(n)
  for (const auto& [n, g] : g5) CHECK((g5.at(negate(n)).gen.matrix - g.gen.matrix.conjugate()).norm() < 1e-12);
  SimConfig bad = config(0, 1, Model::Exact);
  CHECK_THROWS_AS(validate(bad), Error);
  bad = config(1, -1, Model::Exact);
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("propagators") {
  const auto g = make_generator({0.3, 0.4, -0.2}, 0.5, Model::Exact, BeyondCritical::Reject);
  CHECK(g.spectral);
  CHECK((propagator(g, 0.0) - CMat5::Identity()).norm() < 1e-13);
  // semigroup
  CHECK((propagator(g, 0.7) - propagator(g, 0.3) * propagator(g, 0.4)).norm() < 1e-13);
  // eigen-evolution: V e^(Lambda t) V^-1 applied to a column of V
  for (int j = 0; j < 5; ++j) {
    const CVec5 v = g.V.col(j);
    CHECK((propagator(g, 1.3) * v - std::exp(g.lambda[j] * 1.3) * v).norm() < 1e-12 * v.norm());
  }
  // the generator of the exponential
  const double h = 1e-5;
  const CMat5 d = (propagator(g, h) - propagator(g, -h)) / (2 * h);
  CHECK((d - g.gen.matrix).norm() < 1e-8);
  // classical models propagate by the matrix exponential
  const auto ns = make_generator({0.3, 0.4, -0.2}, 0.5, Model::NavierStokes, BeyondCritical::Reject);
  CHECK_FALSE(ns.spectral);
  CHECK((propagator(ns, 0.7) - propagator(ns, 0.3) * propagator(ns, 0.4)).norm() < 1e-13);
}

TEST_CASE("evolution preserves reality and composes") {
  const auto c = config(0.5, 2, Model::Exact);
  const auto gens = assemble(c);
  const FieldState s0 = random_state(2, 42);
  CHECK(hermitian_defect(s0) < 1e-15);
  const FieldState s1 = evolve(s0, gens, 0.6);
  CHECK(s1.time == doctest::Approx(0.6));
  CHECK(hermitian_defect(s1) < 1e-13);
  const FieldState s2 = evolve(evolve(s0, gens, 0.25), gens, 0.35);
  CHECK(state_distance(s1, s2) < 1e-13);
  // dissipation in the exact model
  CHECK(state_norm(s1) < state_norm(s0));
  // the mean (n = 0) is conserved
  CHECK((s1.coeffs.at({0, 0, 0}) - s0.coeffs.at({0, 0, 0})).norm() == 0.0);
  // real-space fields stay real
  const PointValue pv = synthesize(s1, {0.3, 1.2, 4.0});
  for (double x : pv.im) CHECK(std::abs(x) < 1e-13);
  // determinism of the seeded initial condition
  CHECK(state_distance(random_state(2, 42), s0) == 0.0);
  CHECK(state_distance(random_state(2, 43), s0) > 0.0);
}

TEST_CASE("Euler flow conserves the energy norm") {
  const auto c = config(0.5, 2, Model::Euler);
  const auto gens = assemble(c);
  const FieldState s0 = random_state(2, 7);
  const FieldState s1 = evolve(s0, gens, 3.0);
  // h-variables make the Euler generator skew-Hermitian
  CHECK(state_norm(s1) == doctest::Approx(state_norm(s0)).epsilon(1e-12));
}

TEST_CASE("Hermitian enforcement") {
  FieldState s = random_state(1, 3);
  s.coeffs.at({1, 0, 0})(0) += cplx(0.1, 0.2);
  CHECK(hermitian_defect(s) > 1e-3);
  enforce_hermitian(s);
  CHECK(hermitian_defect(s) < 1e-15);
}

TEST_CASE("file round trips") {
  const FieldState s = random_state(2, 11);
  const std::string f = tmp_path("fourier.txt");
  write_fourier_ic(s, f);
  const FieldState r = read_fourier_ic(f);
  CHECK(r.coeffs.size() == s.coeffs.size());
  CHECK(state_distance(s, r) == 0.0);
  // grid samples of a band-limited field recover the coefficients
  const int N = 8;
  const std::string g = tmp_path("grid.txt");
  {
    std::ofstream os(g);
    os.precision(17);
    os << "n " << N << "\n";
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) {
          const double h = 2 * kPi / N;
          const auto p = synthesize(s, {i * h, j * h, l * h});
          os << i << ' ' << j << ' ' << l;
          for (double x : p.re) os << ' ' << x;
          os << '\n';
        }
  }
  const FieldState rg = read_grid_ic(g, 2);
  CHECK(state_distance(s, rg) < 1e-13);
  CHECK_THROWS_AS(read_grid_ic(g, 4), Error);
  CHECK_THROWS_AS(read_fourier_ic(tmp_path("missing.txt")), Error);
  {
    std::ofstream os(tmp_path("bad.txt"));
    os << "1 0 0 1 2 3\n";
  }
  try {
    read_fourier_ic(tmp_path("bad.txt"));
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
  {
    std::ofstream os(tmp_path("bad.txt"));
    os << "# comment\n\n  \nnot numbers\n";
  }
  CHECK_THROWS_AS(read_fourier_ic(tmp_path("bad.txt")), Error);
  const std::string snap = tmp_path("snap.csv");
  CHECK(write_snapshot(s, 4, snap) < 1e-13);
  std::ifstream is(snap);
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 2 + 64);
  for (const auto& p : {f, g, tmp_path("bad.txt"), snap}) std::filesystem::remove(p);
}

TEST_CASE("closure kernel table") {
  const auto kt = kernel_coefficients(config(0.5, 2, Model::Exact));
  CHECK(kt.k2 == std::vector<double>{1, 2, 3, 4});
  CHECK(kt.max_imag < 1e-14);
  // rows are the aligned closure coefficients at |n|
  const auto c = transport_coefficients({std::sqrt(2.0), 0.5});
  for (int j = 0; j < 6; ++j) CHECK(kt.vals[1][j] == doctest::Approx(c.c[j]).epsilon(1e-12));
  CHECK(kt.vals[1][6] == doctest::Approx(c.lambda_shear).epsilon(1e-12));
}

TEST_CASE("model comparison") {
  auto c = config(0.5, 1, Model::Exact);
  c.dt_output = 0.5;
  c.t_end = 2.0;
  const FieldState s0 = random_state(1, 5);
  const auto same = compare_models(s0, c, {Model::Exact, Model::Exact});
  CHECK(same.times.size() == 5);
  for (double d : same.diff[1]) CHECK(d == 0.0);
  // at small k tau every classical model is close, and the order improves
  auto small = config(0.01, 1, Model::Exact);
  small.dt_output = 1.0;
  small.t_end = 5.0;
  const auto cmp = compare_models(s0, small, {Model::Exact, Model::Euler, Model::NavierStokes, Model::Burnett});
  const auto last = cmp.times.size() - 1;
  CHECK(cmp.diff[0][last] == 0.0);
  CHECK(cmp.diff[2][last] < cmp.diff[1][last]);
  CHECK(cmp.diff[3][last] < cmp.diff[2][last]);
  CHECK(cmp.per_k[1].size() == lattice_points(1).size());
}
