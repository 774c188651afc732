#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bgk/modes.hpp"

using namespace bgk;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

struct RootRef {
  double k, tau;
  cplx diff, ac, shear;
};

// references: mpmath findroot on det(G/(i tau k) - Id) at 40 digits
const RootRef kRoots[] = {
    {0.7, 0.5, {-0.21271922197927876052, 0}, {-0.21799209433050824655, 0.9199242279062360634},
     {-0.2235930167417194983, 0}},
    {0.02, 0.25, {-0.000099995500789785090863, 0}, {-0.000099996556035437835378, 0.025820039568067540571},
     {-0.000099997500249957826348, 0}},
    {4.5, 0.25, {-3.0055175184546058295, 0}, {-3.1545471022643199615, 6.1329613085433308994},
     {-3.3713951623522453984, 0}},
};

}  // namespace

TEST_CASE("branch roots match high-precision references") {
  for (const auto& r : kRoots) {
    CAPTURE(r.k);
    const ModeSet m = compute_modes({r.k, r.tau});
    CHECK(rel(m.lambda_diff, r.diff) < 1e-12);
    CHECK(rel(m.lambda_ac, r.ac) < 1e-12);
    CHECK(rel(m.lambda_shear, r.shear) < 1e-12);
    CHECK(m.shear_multiplicity == 2);
    // the collision flag is an absolute 1e-8 proximity test
    CHECK(m.collision == (std::abs(m.lambda_shear - m.lambda_diff) < 1e-8));
    const auto v = m.vector();
    CHECK(v[2] == std::conj(v[1]));
    CHECK(v[3] == v[4]);
  }
}

TEST_CASE("roots are zeros of the spectral function") {
  const SpectralParams p{0.7, 0.5};
  const ModeSet m = compute_modes(p);
  CHECK(std::abs(root_target(BranchLabel::Diffusion, m.lambda_diff, p)) < 1e-10);
  CHECK(std::abs(root_target(BranchLabel::AcousticPlus, m.lambda_ac, p)) < 1e-10);
  CHECK(std::abs(shear_condition(m.lambda_shear, p)) < 1e-12);
  // an arbitrary strip point is not a root
  CHECK(std::abs(sigma_det(cplx(-0.5, 0.3), p)) > 1e-4);
}

TEST_CASE("Taylor seeds") {
  // shear: -tau k^2 + O(k^4)
  CHECK(taylor_seed(BranchLabel::Shear, 0.1, 1.0).real() == doctest::Approx(-0.0099).epsilon(1e-3));
  const double k = 0.01, tau = 0.5;
  const cplx ac = taylor_seed(BranchLabel::AcousticPlus, k, tau);
  CHECK(ac.imag() / k == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-4));
  CHECK(ac.real() < 0);
  CHECK(taylor_seed(BranchLabel::AcousticMinus, k, tau) == std::conj(ac));
  // seeds converge onto the roots
  const SpectralParams p{k, tau};
  for (const auto b : {BranchLabel::Diffusion, BranchLabel::Shear, BranchLabel::AcousticPlus}) {
    const cplx s = taylor_seed(b, k, tau), r = refine_root(b, s, p);
    CHECK(std::abs(s - r) < 1e-6 * k);
  }
}

TEST_CASE("refine_root keeps real branches real and conjugates acoustic roots") {
  const SpectralParams p{0.7, 0.5};
  const cplx d = refine_root(BranchLabel::Diffusion, {-0.2, 0}, p);
  CHECK(d.imag() == 0.0);
  const cplx ap = refine_root(BranchLabel::AcousticPlus, {-0.2, 0.9}, p);
  const cplx am = refine_root(BranchLabel::AcousticMinus, {-0.2, -0.9}, p);
  CHECK(std::abs(am - std::conj(ap)) < 1e-13);
  CHECK(rel(ap, kRoots[0].ac) < 1e-12);
}

TEST_CASE("traced branches") {
  const double tau = 0.5;
  const auto ac = trace_branch(BranchLabel::AcousticPlus, tau, 1.0, 0.02);
  REQUIRE(ac.samples.size() > 10);
  CHECK_FALSE(ac.terminated);
  // damping grows monotonically along the branch
  for (std::size_t i = 1; i < ac.samples.size(); ++i)
    CHECK(ac.samples[i].lambda.real() < ac.samples[i - 1].lambda.real());
  // sound speed sqrt(5/3) in the long-wave limit
  CHECK(ac.samples.front().lambda.imag() / ac.samples.front().k == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-3));
  const auto sh = trace_branch(BranchLabel::Shear, tau, 4.0, 0.05);
  CHECK(sh.terminated);
  CHECK(sh.k_end == doctest::Approx(std::sqrt(kPi / 2) / tau).epsilon(1e-6));
  for (const auto& s : sh.samples) CHECK(s.lambda.real() > -1.0 / tau);
}

// references: mpmath, termination where the root meets Re lambda = -1/tau
TEST_CASE("critical wave numbers") {
  CHECK(critical_wavenumber(BranchLabel::Shear, 2.0) == doctest::Approx(0.62666).epsilon(1e-5));
  CHECK(critical_wavenumber(BranchLabel::Shear, 1.0) == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-15));
  CHECK(std::abs(critical_wavenumber_traced(BranchLabel::Shear, 1.0) - std::sqrt(kPi / 2)) < 1e-8);
  CHECK(std::abs(critical_wavenumber(BranchLabel::Diffusion, 1.0) - 1.3560334554773279345) < 1e-8);
  CHECK(std::abs(critical_wavenumber(BranchLabel::AcousticPlus, 1.0) - 1.3117611516279714312) < 1e-8);
  // k_crit tau is independent of tau
  CHECK(critical_wavenumber(BranchLabel::Diffusion, 0.25) * 0.25 ==
        doctest::Approx(critical_wavenumber(BranchLabel::Diffusion, 1.0)).epsilon(1e-8));
  CHECK(critical_wavenumber_min(1.0) == critical_wavenumber(BranchLabel::Shear, 1.0));
  CHECK(branch_alive(BranchLabel::Diffusion, 1.3, 1.0));
  CHECK_FALSE(branch_alive(BranchLabel::Shear, 1.3, 1.0));
  CHECK_FALSE(branch_alive(BranchLabel::AcousticPlus, 1.32, 1.0));
  try {
    compute_modes({1.3, 1.0});
    FAIL("expected BeyondCritical");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::beyond_critical);
  }
}

TEST_CASE("strip escape without continuation") {
  const SpectralParams p{1.4, 1.0};
  CHECK_THROWS_AS(branch_root(BranchLabel::Diffusion, p), Error);
  const cplx c = branch_root(BranchLabel::Diffusion, p, true);
  CHECK(c.real() < -1.0);
}

TEST_CASE("argument principle counts") {
  CHECK(count_roots({0.7, 0.5}, 0.05) == 5);
  CHECK(count_roots({1.2, 0.5}, 0.05) == 5);
  CHECK(count_roots({0.5, 1.0}, 0.05) == 5);
  // Sigma scales as lambda^5 for small k and drops below the contour guard
  CHECK_THROWS_AS(count_roots({0.02, 0.25}, 1e-5), Error);
  // rectangle away from all roots
  CHECK(count_roots_in({0.7, 0.5}, {0.1, 0.5, 0.1, 0.5}) == 0);
  // only the upper acoustic root
  CHECK(count_roots_in({0.7, 0.5}, {-0.5, 0.0, 0.5, 1.5}) == 1);
}
