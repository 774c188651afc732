#pragma once

#include <array>

#include "bgk/types.hpp"

namespace bgk {

enum class Branch { Upper, Lower };

// w(z) = exp(-z^2) erfc(-iz)
cplx faddeeva_w(cplx z);

// Z(zeta) = (2pi)^{-1/2} int exp(-v^2/2)/(v - zeta) dv, continued analytically
// from the upper (Z+) or lower (Z-) half plane
cplx plasma_Z(cplx zeta, Branch b = Branch::Upper);

// n-th derivative through Z' = -zeta Z - 1
cplx plasma_Z_derivative(cplx zeta, Branch b, int order);

// -sum_{n<terms} (2n-1)!!/zeta^{2n+1}; valid where Z+ has no Stokes term,
// arg zeta in [-pi/4 + d, 5pi/4 - d]
cplx plasma_Z_asymptotic(cplx zeta, int terms);
inline constexpr double kAsymptoticSectorMargin = 0.05;

// P_j = <v^j/(v - zeta)> for the 1D standard Gaussian, j = 0..6, Z+ branch.
// Upward recurrence P_{j+1} = <v^j> + zeta P_j; loses digits for large |zeta|.
std::array<cplx, 7> resolvent_moments(cplx zeta);

// <v^j> for the standard normal
double gaussian_moment(int j);

}  // namespace bgk
