#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bgk {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using CMat3 = Eigen::Matrix<cplx, 3, 3>;
using CMat5 = Eigen::Matrix<cplx, 5, 5>;
using CVec3 = Eigen::Matrix<cplx, 3, 1>;
using CVec5 = Eigen::Matrix<cplx, 5, 1>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// error codes shared with the C API (values are part of the ABI)
enum class Errc : int {
  ok = 0,
  invalid_argument = 1,
  domain = 2,
  range = 3,
  degenerate = 4,
  non_convergence = 5,
  strip_escape = 6,
  contour_through_zero = 7,
  resolution = 8,
  degenerate_modes = 9,
  beyond_critical = 10,
  division_by_zero = 11,
  io = 12,
  internal = 99,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// convergence failures keep the last parameter value that worked
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_good)
      : Error(Errc::non_convergence, what), last_good_k(last_good) {}
  double last_good_k;
};

}  // namespace bgk
