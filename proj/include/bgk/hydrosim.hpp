#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "bgk/closure.hpp"

namespace bgk {

using Lattice = std::array<int, 3>;
WaveVector to_wave_vector(const Lattice& n);
Lattice negate(const Lattice& n);

// Fourier coefficients of h = (rho, u, sqrt(3/2) T) on the 3-torus [0, 2 pi)^3
struct FieldState {
  std::map<Lattice, CVec5> coeffs;
  double time = 0;
};

struct SimConfig {
  double tau = 1;
  int K_max = 0;
  Model model = Model::Exact;
  BeyondCritical beyond_critical = BeyondCritical::Reject;
  double dt_output = 0.1;
  double t_end = 1;
};
void validate(const SimConfig& c);

// per-wave-vector propagation data
struct LatticeGenerator {
  HydroGenerator gen;
  // Exact model: matrix = V diag(lambda) V^-1 with V = Qtilde Hk
  std::array<cplx, 5> lambda{};
  CMat5 V, Vinv;
  bool spectral = false;
};
using GeneratorMap = std::map<Lattice, LatticeGenerator>;

// propagation data for one (not necessarily integer) wave vector
LatticeGenerator make_generator(const WaveVector& kv, double tau, Model model, BeyondCritical policy);

// all lattice points with |n| <= K_max
std::vector<Lattice> lattice_points(int K_max);
GeneratorMap assemble(const SimConfig& c);
// exp(A t) for one generator
CMat5 propagator(const LatticeGenerator& g, double t);
FieldState evolve(const FieldState& s, const GeneratorMap& gens, double t);

// max |h(-n) - conj h(n)| relative to the largest coefficient
double hermitian_defect(const FieldState& s);
void enforce_hermitian(FieldState& s);
// zero-filled state over the lattice
FieldState zero_state(int K_max);
// random Hermitian state (seeded), amplitudes O(1)
FieldState random_state(int K_max, unsigned seed);

struct KernelTable {
  std::vector<double> k2;                   // distinct |n|^2 > 0, ascending
  std::vector<std::array<double, 7>> vals;  // c1..c6, lambda_shear
  double max_imag = 0;                      // largest unexpected part, relative
};
KernelTable kernel_coefficients(const SimConfig& c);

struct ModelComparison {
  std::vector<Model> models;   // models[0] is the reference
  std::vector<double> times;
  // diff[m][t]: L2 distance of model m from the reference at times[t]
  std::vector<std::vector<double>> diff;
  // per-wave-vector breakdown: per_k[m][n][t]
  std::vector<std::map<Lattice, std::vector<double>>> per_k;
};
ModelComparison compare_models(const FieldState& s0, const SimConfig& c, const std::vector<Model>& models);

// physical field values (rho, u1, u2, u3, T) at x; imag parts returned separately
struct PointValue {
  std::array<double, 5> re;
  std::array<double, 5> im;
};
PointValue synthesize(const FieldState& s, const std::array<double, 3>& x);

// text formats
FieldState read_fourier_ic(const std::string& path);
// grid samples: header "n N", then N^3 lines "i j l rho u1 u2 u3 T"
FieldState read_grid_ic(const std::string& path, int K_max);
void write_fourier_ic(const FieldState& s, const std::string& path);
void write_timeseries(const std::vector<FieldState>& traj, const std::string& path);
// physical-space snapshot on an N^3 grid; returns max relative imaginary part
double write_snapshot(const FieldState& s, int N, const std::string& path);

}  // namespace bgk
