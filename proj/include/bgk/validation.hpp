#pragma once

#include <string>
#include <vector>

#include "bgk/hydrosim.hpp"
#include "bgk/oracle.hpp"

namespace bgk {

struct CheckResult {
  int id = 0;  // acceptance criterion 1..12
  std::string name;
  bool pass = false;
  double value = 0;      // worst observed metric
  double threshold = 0;  // bound it is compared against
  bool upper_bound = true;  // value must stay <= threshold (else >)
  bool error = false;       // the check itself raised
  std::string detail;
};

struct ValidationOptions {
  unsigned seed = 20240611;
  // additive fault injected into c_2 for the Taylor check (0 = none)
  double perturb_c2 = 0;
  int n_nodes = 200;
};

constexpr int kNumCriteria = 12;
CheckResult run_check(int id, const ValidationOptions& opt = {});
std::vector<CheckResult> run_acceptance(const ValidationOptions& opt = {});

// linearized ES-BGK Burnett system in physical variables, k-aligned, tau = 1,
// parameter b (Pr = 1/(1-b))
CMat5 es_bgk_burnett_physical(double k, double b);

// kinetic-vs-closure trajectory comparison at wave vector (k, 0, 0)
struct TrajectoryReport {
  std::vector<double> times;
  double max_gap = 0;           // on-manifold data: max moment gap
  // fitted decay rate of (off-manifold gap) / |closure trajectory| over
  // [2 tau, 10 tau], and over the early window [tau, 5 tau] for reference
  double off_manifold_rate = 0;
  double early_rate = 0;
  double required_rate = 0;  // 0.9 (1/tau + max Re lambda)
};
TrajectoryReport kinetic_cross_check(double k, double tau, int n_nodes, unsigned seed);

}  // namespace bgk
