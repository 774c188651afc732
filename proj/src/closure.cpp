#include "bgk/closure.hpp"

#include <cmath>

namespace bgk {

namespace {

constexpr double kSqrt6 = 2.4494897427831780982;
const double kS23 = std::sqrt(2.0 / 3.0);

// theta without the strip check, so pinned eigenvalues on the essential line
// can use the Z+ continuation
cplx theta_any(cplx lambda, const SpectralParams& p) {
  const auto s = stable_spectral(lambda, p);
  const cplx den = s.B(0, 2);
  if (std::abs(den) == 0.0) throw Error(Errc::division_by_zero, "spectral temperature: zero denominator");
  return -(s.B(0, 0) + s.B(0, 1) * I * lambda / p.k) / den;
}

struct Cyclic {
  std::array<cplx, 6> C;
  std::array<cplx, 6> Ce;
  cplx detH;
};

// cyclic sums over (lambda_diff, lambda_ac, lambda_ac*) and the expanded forms
Cyclic cyclic_coefficients(double k, const std::array<cplx, 3>& l, const std::array<cplx, 3>& th) {
  Cyclic r;
  const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  const cplx detH = (I / k) * ((l[0] - l[2]) * th[1] + (l[1] - l[0]) * th[2] + (l[2] - l[1]) * th[0]);
  r.detH = detH;
  cplx s1 = 0, s2 = 0, p3 = 1, s4 = 0, s5 = 0, s6 = 0;
  for (const auto& c : cyc) {
    const cplx l1 = l[c[0]], l2 = l[c[1]], l3 = l[c[2]];
    const cplx t1 = th[c[0]], t2 = th[c[1]], t3 = th[c[2]];
    s1 += l1 * l3 * (l1 - l3) * t2;
    s2 += (l1 * l1 - l3 * l3) * t2;
    p3 *= (l1 - l2);
    s4 += l2 * (l1 - l3) * t1 * t3;
    s5 += (l3 - l1) * t1 * t3;
    s6 += l1 * t1 * (l2 - l3);
  }
  r.C[0] = s1 / (k * k * detH);
  r.C[1] = I * s2 / (k * detH);
  r.C[2] = -p3 / (k * k * detH);
  r.C[3] = I * s4 / (k * detH);
  r.C[4] = s5 / detH;
  r.C[5] = -I * s6 / (k * detH);

  const double ld = l[0].real(), td = th[0].real();
  const cplx la = l[1], ta = th[1];
  const double ima = la.imag(), rea = la.real();
  const double dH = detH.real();
  r.Ce[0] = (2.0 * I / (k * k * dH)) * (ld * std::imag(std::conj(la) * (ld - std::conj(la)) * ta) - std::norm(la) * ima * td);
  r.Ce[1] = -(2.0 / (k * dH)) * (std::imag((ld * ld - std::conj(la) * std::conj(la)) * ta) - 2.0 * rea * ima * td);
  r.Ce[2] = (2.0 * I / (k * k * dH)) * std::norm(ld - la) * ima;
  r.Ce[3] = -(2.0 / (k * dH)) * (std::imag(la * (ld - std::conj(la)) * std::conj(ta)) * td - ld * ima * std::norm(ta));
  r.Ce[4] = (2.0 * I / dH) * (td * std::imag(ta * (ld - la)) + ima * std::norm(ta));
  r.Ce[5] = (2.0 / (k * dH)) * (ld * td * ima + std::imag(la * ta * (std::conj(la) - ld)));
  return r;
}

CMat5 assemble_S(double k, const std::array<cplx, 6>& C, cplx lshear) {
  CMat5 S = CMat5::Zero();
  S(0, 1) = -I * k;
  S(1, 0) = C[0];
  S(1, 1) = C[1];
  S(1, 4) = C[2];
  S(2, 2) = lshear;
  S(3, 3) = lshear;
  S(4, 0) = C[3];
  S(4, 1) = C[4];
  S(4, 4) = C[5];
  return S;
}

CMat5 rotate(const CMat5& S, const RotationFrame& f) {
  const CMat5 Q = f.Qtilde.cast<cplx>();
  return Q * S * Q.transpose();
}

CMat5 Pmat(double last) {
  CMat5 P = CMat5::Identity();
  P(4, 4) = last;
  return P;
}

}  // namespace

SpectralTemperature spectral_temperature(cplx lambda, const SpectralParams& p) {
  check_strip(lambda, p);
  // denominator of the closed form, (s^2 + a^2) Z - i s a with a = tau lambda + 1
  const double s = p.k * p.tau;
  const cplx a = p.tau * lambda + 1.0;
  const cplx zeta = zeta_of(lambda, p);
  const auto g = shifted_green(zeta);
  cplx den;
  if (g.series) den = I * s * s * s / a + (s * s + a * a) * g.ghat_s;  // Z = i s/a + ghat_s
  else den = (s * s + a * a) * plasma_Z(zeta) - I * s * a;
  if (std::abs(den) < 1e-14)
    throw Error(Errc::division_by_zero, "spectral temperature: denominator below 1e-14");
  return {theta_any(lambda, p), lambda, p.k, p.tau};
}

cplx theta_closed(cplx lambda, const SpectralParams& p) {
  check_strip(lambda, p);
  const double s = p.k * p.tau;
  const cplx tl = p.tau * lambda;
  const cplx Z = plasma_Z(zeta_of(lambda, p));
  const cplx den = (s * s + (tl + 1.0) * (tl + 1.0)) * Z - I * s * (tl + 1.0);
  if (std::abs(den) < 1e-14)
    throw Error(Errc::division_by_zero, "spectral temperature: denominator below 1e-14");
  return kSqrt6 * ((s * s - tl * (tl + 1.0)) * Z - I * s * (s * s - tl)) / den;
}

cplx theta_quotient(cplx lambda, const SpectralParams& p) {
  check_strip(lambda, p);
  const auto s = stable_spectral(lambda, p);
  // fifth row of B (1, i lambda/k, theta)^T = 0
  return -(s.B(2, 0) + s.B(2, 1) * I * lambda / p.k) / s.B(2, 2);
}

BasisMatrixH basis_H(const ModeSet& m, const RotationFrame& f) {
  BasisMatrixH b;
  b.modes = m;
  b.frame = f;
  const SpectralParams p{m.k, m.tau};
  const cplx l[3] = {m.lambda_diff, m.lambda_ac, std::conj(m.lambda_ac)};
  b.aligned = CMat5::Zero();
  for (int j = 0; j < 3; ++j) {
    b.theta[j] = spectral_temperature(l[j], p).value;
    b.aligned(0, j) = 1.0;
    b.aligned(1, j) = I * l[j] / m.k;
    b.aligned(4, j) = b.theta[j];
  }
  b.aligned(2, 3) = 1.0;
  b.aligned(3, 4) = 1.0;
  b.entries = rotate(b.aligned, f);
  return b;
}

double det_H_closed(const ModeSet& m, const std::array<cplx, 3>& th) {
  const cplx la = m.lambda_ac, ld = m.lambda_diff;
  return (2.0 / m.k) * (la.imag() * th[0].real() - std::imag((la - ld) * th[2]));
}

ClosureCoefficients transport_coefficients(const ModeSet& m, const SpectralParams& p) {
  ClosureCoefficients cc;
  cc.k = p.k;
  cc.tau = p.tau;
  const std::array<cplx, 3> l = {m.lambda_diff, m.lambda_ac, std::conj(m.lambda_ac)};
  std::array<cplx, 3> th;
  for (int j = 0; j < 3; ++j) th[j] = spectral_temperature(l[j], p).value;
  const auto cy = cyclic_coefficients(p.k, l, th);
  cc.det_H = cy.detH.real();
  if (std::abs(cy.detH) < 1e-12)
    throw Error(Errc::degenerate_modes, "transport_coefficients: |det H| < 1e-12");
  cc.C = cy.C;
  cc.C_expanded = cy.Ce;
  cc.lambda_shear = m.lambda_shear.real();
  double worst = 0;
  for (int j = 0; j < 6; ++j) {
    const bool imaginary = (j % 2) == 0;  // C1, C3, C5
    const double val = imaginary ? cy.C[j].imag() : cy.C[j].real();
    const double off = imaginary ? cy.C[j].real() : cy.C[j].imag();
    cc.c[j] = val;
    worst = std::max(worst, std::abs(off) / (1.0 + std::abs(val)));
  }
  cc.max_imag_contamination = worst;
  return cc;
}

ClosureCoefficients transport_coefficients(const SpectralParams& p) {
  return transport_coefficients(compute_modes(p), p);
}

const char* model_name(Model m) {
  switch (m) {
    case Model::Exact: return "exact";
    case Model::Euler: return "euler";
    case Model::NavierStokes: return "ns";
    case Model::Burnett: return "burnett";
  }
  return "?";
}

Model parse_model(const std::string& s) {
  if (s == "exact") return Model::Exact;
  if (s == "euler") return Model::Euler;
  if (s == "ns" || s == "navier-stokes") return Model::NavierStokes;
  if (s == "burnett") return Model::Burnett;
  throw Error(Errc::invalid_argument, "unknown model '" + s + "'");
}

CMat5 to_physical(const CMat5& h) {
  return Pmat(kS23) * h * Pmat(1.0 / kS23);
}

CMat5 from_physical(const CMat5& phys) {
  return Pmat(1.0 / kS23) * phys * Pmat(kS23);
}

HydroGenerator to_physical_variables(const HydroGenerator& g) {
  HydroGenerator out = g;
  if (g.physical) return out;
  out.matrix = to_physical(g.matrix);
  out.aligned = to_physical(g.aligned);
  out.physical = true;
  return out;
}

CMat5 classical_matrix_physical(double k, double tau, Model model) {
  CMat5 A = CMat5::Zero();
  if (model == Model::Exact) throw Error(Errc::invalid_argument, "classical_matrix_physical: exact model");
  const double k2 = k * k, k3 = k2 * k;
  A(0, 1) = -I * k;
  A(1, 0) = -I * k;
  A(1, 4) = -I * k;
  A(4, 1) = -I * (2.0 / 3.0) * k;
  if (model == Model::NavierStokes || model == Model::Burnett) {
    A(1, 1) = -(4.0 / 3.0) * tau * k2;
    A(2, 2) = -tau * k2;
    A(3, 3) = -tau * k2;
    A(4, 4) = -(5.0 / 3.0) * tau * k2;
  }
  if (model == Model::Burnett) {
    A(1, 0) += -I * (4.0 / 3.0) * tau * tau * k3;
    A(4, 1) += -I * (2.0 / 9.0) * tau * tau * k3;
  }
  return A;
}

ExactSpectrum exact_spectrum(double k, double tau, BeyondCritical policy) {
  ExactSpectrum es;
  const SpectralParams p{k, tau};
  const double line = -1.0 / tau;
  auto branch = [&](BranchLabel b) -> cplx {
    const cplx l = branch_root(b, p, true);
    if (l.real() > line + 1e-9 / tau) return l;
    if (policy == BeyondCritical::Reject)
      throw Error(Errc::beyond_critical, std::string("branch ") + branch_name(b) +
                                             " is beyond its critical wave number at k=" +
                                             std::to_string(k));
    es.pinned = true;
    return cplx(line, l.imag());
  };
  cplx ld, la, ls;
  if (k < critical_wavenumber(BranchLabel::Shear, tau)) {
    ls = branch_root(BranchLabel::Shear, p, true);
  } else {
    if (policy == BeyondCritical::Reject)
      throw Error(Errc::beyond_critical, "shear branch is beyond its critical wave number at k=" +
                                             std::to_string(k));
    es.pinned = true;
    ls = line;
  }
  ld = branch(BranchLabel::Diffusion);
  la = branch(BranchLabel::AcousticPlus);
  es.lambda = {ld, la, std::conj(la), ls, ls};
  es.Hk = CMat5::Zero();
  for (int j = 0; j < 3; ++j) {
    es.Hk(0, j) = 1.0;
    es.Hk(1, j) = I * es.lambda[j] / k;
    es.Hk(4, j) = theta_any(es.lambda[j], p);
  }
  es.Hk(2, 3) = 1.0;
  es.Hk(3, 4) = 1.0;
  return es;
}

CMat5 aligned_generator(double k, double tau, Model model, BeyondCritical policy, bool* pinned) {
  if (pinned) *pinned = false;
  if (!(tau > 0)) throw Error(Errc::invalid_argument, "tau must be positive");
  if (k == 0.0) return CMat5::Zero();
  if (model != Model::Exact) return from_physical(classical_matrix_physical(k, tau, model));
  const auto es = exact_spectrum(k, tau, policy);
  if (pinned) *pinned = es.pinned;
  std::array<cplx, 3> l = {es.lambda[0], es.lambda[1], es.lambda[2]};
  std::array<cplx, 3> th = {es.Hk(4, 0), es.Hk(4, 1), es.Hk(4, 2)};
  const auto cy = cyclic_coefficients(k, l, th);
  if (std::abs(cy.detH) < 1e-12)
    throw Error(Errc::degenerate_modes, "generator: |det H| < 1e-12");
  return assemble_S(k, cy.C, es.lambda[3]);
}

HydroGenerator generator(const WaveVector& kv, double tau, Model model, BeyondCritical policy) {
  HydroGenerator g;
  g.kvec = kv;
  g.model = model;
  g.tau = tau;
  const double k = kv.norm();
  if (k == 0.0) {
    g.matrix = CMat5::Zero();
    g.aligned = CMat5::Zero();
    return g;
  }
  g.aligned = aligned_generator(k, tau, model, policy, &g.pinned);
  g.matrix = rotate(g.aligned, rotation_frame(kv));
  return g;
}

bool ExpansionReport::all_pass() const {
  for (const auto& t : terms)
    if (!t.pass) return false;
  return !terms.empty();
}

ExpansionReport classical_expansion_check(double tau, double tol, const std::array<double, 6>* perturb) {
  ExpansionReport rep;
  rep.tau = tau;
  constexpr int npts = 6, nfit = 4;
  double s[npts];
  std::array<std::array<double, npts>, 6> c{};
  for (int i = 0; i < npts; ++i) {
    s[i] = 0.1 / std::pow(2.0, i);
    const auto cc = transport_coefficients({s[i] / tau, tau});
    for (int j = 0; j < 6; ++j) c[j][i] = cc.c[j] + (perturb ? (*perturb)[j] : 0.0);
  }
  // c_j / k^p = sum_n b_n (k tau)^{2n}; p = 1 for odd j, 2 for even j
  std::array<Eigen::VectorXd, 6> b;
  for (int j = 0; j < 6; ++j) {
    const int pw = (j % 2 == 0) ? 1 : 2;
    Eigen::MatrixXd A(npts, nfit);
    Eigen::VectorXd y(npts);
    for (int i = 0; i < npts; ++i) {
      const double k = s[i] / tau;
      y(i) = c[j][i] / std::pow(k, pw);
      for (int n = 0; n < nfit; ++n) A(i, n) = std::pow(s[i] * s[i], n);
    }
    b[j] = A.colPivHouseholderQr().solve(y);
  }
  auto coef = [&](int j, int order) {
    const int pw = (j % 2 == 0) ? 1 : 2;
    const int n = (order - pw) / 2;
    return b[j](n) * std::pow(tau, 2 * n);
  };
  const double t2 = tau * tau, t3 = t2 * tau;
  struct T {
    int j, order;
    double target;
  };
  const T targets[] = {
      {1, 1, -1.0},
      {1, 3, -4.0 / 3.0 * t2},
      {2, 2, -4.0 / 3.0 * tau},
      {2, 4, 16.0 / 9.0 * t3},
      {3, 1, -kS23},
      {4, 4, -kS23 * 10.0 / 3.0 * t3},
      {5, 1, -kS23},
      {5, 3, -kS23 / 3.0 * t2},
      {6, 2, -5.0 / 3.0 * tau},
      {6, 4, -16.0 / 9.0 * t3},
  };
  for (const auto& t : targets) {
    ExpansionTerm e;
    e.coeff = t.j;
    e.order = t.order;
    e.name = "c" + std::to_string(t.j) + " k^" + std::to_string(t.order);
    e.extracted = coef(t.j - 1, t.order);
    e.target = t.target;
    e.rel_error = std::abs(e.extracted - e.target) / std::abs(e.target);
    e.pass = e.rel_error <= tol;
    rep.terms.push_back(e);
  }
  return rep;
}

std::array<double, 6> leading_order(double k, double tau) {
  const double t3 = tau * tau * tau;
  return {-k, -4.0 / 3.0 * tau * k * k, -kS23 * k, -kS23 * 10.0 / 3.0 * t3 * std::pow(k, 4), -kS23 * k,
          -5.0 / 3.0 * tau * k * k};
}

DimensionalReport dimensionalize(const ClosureCoefficients& c, const PhysicalConstants& pc) {
  if (!(pc.kB > 0 && pc.m > 0 && pc.T0 > 0 && pc.rho0 > 0 && pc.L > 0))
    throw Error(Errc::invalid_argument, "dimensionalize: constants must be positive");
  DimensionalReport r;
  r.coeffs = c;
  r.t_thermal = pc.L * std::sqrt(pc.m / (pc.kB * pc.T0));
  r.v_thermal = std::sqrt(pc.kB * pc.T0 / pc.m);
  r.tau_relax = c.tau * r.t_thermal;
  r.l_mfp = r.tau_relax * r.v_thermal;
  r.pre_I1 = pc.kB * pc.T0 / (pc.m * pc.rho0);
  r.pre_shear = 1.0 / r.tau_relax;
  r.pre_I2 = r.l_mfp * r.l_mfp / r.tau_relax;
  r.pre_I3 = pc.kB / (pc.m * r.tau_relax);
  r.pre_I4 = pc.T0 / (pc.rho0 * r.tau_relax);
  r.pre_I5 = pc.T0;
  r.pre_I6 = 1.0 / r.tau_relax;
  r.k_dimensional = c.k / pc.L;
  return r;
}

CVec5 adjugate_column(cplx zeta, const SpectralParams& p) {
  const double s = p.k * p.tau;
  const cplx Z = plasma_Z(zeta);
  const cplx q = zeta + (zeta * zeta - 1.0) * Z;
  CVec5 a;
  a(0) = I * s / kSqrt6 * q;
  a(1) = (1.0 + I * s * zeta) * q / kSqrt6;
  a(2) = 0.0;
  a(3) = 0.0;
  a(4) = -1.0 - s * s - I * s * zeta - (I * s + zeta + I * s * zeta * zeta) * Z;
  if (std::abs(a(0)) < 1e-14) throw Error(Errc::division_by_zero, "adjugate_column: first entry below 1e-14");
  return a;
}

ShearAdjugateReport shear_adjugate_derivative(const SpectralParams& p) {
  if (!(p.k < critical_wavenumber(BranchLabel::Shear, p.tau)))
    throw Error(Errc::beyond_critical, "shear mode is not alive");
  const cplx ls = branch_root(BranchLabel::Shear, p);
  const cplx z0 = zeta_of(ls, p);
  const cplx iks = I * (p.k * p.tau);
  auto adj = [&](cplx z) { return adjugate(CMat5(green_matrix(z) - iks * CMat5::Identity())); };
  const double h = 1e-3 * std::max(1.0, std::abs(z0));
  ShearAdjugateReport r;
  r.derivative = (-adj(z0 + 2.0 * h) + 8.0 * adj(z0 + h) - 8.0 * adj(z0 - h) + adj(z0 - 2.0 * h)) / (12.0 * h);
  const double k = p.k, t = p.tau;
  const cplx lt = ls * t;
  r.A_formula = -I * ls * (std::pow(k * t, 4) + std::pow(lt, 4) + std::pow(lt, 3) + ls * t * t * t * k * k) / (6.0 * k);
  r.ratio33 = r.derivative(2, 2) / r.A_formula;
  r.ratio44 = r.derivative(3, 3) / r.A_formula;
  double off = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (!((i == 2 && j == 2) || (i == 3 && j == 3))) off = std::max(off, std::abs(r.derivative(i, j)));
  r.max_off_pattern = off / std::abs(r.A_formula);
  return r;
}

}  // namespace bgk
