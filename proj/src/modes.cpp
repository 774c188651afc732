#include "bgk/modes.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace bgk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSqrtHalfPi = 1.2533141373155002512;

bool is_longitudinal(BranchLabel b) { return b != BranchLabel::Shear; }

void newton_eval(BranchLabel label, cplx lambda, const SpectralParams& p, cplx& f, cplx& df) {
  const auto s = stable_spectral(lambda, p);
  if (is_longitudinal(label)) {
    f = s.det_long();
    df = s.ddet_long();
  } else {
    f = s.bs;
    df = s.dbs;
  }
}

std::string fmt_k(double k) {
  std::ostringstream os;
  os.precision(17);
  os << k;
  return os.str();
}

// continuation start in k tau; Taylor seeds are accurate to ~1e-9 here
constexpr double kStartS = 0.02;

}  // namespace

const char* branch_name(BranchLabel b) {
  switch (b) {
    case BranchLabel::Diffusion: return "diff";
    case BranchLabel::Shear: return "shear";
    case BranchLabel::AcousticPlus: return "ac";
    case BranchLabel::AcousticMinus: return "ac*";
  }
  return "?";
}

std::array<cplx, 5> ModeSet::vector() const {
  return {lambda_diff, lambda_ac, std::conj(lambda_ac), lambda_shear, lambda_shear};
}

cplx taylor_seed(BranchLabel label, double k, double tau) {
  const double k2 = k * k, k3 = k2 * k, k4 = k2 * k2;
  const double t3 = tau * tau * tau;
  switch (label) {
    case BranchLabel::Diffusion: return -tau * k2 + 9.0 / 5.0 * t3 * k4;
    case BranchLabel::Shear: return -tau * k2 + t3 * k4;
    case BranchLabel::AcousticPlus:
    case BranchLabel::AcousticMinus: {
      const cplx l = I * std::sqrt(5.0 / 3.0) * k - tau * k2 +
                     I * (7.0 * tau * tau / (6.0 * std::sqrt(15.0))) * k3 + 62.0 / 45.0 * t3 * k4;
      return label == BranchLabel::AcousticPlus ? l : std::conj(l);
    }
  }
  return 0.0;
}

cplx root_target(BranchLabel label, cplx lambda, const SpectralParams& p) {
  const auto s = stable_spectral(lambda, p);
  return is_longitudinal(label) ? 6.0 * s.det_long() : s.bs;
}

cplx refine_root(BranchLabel label, cplx guess, const SpectralParams& p, const RefineOptions& opt) {
  if (!(p.tau > 0) || !(p.k > 0)) throw Error(Errc::invalid_argument, "refine_root: k and tau must be positive");
  const double line = -1.0 / p.tau + 1e-9 / p.tau;
  auto guard = [&](cplx l) {
    if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
      throw NonConvergence("refine_root: non-finite iterate at k=" + fmt_k(p.k), p.k);
    if (!opt.continuation && (l.real() <= line || l.real() >= 1.0 / p.tau))
      throw Error(Errc::strip_escape, "refine_root: iterate left the strip at k=" + fmt_k(p.k));
  };
  guard(guess);
  cplx l = guess;
  double last = INFINITY;
  bool close = false;
  for (int it = 0; it < opt.max_iter; ++it) {
    cplx f, df;
    newton_eval(label, l, p, f, df);
    if (f == 0.0) return l;
    if (df == 0.0) throw NonConvergence("refine_root: zero derivative at k=" + fmt_k(p.k), p.k);
    const cplx step = f / df;
    const double as = std::abs(step);
    l -= step;
    guard(l);
    if (as <= 1e-10 * (1.0 + std::abs(l))) close = true;
    // quadratic convergence has reached the rounding floor
    if (close && (as <= 4.0 * kEps * std::abs(l) || as >= 0.5 * last)) {
      if (std::abs(root_target(label, l, p)) > 1e-12)
        throw NonConvergence("refine_root: residual above 1e-12 at k=" + fmt_k(p.k), p.k);
      return l;
    }
    last = as;
  }
  if (close && std::abs(root_target(label, l, p)) <= 1e-12) return l;
  throw NonConvergence("refine_root: no convergence in " + std::to_string(opt.max_iter) +
                           " iterations at k=" + fmt_k(p.k), p.k);
}

cplx branch_root(BranchLabel label, const SpectralParams& p, bool continuation) {
  if (!(p.tau > 0) || !(p.k > 0)) throw Error(Errc::invalid_argument, "branch_root: k and tau must be positive");
  if (label == BranchLabel::AcousticMinus)
    return std::conj(branch_root(BranchLabel::AcousticPlus, p, continuation));
  const double tau = p.tau;
  const double s_target = p.k * tau;
  RefineOptions opt;
  opt.continuation = true;  // iterates may graze the line during continuation
  double s = std::min(s_target, kStartS);
  cplx l = refine_root(label, taylor_seed(label, s / tau, tau), {s / tau, tau}, opt);
  double s_prev = s;
  cplx l_prev = l;
  bool have_prev = false;
  double h = 0.02;
  int fails = 0;
  while (s < s_target) {
    const double s_new = std::min(s_target, s + h);
    cplx pred = l;
    if (have_prev) pred = l + (l - l_prev) * ((s_new - s) / (s - s_prev));
    else pred = l * (s_new * s_new) / (s * s);  // lambda ~ k^2 or ~ k
    if (label == BranchLabel::AcousticPlus && !have_prev) pred = l * (s_new / s);
    try {
      const cplx r = refine_root(label, pred, {s_new / tau, tau}, opt);
      // a corrector landing far from the secant prediction jumped to another root
      if (have_prev && std::abs(r - pred) > 0.3 * std::abs(r - l) + 1e-9)
        throw NonConvergence("jump", s / tau);
      l_prev = l;
      s_prev = s;
      l = r;
      s = s_new;
      have_prev = true;
      fails = 0;
      h = std::min(0.05, h * 1.5);
    } catch (const Error&) {
      h *= 0.5;
      if (++fails > 30 || h < 1e-10)
        throw NonConvergence("branch_root: continuation failed near k=" + fmt_k(s / tau), s / tau);
    }
  }
  if (!continuation && l.real() <= -1.0 / tau + 1e-9 / tau)
    throw Error(Errc::beyond_critical, std::string("branch ") + branch_name(label) +
                                           " has merged with the essential spectrum at k=" + fmt_k(p.k));
  return l;
}

bool branch_alive(BranchLabel label, double k, double tau) {
  if (label == BranchLabel::Shear) return k < critical_wavenumber(BranchLabel::Shear, tau);
  const cplx l = branch_root(label, {k, tau}, true);
  return l.real() > -1.0 / tau + 1e-9 / tau;
}

ModeSet compute_modes(const SpectralParams& p) {
  ModeSet m;
  m.k = p.k;
  m.tau = p.tau;
  m.lambda_diff = branch_root(BranchLabel::Diffusion, p);
  m.lambda_ac = branch_root(BranchLabel::AcousticPlus, p);
  m.lambda_shear = branch_root(BranchLabel::Shear, p);
  m.collision = std::abs(m.lambda_shear - m.lambda_diff) < 1e-8 ||
                std::abs(m.lambda_shear - m.lambda_ac) < 1e-8;
  return m;
}

double critical_wavenumber(BranchLabel label, double tau) {
  if (!(tau > 0)) throw Error(Errc::invalid_argument, "tau must be positive");
  if (label == BranchLabel::Shear) return kSqrtHalfPi / tau;
  return critical_wavenumber_traced(label, tau);
}

double critical_wavenumber_traced(BranchLabel label, double tau) {
  if (!(tau > 0)) throw Error(Errc::invalid_argument, "tau must be positive");
  if (label == BranchLabel::AcousticMinus) label = BranchLabel::AcousticPlus;
  // g(s) = tau Re lambda + 1 along the continued branch; scan then bisect
  auto g = [&](double s) { return tau * branch_root(label, {s / tau, tau}, true).real() + 1.0; };
  double lo = 1.0, hi = 1.0;
  double glo = g(lo);
  if (glo <= 0) throw Error(Errc::internal, "critical_wavenumber: branch already dead at k tau = 1");
  for (double s = 1.05;; s += 0.05) {
    if (s > 3.0) throw NonConvergence("critical_wavenumber: no termination below k tau = 3", lo / tau);
    if (g(s) <= 0) {
      hi = s;
      break;
    }
    lo = s;
  }
  while ((hi - lo) > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / tau;
}

double critical_wavenumber_min(double tau) {
  // shear terminates first: sqrt(pi/2) < 1.3118 < 1.3560
  return critical_wavenumber(BranchLabel::Shear, tau);
}

BranchCurve trace_branch(BranchLabel label, double tau, double k_max, double dk) {
  if (!(dk > 0) || !(tau > 0) || !(k_max > 0))
    throw Error(Errc::invalid_argument, "trace_branch: dk, tau and k_max must be positive");
  BranchCurve c;
  c.label = label;
  c.tau = tau;
  const bool minus = label == BranchLabel::AcousticMinus;
  const BranchLabel lab = minus ? BranchLabel::AcousticPlus : label;
  RefineOptions opt;
  const double line = -1.0 / tau;
  double k = std::min(dk, kStartS / tau);
  cplx l;
  try {
    l = refine_root(lab, taylor_seed(lab, k, tau), {k, tau}, opt);
  } catch (const NonConvergence& e) {
    throw NonConvergence(e.what(), 0.0);
  }
  auto push = [&](double kk, cplx ll) { c.samples.push_back({kk, minus ? std::conj(ll) : ll}); };
  push(k, l);
  double h = dk;
  int successes = 0, failures = 0;
  double k_prev = 0;
  cplx l_prev = 0;
  bool have_prev = false;
  while (k < k_max) {
    const double kn = std::min(k_max, k + h);
    cplx pred;
    if (have_prev) pred = l + (l - l_prev) * ((kn - k) / (k - k_prev));
    else pred = (lab == BranchLabel::AcousticPlus) ? l * (kn / k) : l * (kn * kn) / (k * k);
    bool ok = false;
    cplx r;
    try {
      r = refine_root(lab, pred, {kn, tau}, opt);
      ok = r.real() + 1.0 / tau >= 1e-6 / tau;
    } catch (const NonConvergence& e) {
      ok = false;
    } catch (const Error& e) {
      if (e.code() != Errc::strip_escape) throw;
      ok = false;
    }
    if (ok) {
      l_prev = l;
      k_prev = k;
      l = r;
      k = kn;
      have_prev = true;
      push(k, l);
      failures = 0;
      if (++successes >= 5) {
        h = std::min(dk, 2 * h);
        successes = 0;
      }
      continue;
    }
    successes = 0;
    ++failures;
    h *= 0.5;
    const bool near_line = l.real() - line < 0.05 / tau;
    if ((failures >= 3 && near_line) || h < 1e-12 * std::max(1.0, k)) {
      c.terminated = true;
      break;
    }
  }
  if (c.terminated) {
    try {
      c.k_end = critical_wavenumber_traced(lab, tau);
    } catch (const Error&) {
      c.k_end = k;
    }
  } else {
    c.k_end = k;
  }
  return c;
}

int count_roots_in(const SpectralParams& p, const Rect& r) {
  if (!(r.re_lo < r.re_hi) || !(r.im_lo < r.im_hi))
    throw Error(Errc::invalid_argument, "count_roots: empty rectangle");
  const cplx iks = I * (p.k * p.tau);
  const cplx pre = 1.0 / (iks * iks * iks * iks * iks);
  auto sigma = [&](cplx l) {
    check_strip(l, p);
    const auto s = stable_spectral(l, p);
    const cplx v = s.det_long() * s.bs * s.bs * pre;
    if (std::abs(v) < 1e-8)
      throw Error(Errc::contour_through_zero, "count_roots: |Sigma| < 1e-8 on the contour");
    return v;
  };
  const cplx corners[5] = {{r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi},
                           {r.re_lo, r.im_hi}, {r.re_lo, r.im_lo}};
  double total = 0;
  // adaptive: refine any segment whose phase change exceeds 0.3 rad
  std::function<double(cplx, cplx, cplx, cplx, int)> seg = [&](cplx a, cplx b, cplx fa, cplx fb,
                                                              int depth) -> double {
    const double d = std::arg(fb / fa);
    if (std::abs(d) < 0.3 || depth > 40) return d;
    const cplx m = 0.5 * (a + b);
    const cplx fm = sigma(m);
    return seg(a, m, fa, fm, depth + 1) + seg(m, b, fm, fb, depth + 1);
  };
  for (int e = 0; e < 4; ++e) {
    const int n = 64;
    cplx a = corners[e], fa = sigma(a);
    for (int j = 1; j <= n; ++j) {
      const cplx b = corners[e] + (corners[e + 1] - corners[e]) * (double(j) / n);
      const cplx fb = sigma(b);
      total += seg(a, b, fa, fb, 0);
      a = b;
      fa = fb;
    }
  }
  return static_cast<int>(std::lround(total / (2 * kPi)));
}

int count_roots(const SpectralParams& p, double margin) {
  if (!(margin > 0)) throw Error(Errc::invalid_argument, "count_roots: margin must be positive");
  const double h = 2 * p.k + 1.0 / p.tau;
  return count_roots_in(p, {-1.0 / p.tau + margin, margin, -h, h});
}

}  // namespace bgk
