#include "bgk/hydrosim.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace bgk {

namespace {

const double kT = std::sqrt(2.0 / 3.0);  // T = sqrt(2/3) h_5

bool canonical(const Lattice& n) {
  for (int c : n)
    if (c != 0) return c > 0;
  return true;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::io, "cannot open " + path + " for writing");
  return os;
}

}  // namespace

WaveVector to_wave_vector(const Lattice& n) { return {double(n[0]), double(n[1]), double(n[2])}; }
Lattice negate(const Lattice& n) { return {-n[0], -n[1], -n[2]}; }

void validate(const SimConfig& c) {
  if (!(c.tau > 0)) throw Error(Errc::invalid_argument, "tau must be positive");
  if (c.K_max < 0) throw Error(Errc::invalid_argument, "K_max must be >= 0");
  if (!(c.dt_output > 0)) throw Error(Errc::invalid_argument, "dt_output must be positive");
  if (!(c.t_end >= 0)) throw Error(Errc::invalid_argument, "t_end must be >= 0");
  if (c.model == Model::Exact && c.beyond_critical == BeyondCritical::Reject &&
      c.K_max >= critical_wavenumber_min(c.tau)) {
    // only lattice norms matter; the largest is <= K_max
    for (const auto& n : lattice_points(c.K_max))
      if (to_wave_vector(n).norm() >= critical_wavenumber_min(c.tau))
        throw Error(Errc::beyond_critical, "lattice point |k| = " + fmt(to_wave_vector(n).norm()) +
                                               " is beyond k_crit,min = " +
                                               fmt(critical_wavenumber_min(c.tau)) +
                                               "; use the pin policy or a smaller K_max");
  }
}

std::vector<Lattice> lattice_points(int K_max) {
  std::vector<Lattice> pts;
  const int K2 = K_max * K_max;
  for (int a = -K_max; a <= K_max; ++a)
    for (int b = -K_max; b <= K_max; ++b)
      for (int c = -K_max; c <= K_max; ++c)
        if (a * a + b * b + c * c <= K2) pts.push_back({a, b, c});
  return pts;
}

GeneratorMap assemble(const SimConfig& c) {
  validate(c);
  struct Aligned {
    CMat5 S;
    ExactSpectrum es;
    bool pinned = false;
  };
  std::map<int, Aligned> by_norm;  // keyed by |n|^2
  GeneratorMap out;
  for (const auto& n : lattice_points(c.K_max)) {
    if (!canonical(n)) continue;
    LatticeGenerator lg;
    lg.gen.kvec = to_wave_vector(n);
    lg.gen.model = c.model;
    lg.gen.tau = c.tau;
    const int n2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    if (n2 == 0) {
      lg.gen.matrix = lg.gen.aligned = CMat5::Zero();
      out[n] = lg;
      continue;
    }
    auto it = by_norm.find(n2);
    if (it == by_norm.end()) {
      Aligned a;
      const double k = std::sqrt(static_cast<double>(n2));
      a.S = aligned_generator(k, c.tau, c.model, c.beyond_critical, &a.pinned);
      if (c.model == Model::Exact) a.es = exact_spectrum(k, c.tau, c.beyond_critical);
      it = by_norm.emplace(n2, a).first;
    }
    const auto& a = it->second;
    const RotationFrame f = rotation_frame(lg.gen.kvec);
    const CMat5 Q = f.Qtilde.cast<cplx>();
    lg.gen.aligned = a.S;
    lg.gen.matrix = Q * a.S * Q.transpose();
    lg.gen.pinned = a.pinned;
    if (c.model == Model::Exact) {
      lg.spectral = true;
      lg.lambda = a.es.lambda;
      lg.V = Q * a.es.Hk;
      lg.Vinv = lg.V.inverse();
    }
    out[n] = lg;
  }
  // conjugate lattice points get conjugate generators
  std::vector<std::pair<Lattice, LatticeGenerator>> mirrored;
  for (const auto& [n, lg] : out) {
    if (n == Lattice{0, 0, 0}) continue;
    LatticeGenerator m = lg;
    m.gen.kvec = to_wave_vector(negate(n));
    m.gen.matrix = lg.gen.matrix.conjugate();
    for (auto& l : m.lambda) l = std::conj(l);
    m.V = lg.V.conjugate();
    m.Vinv = lg.Vinv.conjugate();
    mirrored.emplace_back(negate(n), m);
  }
  for (auto& [n, m] : mirrored) out[n] = std::move(m);
  return out;
}

LatticeGenerator make_generator(const WaveVector& kv, double tau, Model model, BeyondCritical policy) {
  LatticeGenerator lg;
  lg.gen = generator(kv, tau, model, policy);
  const double k = kv.norm();
  if (model == Model::Exact && k > 0) {
    const ExactSpectrum es = exact_spectrum(k, tau, policy);
    const CMat5 Q = rotation_frame(kv).Qtilde.cast<cplx>();
    lg.spectral = true;
    lg.lambda = es.lambda;
    lg.V = Q * es.Hk;
    lg.Vinv = lg.V.inverse();
  }
  return lg;
}

CMat5 propagator(const LatticeGenerator& g, double t) {
  if (g.gen.kvec.norm() == 0.0) return CMat5::Identity();
  if (g.spectral) {
    CVec5 e;
    for (int j = 0; j < 5; ++j) e(j) = std::exp(g.lambda[j] * t);
    return g.V * e.asDiagonal() * g.Vinv;
  }
  const CMat5 A = g.gen.matrix * t;
  return A.exp();
}

FieldState evolve(const FieldState& s, const GeneratorMap& gens, double t) {
  FieldState out;
  out.time = s.time + t;
  for (const auto& [n, h] : s.coeffs) {
    const auto it = gens.find(n);
    if (it == gens.end())
      throw Error(Errc::invalid_argument, "evolve: no generator for lattice point (" + std::to_string(n[0]) +
                                              "," + std::to_string(n[1]) + "," + std::to_string(n[2]) + ")");
    out.coeffs[n] = propagator(it->second, t) * h;
  }
  return out;
}

double hermitian_defect(const FieldState& s) {
  double scale = 0, worst = 0;
  for (const auto& [n, h] : s.coeffs) scale = std::max(scale, h.norm());
  for (const auto& [n, h] : s.coeffs) {
    const auto it = s.coeffs.find(negate(n));
    const CVec5 other = it == s.coeffs.end() ? CVec5::Zero() : it->second;
    worst = std::max(worst, (h - other.conjugate()).norm());
  }
  return scale > 0 ? worst / scale : 0.0;
}

void enforce_hermitian(FieldState& s) {
  std::map<Lattice, CVec5> out;
  for (const auto& [n, h] : s.coeffs) {
    const auto it = s.coeffs.find(negate(n));
    const CVec5 mirror = it == s.coeffs.end() ? CVec5(h.conjugate()) : it->second;
    out[n] = 0.5 * (h + mirror.conjugate());
    out[negate(n)] = out[n].conjugate();
  }
  s.coeffs = std::move(out);
}

FieldState zero_state(int K_max) {
  FieldState s;
  for (const auto& n : lattice_points(K_max)) s.coeffs[n] = CVec5::Zero();
  return s;
}

FieldState random_state(int K_max, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FieldState s = zero_state(K_max);
  for (auto& [n, h] : s.coeffs)
    for (int j = 0; j < 5; ++j) h(j) = cplx(u(rng), u(rng));
  enforce_hermitian(s);
  return s;
}

KernelTable kernel_coefficients(const SimConfig& c) {
  if (c.model != Model::Exact) throw Error(Errc::invalid_argument, "kernel_coefficients: Exact model required");
  validate(c);
  KernelTable t;
  std::vector<int> norms;
  for (const auto& n : lattice_points(c.K_max)) {
    const int n2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    if (n2 > 0) norms.push_back(n2);
  }
  std::sort(norms.begin(), norms.end());
  norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
  for (int n2 : norms) {
    const double k = std::sqrt(static_cast<double>(n2));
    const CMat5 S = aligned_generator(k, c.tau, Model::Exact, c.beyond_critical);
    // C1, C3, C5 are i times real; C2, C4, C6 real
    const cplx C[6] = {S(1, 0), S(1, 1), S(1, 4), S(4, 0), S(4, 1), S(4, 4)};
    std::array<double, 7> v{};
    for (int j = 0; j < 6; ++j) {
      const bool imaginary = (j % 2) == 0;
      v[j] = imaginary ? C[j].imag() : C[j].real();
      const double off = imaginary ? C[j].real() : C[j].imag();
      t.max_imag = std::max(t.max_imag, std::abs(off) / (1 + std::abs(v[j])));
    }
    v[6] = S(2, 2).real();
    t.max_imag = std::max(t.max_imag, std::abs(S(2, 2).imag()) / (1 + std::abs(v[6])));
    t.k2.push_back(n2);
    t.vals.push_back(v);
  }
  return t;
}

ModelComparison compare_models(const FieldState& s0, const SimConfig& c, const std::vector<Model>& models) {
  if (models.empty()) throw Error(Errc::invalid_argument, "compare_models: empty model list");
  validate(c);
  ModelComparison r;
  r.models = models;
  const int nt = static_cast<int>(std::floor(c.t_end / c.dt_output + 1e-9)) + 1;
  for (int i = 0; i < nt; ++i) r.times.push_back(i * c.dt_output);
  std::vector<GeneratorMap> gens;
  for (Model m : models) {
    SimConfig cm = c;
    cm.model = m;
    gens.push_back(assemble(cm));
  }
  r.diff.assign(models.size(), std::vector<double>(nt, 0.0));
  r.per_k.assign(models.size(), {});
  for (const auto& [n, h0] : s0.coeffs) {
    std::vector<CMat5> ref(nt);
    const auto& g0 = gens[0].at(n);
    for (int i = 0; i < nt; ++i) ref[i] = propagator(g0, r.times[i]);
    for (std::size_t m = 0; m < models.size(); ++m) {
      auto& row = r.per_k[m][n];
      row.assign(nt, 0.0);
      const auto& gm = gens[m].at(n);
      for (int i = 0; i < nt; ++i) {
        const CVec5 d = (m == 0 ? ref[i] : propagator(gm, r.times[i])) * h0 - ref[i] * h0;
        row[i] = d.norm();
        r.diff[m][i] += d.squaredNorm();
      }
    }
  }
  for (auto& row : r.diff)
    for (auto& x : row) x = std::sqrt(x);
  return r;
}

PointValue synthesize(const FieldState& s, const std::array<double, 3>& x) {
  CVec5 acc = CVec5::Zero();
  for (const auto& [n, h] : s.coeffs) acc += std::exp(I * (n[0] * x[0] + n[1] * x[1] + n[2] * x[2])) * h;
  acc(4) *= kT;
  PointValue p;
  for (int j = 0; j < 5; ++j) {
    p.re[j] = acc(j).real();
    p.im[j] = acc(j).imag();
  }
  return p;
}

FieldState read_fourier_ic(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io, "cannot open " + path);
  FieldState s;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Lattice n;
    double v[10];
    bool ok = static_cast<bool>(ls >> n[0] >> n[1] >> n[2]);
    for (double& x : v) ok = ok && static_cast<bool>(ls >> x);
    std::string extra;
    if (!ok || (ls >> extra))
      throw Error(Errc::io, path + ":" + std::to_string(lineno) + ": expected k1 k2 k3 and 10 reals");
    CVec5 h;
    for (int j = 0; j < 5; ++j) h(j) = cplx(v[2 * j], v[2 * j + 1]);
    s.coeffs[n] = h;
  }
  enforce_hermitian(s);
  return s;
}

FieldState read_grid_ic(const std::string& path, int K_max) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io, "cannot open " + path);
  std::string line, tag;
  int N = 0;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (ls >> tag) {
      if (tag != "n" || !(ls >> N) || N < 1) throw Error(Errc::io, path + ": expected header 'n N'");
      break;
    }
  }
  if (N < 1) throw Error(Errc::io, path + ": missing header");
  if (2 * K_max >= N)
    throw Error(Errc::invalid_argument, "read_grid_ic: grid of " + std::to_string(N) +
                                            " points cannot resolve K_max = " + std::to_string(K_max));
  std::vector<std::array<double, 5>> f(static_cast<std::size_t>(N) * N * N);
  std::vector<char> seen(f.size(), 0);
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    int i, j, l;
    std::array<double, 5> v;
    std::string extra;
    if (!(ls >> i >> j >> l >> v[0] >> v[1] >> v[2] >> v[3] >> v[4]) || (ls >> extra) || i < 0 || j < 0 || l < 0 || i >= N ||
        j >= N || l >= N)
      throw Error(Errc::io, path + ": bad sample line '" + line + "'");
    const std::size_t idx = (static_cast<std::size_t>(i) * N + j) * N + l;
    f[idx] = v;
    seen[idx] = 1;
  }
  for (char c : seen)
    if (!c) throw Error(Errc::io, path + ": incomplete grid");
  FieldState s;
  const double h = 2 * kPi / N;
  for (const auto& n : lattice_points(K_max)) {
    CVec5 acc = CVec5::Zero();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) {
          const cplx e = std::exp(-I * h * double(n[0] * i + n[1] * j + n[2] * l));
          const auto& v = f[(static_cast<std::size_t>(i) * N + j) * N + l];
          for (int q = 0; q < 5; ++q) acc(q) += e * v[q];
        }
    acc /= double(N) * N * N;
    acc(4) /= kT;
    s.coeffs[n] = acc;
  }
  enforce_hermitian(s);
  return s;
}

void write_fourier_ic(const FieldState& s, const std::string& path) {
  auto os = open_out(path);
  os << "# bgkclosure fourier-ic v1: k1 k2 k3 then Re/Im of (rho, u1, u2, u3, sqrt(3/2) T)\n";
  for (const auto& [n, h] : s.coeffs) {
    os << n[0] << ' ' << n[1] << ' ' << n[2];
    for (int j = 0; j < 5; ++j) os << ' ' << fmt(h(j).real()) << ' ' << fmt(h(j).imag());
    os << '\n';
  }
}

void write_timeseries(const std::vector<FieldState>& traj, const std::string& path) {
  auto os = open_out(path);
  os << "# bgkclosure timeseries v1\n";
  os << "time,k1,k2,k3,re_rho,im_rho,re_u1,im_u1,re_u2,im_u2,re_u3,im_u3,re_h5,im_h5\n";
  for (const auto& s : traj)
    for (const auto& [n, h] : s.coeffs) {
      os << fmt(s.time) << ',' << n[0] << ',' << n[1] << ',' << n[2];
      for (int j = 0; j < 5; ++j) os << ',' << fmt(h(j).real()) << ',' << fmt(h(j).imag());
      os << '\n';
    }
}

double write_snapshot(const FieldState& s, int N, const std::string& path) {
  if (N < 1) throw Error(Errc::invalid_argument, "write_snapshot: N must be >= 1");
  auto os = open_out(path);
  os << "# bgkclosure snapshot v1 time=" << fmt(s.time) << " n=" << N << "\n";
  os << "i,j,l,x,y,z,rho,u1,u2,u3,T\n";
  double scale = 0, imag = 0;
  const double h = 2 * kPi / N;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l) {
        const std::array<double, 3> x{i * h, j * h, l * h};
        const PointValue p = synthesize(s, x);
        os << i << ',' << j << ',' << l << ',' << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(x[2]);
        for (int q = 0; q < 5; ++q) {
          os << ',' << fmt(p.re[q]);
          scale = std::max(scale, std::abs(p.re[q]));
          imag = std::max(imag, std::abs(p.im[q]));
        }
        os << '\n';
      }
  return scale > 0 ? imag / scale : imag;
}

}  // namespace bgk
