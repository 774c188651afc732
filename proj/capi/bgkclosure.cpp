#include "bgkclosure.h"

#include <cmath>
#include <cstring>
#include <iterator>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "bgk/hydrosim.hpp"
#include "bgk/oracle.hpp"
#include "bgk/validation.hpp"

using namespace bgk;

struct bgk_sim {
  SimConfig cfg;
  GeneratorMap gens;
  FieldState state;
  KernelTable kernel;
  bool kernel_ready = false;
};

struct bgk_comparison {
  ModelComparison data;
};

struct bgk_report {
  std::vector<CheckResult> checks;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// runs f, translating exceptions into status codes
template <class F>
int guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return BGK_OK;
  } catch (const Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BGK_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BGK_INTERNAL, e.what());
  } catch (...) {
    return fail(BGK_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(Errc::invalid_argument, std::string(what) + " must not be null");
}

cplx in(bgk_complex z) { return {z.re, z.im}; }
bgk_complex out(cplx z) { return {z.real(), z.imag()}; }

void store(const CMat5& m, bgk_complex* dst) {
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) dst[5 * i + j] = out(m(i, j));
}

BranchLabel branch_of(int b) {
  switch (b) {
    case BGK_DIFFUSION: return BranchLabel::Diffusion;
    case BGK_SHEAR: return BranchLabel::Shear;
    case BGK_ACOUSTIC_PLUS: return BranchLabel::AcousticPlus;
    case BGK_ACOUSTIC_MINUS: return BranchLabel::AcousticMinus;
  }
  throw Error(Errc::invalid_argument, "unknown branch " + std::to_string(b));
}

Model model_of(int m) {
  switch (m) {
    case BGK_EXACT: return Model::Exact;
    case BGK_EULER: return Model::Euler;
    case BGK_NAVIER_STOKES: return Model::NavierStokes;
    case BGK_BURNETT: return Model::Burnett;
  }
  throw Error(Errc::invalid_argument, "unknown model " + std::to_string(m));
}

int model_id(Model m) {
  switch (m) {
    case Model::Exact: return BGK_EXACT;
    case Model::Euler: return BGK_EULER;
    case Model::NavierStokes: return BGK_NAVIER_STOKES;
    case Model::Burnett: return BGK_BURNETT;
  }
  return -1;
}

BeyondCritical policy_of(int p) {
  if (p == BGK_REJECT) return BeyondCritical::Reject;
  if (p == BGK_PIN_TO_ESSENTIAL) return BeyondCritical::PinToEssential;
  throw Error(Errc::invalid_argument, "unknown beyond-critical policy " + std::to_string(p));
}

Lattice lattice_of(const int n[3]) { return {n[0], n[1], n[2]}; }

const KernelTable& kernel_of(const bgk_sim* s) {
  auto* m = const_cast<bgk_sim*>(s);
  if (!m->kernel_ready) {
    m->kernel = kernel_coefficients(m->cfg);
    m->kernel_ready = true;
  }
  return m->kernel;
}

}  // namespace

extern "C" {

const char* bgk_version(void) { return BGK_VERSION; }
const char* bgk_last_error(void) { return g_last_error.c_str(); }
const char* bgk_status_name(int status) { return errc_name(static_cast<Errc>(status)); }

const char* bgk_model_name(int model) {
  try {
    return model_name(model_of(model));
  } catch (...) {
    return "unknown";
  }
}

int bgk_parse_model(const char* name, int* model) {
  return guard([&] {
    need(name, "name");
    need(model, "model");
    *model = model_id(parse_model(name));
  });
}

const char* bgk_branch_name(int branch) {
  try {
    return branch_name(branch_of(branch));
  } catch (...) {
    return "unknown";
  }
}

int bgk_faddeeva_w(bgk_complex z, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(faddeeva_w(in(z)));
  });
}

int bgk_plasma_z(bgk_complex zeta, int lower, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(plasma_Z(in(zeta), lower ? Branch::Lower : Branch::Upper));
  });
}

int bgk_plasma_z_asymptotic(bgk_complex zeta, int terms, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(plasma_Z_asymptotic(in(zeta), terms));
  });
}

int bgk_sigma(bgk_complex lambda, double k, double tau, int form, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    const SpectralParams p{k, tau};
    if (form == BGK_SIGMA_CLOSED) *o = out(sigma_closed(in(lambda), p));
    else if (form == BGK_SIGMA_DET) *o = out(sigma_det(in(lambda), p));
    else throw Error(Errc::invalid_argument, "unknown sigma form");
  });
}

int bgk_branch_root(int branch, double k, double tau, int continuation, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(branch_root(branch_of(branch), {k, tau}, continuation != 0));
  });
}

int bgk_modes(double k, double tau, bgk_complex o[5]) {
  return guard([&] {
    need(o, "out");
    const auto v = compute_modes({k, tau}).vector();
    for (int i = 0; i < 5; ++i) o[i] = out(v[i]);
  });
}

int bgk_critical_wavenumber(int branch, double tau, int traced, double* o) {
  return guard([&] {
    need(o, "out");
    const auto b = branch_of(branch);
    *o = traced ? critical_wavenumber_traced(b, tau) : critical_wavenumber(b, tau);
  });
}

int bgk_critical_wavenumber_min(double tau, double* o) {
  return guard([&] {
    need(o, "out");
    *o = critical_wavenumber_min(tau);
  });
}

int bgk_count_roots(double k, double tau, double margin, int* o) {
  return guard([&] {
    need(o, "out");
    *o = count_roots({k, tau}, margin);
  });
}

int bgk_transport_coefficients(double k, double tau, bgk_coefficients* o) {
  return guard([&] {
    need(o, "out");
    const auto c = transport_coefficients(SpectralParams{k, tau});
    o->k = c.k;
    o->tau = c.tau;
    for (int j = 0; j < 6; ++j) {
      o->c[j] = c.c[j];
      o->C[j] = out(c.C[j]);
      o->C_expanded[j] = out(c.C_expanded[j]);
    }
    o->lambda_shear = c.lambda_shear;
    o->det_H = c.det_H;
    o->max_imag_contamination = c.max_imag_contamination;
  });
}

int bgk_theta(bgk_complex lambda, double k, double tau, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(spectral_temperature(in(lambda), {k, tau}).value);
  });
}

int bgk_leading_order(double k, double tau, double o[6]) {
  return guard([&] {
    need(o, "out");
    const auto v = leading_order(k, tau);
    for (int j = 0; j < 6; ++j) o[j] = v[j];
  });
}

int bgk_generator(const double kvec[3], double tau, int model, int policy, int physical, bgk_complex o[25],
                  int* pinned) {
  return guard([&] {
    need(kvec, "kvec");
    need(o, "out");
    auto g = generator({kvec[0], kvec[1], kvec[2]}, tau, model_of(model), policy_of(policy));
    if (physical) g = to_physical_variables(g);
    store(g.matrix, o);
    if (pinned) *pinned = g.pinned ? 1 : 0;
  });
}

int bgk_classical_matrix(double k, double tau, int model, bgk_complex o[25]) {
  return guard([&] {
    need(o, "out");
    store(classical_matrix_physical(k, tau, model_of(model)), o);
  });
}

int bgk_expansion_check(double tau, double tol, const double* perturb, bgk_expansion_term* terms, int capacity,
                        int* n_terms, int* all_pass) {
  return guard([&] {
    std::array<double, 6> pert{};
    if (perturb)
      for (int j = 0; j < 6; ++j) pert[j] = perturb[j];
    const auto rep = classical_expansion_check(tau, tol, perturb ? &pert : nullptr);
    const int n = static_cast<int>(rep.terms.size());
    if (n_terms) *n_terms = n;
    if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
    if (capacity > 0) need(terms, "terms");
    for (int i = 0; i < n && i < capacity; ++i) {
      const auto& t = rep.terms[i];
      auto& d = terms[i];
      std::memset(d.name, 0, sizeof d.name);
      std::strncpy(d.name, t.name.c_str(), sizeof d.name - 1);
      d.coeff = t.coeff;
      d.order = t.order;
      d.extracted = t.extracted;
      d.target = t.target;
      d.rel_error = t.rel_error;
      d.pass = t.pass ? 1 : 0;
    }
  });
}

int bgk_quadrature_z(bgk_complex zeta, int n_nodes, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(quadrature_Z(in(zeta), n_nodes));
  });
}

int bgk_quadrature_sigma(bgk_complex lambda, double k, double tau, int n_nodes, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(quadrature_sigma(in(lambda), {k, tau}, n_nodes));
  });
}

int bgk_quadrature_root(bgk_complex guess, double k, double tau, int n_nodes, bgk_complex* o) {
  return guard([&] {
    need(o, "out");
    *o = out(quadrature_root(in(guess), {k, tau}, n_nodes));
  });
}

int bgk_eigenvector_residual(double k, double tau, int n_nodes, double* o) {
  return guard([&] {
    need(o, "out");
    const SpectralParams p{k, tau};
    *o = eigenvector_residual(compute_modes(p), p, n_nodes);
  });
}

int bgk_invariance_residual(double k, double tau, int n_nodes, int kind, double* o) {
  return guard([&] {
    need(o, "out");
    ClosureKind ck;
    if (kind == BGK_CLOSURE_EXACT) ck = ClosureKind::Exact;
    else if (kind == BGK_CLOSURE_EULER) ck = ClosureKind::Euler;
    else if (kind == BGK_CLOSURE_NS) ck = ClosureKind::NavierStokes;
    else throw Error(Errc::invalid_argument, "unknown closure kind");
    *o = invariance_residual({k, tau}, n_nodes, ck);
  });
}

int bgk_riesz(double k, double tau, int n_nodes, int n_contour, bgk_riesz_report* o) {
  return guard([&] {
    need(o, "out");
    const SpectralParams p{k, tau};
    const auto r = riesz_projector(p, default_contour(compute_modes(p)), n_nodes, n_contour, true);
    store(r.M, o->M);
    o->idempotency = r.idempotency;
    o->max_angle = r.max_angle;
    o->singular_gap = r.singular_gap;
    o->trace_error = r.trace_error;
  });
}

void bgk_sim_config_default(bgk_sim_config* c) {
  if (!c) return;
  const SimConfig d;
  c->tau = d.tau;
  c->K_max = d.K_max;
  c->model = BGK_EXACT;
  c->beyond_critical = BGK_REJECT;
  c->dt_output = d.dt_output;
  c->t_end = d.t_end;
}

int bgk_sim_create(const bgk_sim_config* c, bgk_sim** o) {
  return guard([&] {
    need(c, "config");
    need(o, "out");
    *o = nullptr;
    auto s = std::make_unique<bgk_sim>();
    s->cfg.tau = c->tau;
    s->cfg.K_max = c->K_max;
    s->cfg.model = model_of(c->model);
    s->cfg.beyond_critical = policy_of(c->beyond_critical);
    s->cfg.dt_output = c->dt_output;
    s->cfg.t_end = c->t_end;
    validate(s->cfg);
    s->gens = assemble(s->cfg);
    s->state = zero_state(s->cfg.K_max);
    *o = s.release();
  });
}

void bgk_sim_destroy(bgk_sim* s) { delete s; }

int bgk_sim_clone(const bgk_sim* s, bgk_sim** o) {
  return guard([&] {
    need(s, "sim");
    need(o, "out");
    *o = new bgk_sim(*s);
  });
}

namespace {
// keeps only lattice points of the simulation, zero-filling the rest
FieldState fit_to_lattice(const FieldState& src, int K_max) {
  FieldState s = zero_state(K_max);
  for (const auto& [n, h] : src.coeffs) {
    auto it = s.coeffs.find(n);
    if (it == s.coeffs.end()) {
      if (h.norm() != 0)
        throw Error(Errc::invalid_argument, "initial condition has a mode outside |n| <= K_max");
      continue;
    }
    it->second = h;
  }
  return s;
}
}  // namespace

int bgk_sim_load_fourier(bgk_sim* s, const char* path) {
  return guard([&] {
    need(s, "sim");
    need(path, "path");
    s->state = fit_to_lattice(read_fourier_ic(path), s->cfg.K_max);
  });
}

int bgk_sim_load_grid(bgk_sim* s, const char* path) {
  return guard([&] {
    need(s, "sim");
    need(path, "path");
    s->state = fit_to_lattice(read_grid_ic(path, s->cfg.K_max), s->cfg.K_max);
  });
}

int bgk_sim_set_random(bgk_sim* s, unsigned long long seed) {
  return guard([&] {
    need(s, "sim");
    s->state = random_state(s->cfg.K_max, static_cast<unsigned>(seed));
  });
}

int bgk_sim_set_coefficient(bgk_sim* s, const int n[3], const bgk_complex h[5]) {
  return guard([&] {
    need(s, "sim");
    need(n, "n");
    need(h, "h");
    auto it = s->state.coeffs.find(lattice_of(n));
    if (it == s->state.coeffs.end()) throw Error(Errc::invalid_argument, "lattice point outside |n| <= K_max");
    for (int i = 0; i < 5; ++i) it->second(i) = in(h[i]);
    s->state.time = 0;
  });
}

int bgk_sim_get_coefficient(const bgk_sim* s, const int n[3], bgk_complex h[5]) {
  return guard([&] {
    need(s, "sim");
    need(n, "n");
    need(h, "h");
    auto it = s->state.coeffs.find(lattice_of(n));
    if (it == s->state.coeffs.end()) throw Error(Errc::invalid_argument, "lattice point outside |n| <= K_max");
    for (int i = 0; i < 5; ++i) h[i] = out(it->second(i));
  });
}

int bgk_sim_lattice_size(const bgk_sim* s, size_t* o) {
  return guard([&] {
    need(s, "sim");
    need(o, "out");
    *o = s->state.coeffs.size();
  });
}

int bgk_sim_lattice_point(const bgk_sim* s, size_t i, int n[3]) {
  return guard([&] {
    need(s, "sim");
    need(n, "n");
    if (i >= s->state.coeffs.size()) throw Error(Errc::range, "lattice index out of range");
    auto it = std::next(s->state.coeffs.begin(), static_cast<std::ptrdiff_t>(i));
    for (int d = 0; d < 3; ++d) n[d] = it->first[d];
  });
}

int bgk_sim_time(const bgk_sim* s, double* o) {
  return guard([&] {
    need(s, "sim");
    need(o, "out");
    *o = s->state.time;
  });
}

int bgk_sim_hermitian_defect(const bgk_sim* s, double* o) {
  return guard([&] {
    need(s, "sim");
    need(o, "out");
    *o = hermitian_defect(s->state);
  });
}

int bgk_sim_evolve(bgk_sim* s, double t) {
  return guard([&] {
    need(s, "sim");
    s->state = evolve(s->state, s->gens, t);
  });
}

int bgk_sim_run(bgk_sim* s, const char* path, size_t* n_frames) {
  return guard([&] {
    need(s, "sim");
    const double dt = s->cfg.dt_output;
    const auto steps = static_cast<long>(std::floor(s->cfg.t_end / dt + 1e-9));
    std::vector<FieldState> traj;
    traj.reserve(static_cast<size_t>(steps) + 1);
    const FieldState s0 = s->state;
    traj.push_back(s0);
    // each frame from the initial state, so output times carry no drift
    for (long i = 1; i <= steps; ++i) traj.push_back(evolve(s0, s->gens, static_cast<double>(i) * dt));
    if (path) write_timeseries(traj, path);
    s->state = traj.back();
    if (n_frames) *n_frames = traj.size();
  });
}

int bgk_sim_write_fourier(const bgk_sim* s, const char* path) {
  return guard([&] {
    need(s, "sim");
    need(path, "path");
    write_fourier_ic(s->state, path);
  });
}

int bgk_sim_snapshot(const bgk_sim* s, int N, const char* path, double* max_imag) {
  return guard([&] {
    need(s, "sim");
    need(path, "path");
    const double m = write_snapshot(s->state, N, path);
    if (max_imag) *max_imag = m;
  });
}

int bgk_sim_point_value(const bgk_sim* s, const double x[3], double o[5]) {
  return guard([&] {
    need(s, "sim");
    need(x, "x");
    need(o, "out");
    const auto v = synthesize(s->state, {x[0], x[1], x[2]});
    for (int i = 0; i < 5; ++i) o[i] = v.re[i];
  });
}

int bgk_sim_kernel_size(const bgk_sim* s, size_t* o) {
  return guard([&] {
    need(s, "sim");
    need(o, "out");
    *o = kernel_of(s).k2.size();
  });
}

int bgk_sim_kernel_row(const bgk_sim* s, size_t i, double* k2, double vals[7]) {
  return guard([&] {
    need(s, "sim");
    const auto& t = kernel_of(s);
    if (i >= t.k2.size()) throw Error(Errc::range, "kernel row out of range");
    if (k2) *k2 = t.k2[i];
    if (vals)
      for (int j = 0; j < 7; ++j) vals[j] = t.vals[i][j];
  });
}

int bgk_compare_models(const bgk_sim* s, const int* models, int n_models, bgk_comparison** o) {
  return guard([&] {
    need(s, "sim");
    need(models, "models");
    need(o, "out");
    *o = nullptr;
    if (n_models < 1) throw Error(Errc::invalid_argument, "at least one model is required");
    std::vector<Model> ms;
    for (int i = 0; i < n_models; ++i) ms.push_back(model_of(models[i]));
    auto c = std::make_unique<bgk_comparison>();
    c->data = compare_models(s->state, s->cfg, ms);
    *o = c.release();
  });
}

void bgk_comparison_destroy(bgk_comparison* c) { delete c; }

int bgk_comparison_dims(const bgk_comparison* c, int* n_models, int* n_times) {
  return guard([&] {
    need(c, "comparison");
    if (n_models) *n_models = static_cast<int>(c->data.models.size());
    if (n_times) *n_times = static_cast<int>(c->data.times.size());
  });
}

int bgk_comparison_model(const bgk_comparison* c, int m, int* model) {
  return guard([&] {
    need(c, "comparison");
    need(model, "model");
    if (m < 0 || m >= static_cast<int>(c->data.models.size())) throw Error(Errc::range, "model index out of range");
    *model = model_id(c->data.models[m]);
  });
}

int bgk_comparison_time(const bgk_comparison* c, int t, double* o) {
  return guard([&] {
    need(c, "comparison");
    need(o, "out");
    if (t < 0 || t >= static_cast<int>(c->data.times.size())) throw Error(Errc::range, "time index out of range");
    *o = c->data.times[t];
  });
}

int bgk_comparison_diff(const bgk_comparison* c, int m, int t, double* o) {
  return guard([&] {
    need(c, "comparison");
    need(o, "out");
    if (m < 0 || m >= static_cast<int>(c->data.diff.size())) throw Error(Errc::range, "model index out of range");
    if (t < 0 || t >= static_cast<int>(c->data.diff[m].size())) throw Error(Errc::range, "time index out of range");
    *o = c->data.diff[m][t];
  });
}

void bgk_validation_options_default(bgk_validation_options* o) {
  if (!o) return;
  const ValidationOptions d;
  o->seed = d.seed;
  o->perturb_c2 = d.perturb_c2;
  o->n_nodes = d.n_nodes;
}

int bgk_validate(const bgk_validation_options* o, const int* ids, int n_ids, bgk_report** res) {
  return guard([&] {
    need(res, "out");
    *res = nullptr;
    ValidationOptions opt;
    if (o) {
      opt.seed = o->seed;
      opt.perturb_c2 = o->perturb_c2;
      opt.n_nodes = o->n_nodes;
    }
    auto r = std::make_unique<bgk_report>();
    if (!ids) {
      r->checks = run_acceptance(opt);
    } else {
      for (int i = 0; i < n_ids; ++i) r->checks.push_back(run_check(ids[i], opt));
    }
    *res = r.release();
  });
}

void bgk_report_destroy(bgk_report* r) { delete r; }

int bgk_report_count(const bgk_report* r, int* o) {
  return guard([&] {
    need(r, "report");
    need(o, "out");
    *o = static_cast<int>(r->checks.size());
  });
}

int bgk_report_check(const bgk_report* r, int i, bgk_check* o) {
  return guard([&] {
    need(r, "report");
    need(o, "out");
    if (i < 0 || i >= static_cast<int>(r->checks.size())) throw Error(Errc::range, "check index out of range");
    const auto& c = r->checks[i];
    o->id = c.id;
    o->name = c.name.c_str();
    o->detail = c.detail.c_str();
    o->pass = c.pass ? 1 : 0;
    o->error = c.error ? 1 : 0;
    o->upper_bound = c.upper_bound ? 1 : 0;
    o->value = c.value;
    o->threshold = c.threshold;
  });
}

}  // extern "C"
