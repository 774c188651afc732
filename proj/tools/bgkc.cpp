// bgkc: command-line front end over the bgkclosure C API
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bgkclosure.h"
#include "table.hpp"

namespace {

using bgkc::Cell;
using bgkc::Table;

class ApiError : public std::runtime_error {
 public:
  ApiError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

void check(int rc, const std::string& context = {}) {
  if (rc == BGK_OK) return;
  std::string msg = std::string(bgk_status_name(rc)) + ": " + bgk_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  throw ApiError(rc, msg);
}

struct Options {
  double tau = 1;
  double k_min = 0.1, k_max = 1;
  int k_n = 10;
  std::vector<double> kvec;
  std::string model = "exact";
  std::string policy = "reject";
  bool physical = false;
  std::string out = "-";
  std::string format;
  unsigned seed = 20240611;
  int threads = 0;
  // simulation
  int kmax = 2;
  double t_end = 1, dt = 0.1;
  std::string ic, ic_format = "fourier", snapshot, final_state;
  int snapshot_n = 16;
  std::vector<std::string> models{"exact", "euler", "ns", "burnett"};
  // validation
  double perturb_c2 = 0;
  int nodes = 200;
  std::vector<int> criteria;
};

int thread_count(const Options& o) {
  if (o.threads > 0) return o.threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// evaluates f(0..n-1) on a worker pool; results and the first failure (by
// index) are reported in input order
template <class T>
std::vector<T> parallel_map(int n, int threads, const std::function<T(int)>& f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> err(n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        err[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::max(1, std::min(threads, n));
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> k_grid(const Options& o) {
  if (!(o.k_min >= 0)) throw std::invalid_argument("--k-min must be >= 0");
  if (o.k_n < 1) throw std::invalid_argument("--k-n must be >= 1");
  if (o.k_n > 1 && !(o.k_max > o.k_min)) throw std::invalid_argument("--k-max must exceed --k-min");
  std::vector<double> k(o.k_n);
  for (int i = 0; i < o.k_n; ++i)
    k[i] = o.k_n == 1 ? o.k_min : o.k_min + (o.k_max - o.k_min) * i / (o.k_n - 1);
  return k;
}

std::string k_context(double k) { return "at k=" + bgkc::format_number(k); }

int model_id(const std::string& name) {
  int m = 0;
  check(bgk_parse_model(name.c_str(), &m));
  return m;
}

int policy_id(const std::string& p) {
  if (p == "reject") return BGK_REJECT;
  if (p == "pin") return BGK_PIN_TO_ESSENTIAL;
  throw std::invalid_argument("--beyond-critical must be reject or pin");
}

void emit(const Table& t, const Options& o, const std::string& default_format = "csv") {
  const std::string fmt = o.format.empty() ? default_format : o.format;
  std::ostringstream ss;
  if (fmt == "csv") bgkc::write_csv(t, ss);
  else if (fmt == "json") bgkc::write_json(t, ss);
  else throw std::invalid_argument("--format must be csv or json");
  if (o.out == "-") {
    std::cout << ss.str() << std::flush;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ApiError(BGK_IO, "cannot open '" + o.out + "' for writing");
  f << ss.str();
  if (!f) throw ApiError(BGK_IO, "write to '" + o.out + "' failed");
}

// ---- commands ----

using Row = std::vector<Cell>;

int run_modes(const Options& o) {
  const auto ks = k_grid(o);
  const int branches[3] = {BGK_DIFFUSION, BGK_SHEAR, BGK_ACOUSTIC_PLUS};
  const auto kc = parallel_map<double>(3, thread_count(o), [&](int b) {
    double v = 0;
    check(bgk_critical_wavenumber(branches[b], o.tau, 0, &v), "critical wave number");
    return v;
  });
  auto rows = parallel_map<Row>(static_cast<int>(ks.size()), thread_count(o), [&](int i) {
    const double k = ks[i];
    Row re_im, alive;
    for (int b = 0; b < 3; ++b) {
      bool live = k < kc[b];
      bgk_complex l{0, 0};
      if (live && k > 0) {
        const int rc = bgk_branch_root(branches[b], k, o.tau, 0, &l);
        // within the bisection tolerance of k_crit the root may already sit on the line
        if (rc == BGK_BEYOND_CRITICAL) live = false;
        else check(rc, k_context(k));
      }
      re_im.emplace_back(live ? l.re : std::nan(""));
      re_im.emplace_back(live ? l.im : std::nan(""));
      alive.emplace_back(live ? 1.0 : 0.0);
    }
    Row r{k};
    r.insert(r.end(), re_im.begin(), re_im.end());
    r.insert(r.end(), alive.begin(), alive.end());
    return r;
  });
  Table t;
  t.schema = "bgkc.modes.v1";
  t.meta = {{"tau", o.tau}, {"kcrit_diffusion", kc[0]}, {"kcrit_shear", kc[1]}, {"kcrit_acoustic", kc[2]}};
  t.columns = {"k",           "re_diffusion", "im_diffusion",    "re_shear",    "im_shear",
               "re_acoustic", "im_acoustic",  "alive_diffusion", "alive_shear", "alive_acoustic"};
  t.rows = std::move(rows);
  emit(t, o);
  return 0;
}

int run_kcrit(const Options& o) {
  struct Job {
    int branch;
    int traced;
    const char* name;
    const char* method;
  };
  const Job jobs[] = {{BGK_DIFFUSION, 1, "diffusion", "traced"},
                      {BGK_ACOUSTIC_PLUS, 1, "acoustic", "traced"},
                      {BGK_SHEAR, 0, "shear", "analytic"},
                      {BGK_SHEAR, 1, "shear", "traced"}};
  auto rows = parallel_map<Row>(4, thread_count(o), [&](int i) {
    double v = 0;
    check(bgk_critical_wavenumber(jobs[i].branch, o.tau, jobs[i].traced, &v), jobs[i].name);
    return Row{std::string(jobs[i].name), std::string(jobs[i].method), v, v * o.tau};
  });
  Table t;
  t.schema = "bgkc.kcrit.v1";
  t.meta = {{"tau", o.tau}};
  t.columns = {"branch", "method", "k_crit", "k_crit_tau"};
  t.rows = std::move(rows);
  emit(t, o);
  return 0;
}

int run_coeffs(const Options& o) {
  const auto ks = k_grid(o);
  auto rows = parallel_map<Row>(static_cast<int>(ks.size()), thread_count(o), [&](int i) {
    const double k = ks[i];
    Row r{k};
    double lead[6];
    check(bgk_leading_order(k, o.tau, lead));
    if (k == 0) {
      for (int j = 0; j < 7; ++j) r.emplace_back(0.0);
      r.emplace_back(std::nan(""));
    } else {
      bgk_coefficients c;
      check(bgk_transport_coefficients(k, o.tau, &c), k_context(k));
      if (!(c.max_imag_contamination <= 1e-10))
        throw ApiError(BGK_INTERNAL, "imaginary contamination " + bgkc::format_number(c.max_imag_contamination) +
                                         " exceeds 1e-10 " + k_context(k));
      for (double v : c.c) r.emplace_back(v);
      r.emplace_back(c.lambda_shear);
      r.emplace_back(c.det_H);
    }
    for (double v : lead) r.emplace_back(v + 0.0);  // no negative zeros at k = 0
    return r;
  });
  Table t;
  t.schema = "bgkc.coeffs.v1";
  t.meta = {{"tau", o.tau}};
  t.columns = {"k",       "c1",      "c2",      "c3",      "c4",      "c5",      "c6",     "lambda_shear",
               "det_H",   "lead_c1", "lead_c2", "lead_c3", "lead_c4", "lead_c5", "lead_c6"};
  t.rows = std::move(rows);
  emit(t, o);
  return 0;
}

int run_generator(const Options& o) {
  std::vector<std::array<double, 3>> kv;
  if (!o.kvec.empty()) {
    if (o.kvec.size() != 3) throw std::invalid_argument("--kvec takes three components x,y,z");
    kv.push_back({o.kvec[0], o.kvec[1], o.kvec[2]});
  } else {
    for (double k : k_grid(o)) kv.push_back({k, 0, 0});
  }
  const int model = model_id(o.model), policy = policy_id(o.policy);
  auto blocks = parallel_map<std::vector<Row>>(static_cast<int>(kv.size()), thread_count(o), [&](int i) {
    bgk_complex m[25];
    int pinned = 0;
    const double norm = std::hypot(kv[i][0], kv[i][1], kv[i][2]);
    check(bgk_generator(kv[i].data(), o.tau, model, policy, o.physical ? 1 : 0, m, &pinned), k_context(norm));
    std::vector<Row> rows;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        rows.push_back({kv[i][0], kv[i][1], kv[i][2], static_cast<double>(pinned), static_cast<double>(a + 1),
                        static_cast<double>(b + 1), m[5 * a + b].re, m[5 * a + b].im});
    return rows;
  });
  Table t;
  t.schema = "bgkc.generator.v1";
  t.meta = {{"tau", o.tau},
            {"model", std::string(bgk_model_name(model))},
            {"variables", std::string(o.physical ? "rho,u,T" : "rho,u,sqrt(3/2)T")}};
  t.columns = {"k1", "k2", "k3", "pinned", "row", "col", "re", "im"};
  for (auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  emit(t, o);
  return 0;
}

struct SimDeleter {
  void operator()(bgk_sim* s) const { bgk_sim_destroy(s); }
};
using SimPtr = std::unique_ptr<bgk_sim, SimDeleter>;

SimPtr make_sim(const Options& o, const std::string& model) {
  bgk_sim_config c;
  bgk_sim_config_default(&c);
  c.tau = o.tau;
  c.K_max = o.kmax;
  c.model = model_id(model);
  c.beyond_critical = policy_id(o.policy);
  c.dt_output = o.dt;
  c.t_end = o.t_end;
  bgk_sim* s = nullptr;
  check(bgk_sim_create(&c, &s), "simulation setup");
  SimPtr sim(s);
  if (o.ic.empty()) check(bgk_sim_set_random(s, o.seed), "random initial state");
  else if (o.ic_format == "fourier") check(bgk_sim_load_fourier(s, o.ic.c_str()), "initial condition");
  else if (o.ic_format == "grid") check(bgk_sim_load_grid(s, o.ic.c_str()), "initial condition");
  else throw std::invalid_argument("--ic-format must be fourier or grid");
  return sim;
}

const char* const kComponents[5] = {"rho", "u1", "u2", "u3", "h5"};

int run_simulate(const Options& o) {
  auto sim = make_sim(o, o.model);
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  size_t frames = 0;
  if (fmt == "csv") {
    // the time-series file format belongs to the library
    const std::string path = o.out == "-" ? "/dev/stdout" : o.out;
    SimPtr work;
    bgk_sim* w = nullptr;
    check(bgk_sim_clone(sim.get(), &w));
    work.reset(w);
    check(bgk_sim_run(w, path.c_str(), &frames), "time series");
    if (!o.final_state.empty()) check(bgk_sim_write_fourier(w, o.final_state.c_str()), "final state");
    if (!o.snapshot.empty()) {
      double im = 0;
      check(bgk_sim_snapshot(w, o.snapshot_n, o.snapshot.c_str(), &im), "snapshot");
      std::cerr << "bgkc: snapshot max relative imaginary part " << bgkc::format_number(im) << "\n";
    }
  } else if (fmt == "json") {
    Table t;
    t.schema = "bgkc.timeseries.v1";
    t.meta = {{"tau", o.tau}, {"model", o.model}, {"kmax", static_cast<double>(o.kmax)}};
    t.columns = {"time", "k1", "k2", "k3"};
    for (auto c : kComponents) {
      t.columns.push_back(std::string("re_") + c);
      t.columns.push_back(std::string("im_") + c);
    }
    size_t n = 0;
    check(bgk_sim_lattice_size(sim.get(), &n));
    const auto steps = static_cast<long>(std::floor(o.t_end / o.dt + 1e-9));
    bgk_sim* last = nullptr;
    for (long i = 0; i <= steps; ++i) {
      bgk_sim* w = nullptr;
      check(bgk_sim_clone(sim.get(), &w));
      SimPtr frame(w);
      check(bgk_sim_evolve(w, static_cast<double>(i) * o.dt), "time series");
      double time = 0;
      check(bgk_sim_time(w, &time));
      for (size_t p = 0; p < n; ++p) {
        int lat[3];
        bgk_complex h[5];
        check(bgk_sim_lattice_point(w, p, lat));
        check(bgk_sim_get_coefficient(w, lat, h));
        Row r{time, static_cast<double>(lat[0]), static_cast<double>(lat[1]), static_cast<double>(lat[2])};
        for (auto& z : h) {
          r.emplace_back(z.re);
          r.emplace_back(z.im);
        }
        t.rows.push_back(std::move(r));
      }
      ++frames;
      if (i == steps) last = frame.release();
    }
    SimPtr final_sim(last);
    if (!o.final_state.empty()) check(bgk_sim_write_fourier(last, o.final_state.c_str()), "final state");
    if (!o.snapshot.empty()) {
      double im = 0;
      check(bgk_sim_snapshot(last, o.snapshot_n, o.snapshot.c_str(), &im), "snapshot");
    }
    emit(t, o);
  } else {
    throw std::invalid_argument("--format must be csv or json");
  }
  std::cerr << "bgkc: simulate wrote " << frames << " frames\n";
  return 0;
}

int run_compare(const Options& o) {
  if (o.models.empty()) throw std::invalid_argument("--models needs at least one model");
  // the reference model decides the beyond-critical check of the setup
  auto sim = make_sim(o, o.models[0]);
  std::vector<int> ids;
  for (const auto& m : o.models) ids.push_back(model_id(m));
  bgk_comparison* c = nullptr;
  check(bgk_compare_models(sim.get(), ids.data(), static_cast<int>(ids.size()), &c), "compare");
  std::unique_ptr<bgk_comparison, void (*)(bgk_comparison*)> cmp(c, bgk_comparison_destroy);
  int nm = 0, nt = 0;
  check(bgk_comparison_dims(c, &nm, &nt));
  Table t;
  t.schema = "bgkc.compare.v1";
  t.meta = {{"tau", o.tau}, {"kmax", static_cast<double>(o.kmax)}, {"reference", std::string(bgk_model_name(ids[0]))}};
  t.columns = {"time"};
  for (int m = 0; m < nm; ++m) t.columns.push_back(std::string("diff_") + bgk_model_name(ids[m]));
  for (int ti = 0; ti < nt; ++ti) {
    double time = 0;
    check(bgk_comparison_time(c, ti, &time));
    Row r{time};
    for (int m = 0; m < nm; ++m) {
      double d = 0;
      check(bgk_comparison_diff(c, m, ti, &d));
      r.emplace_back(d);
    }
    t.rows.push_back(std::move(r));
  }
  emit(t, o);
  return 0;
}

int run_validate(const Options& o) {
  bgk_validation_options vo;
  bgk_validation_options_default(&vo);
  vo.seed = o.seed;
  vo.perturb_c2 = o.perturb_c2;
  vo.n_nodes = o.nodes;
  std::vector<int> ids = o.criteria;
  if (ids.empty())
    for (int i = 1; i <= 12; ++i) ids.push_back(i);
  struct Outcome {
    Row row;
    bool pass = false, error = false;
    std::string line;
  };
  auto res = parallel_map<Outcome>(static_cast<int>(ids.size()), thread_count(o), [&](int i) {
    bgk_report* r = nullptr;
    check(bgk_validate(&vo, &ids[i], 1, &r), "criterion " + std::to_string(ids[i]));
    std::unique_ptr<bgk_report, void (*)(bgk_report*)> rep(r, bgk_report_destroy);
    bgk_check c;
    check(bgk_report_check(r, 0, &c));
    const double margin = c.upper_bound ? c.threshold - c.value : c.value - c.threshold;
    Outcome out;
    out.pass = c.pass != 0;
    out.error = c.error != 0;
    out.row = {static_cast<double>(c.id), std::string(c.name),       std::string(c.pass ? "pass" : "fail"),
               static_cast<double>(c.error), c.value, c.threshold, margin, std::string(c.detail)};
    out.line = std::string(c.pass ? "PASS" : (c.error ? "ERROR" : "FAIL")) + " " + std::to_string(c.id) + " " +
               c.name + ": " + c.detail;
    return out;
  });
  Table t;
  t.schema = "bgkc.validate.v1";
  int passed = 0;
  bool any_error = false;
  for (auto& r : res) {
    passed += r.pass;
    any_error = any_error || r.error;
    std::cerr << r.line << "\n";
    t.rows.push_back(std::move(r.row));
  }
  t.meta = {{"seed", static_cast<double>(o.seed)},
            {"perturb_c2", o.perturb_c2},
            {"n_nodes", static_cast<double>(o.nodes)},
            {"passed", static_cast<double>(passed)},
            {"total", static_cast<double>(res.size())}};
  t.columns = {"id", "name", "result", "error", "value", "threshold", "margin", "detail"};
  emit(t, o, "json");
  if (any_error) return 2;
  return passed == static_cast<int>(res.size()) ? 0 : 1;
}

void add_output(CLI::App* c, Options& o) {
  c->add_option("--out", o.out, "output path ('-' for stdout)");
  c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c->add_option("--threads", o.threads, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
}

void add_sweep(CLI::App* c, Options& o) {
  c->add_option("--k-min", o.k_min, "smallest wave number");
  c->add_option("--k-max", o.k_max, "largest wave number");
  c->add_option("--k-n", o.k_n, "number of wave numbers");
}

void add_sim(CLI::App* c, Options& o) {
  c->add_option("--tau", o.tau, "relaxation time");
  c->add_option("--kmax", o.kmax, "lattice radius |n| <= kmax")->check(CLI::NonNegativeNumber);
  c->add_option("--beyond-critical", o.policy, "reject or pin")->check(CLI::IsMember({"reject", "pin"}));
  c->add_option("--t-end", o.t_end, "final time");
  c->add_option("--dt", o.dt, "output interval");
  c->add_option("--ic", o.ic, "initial condition file (default: random, seeded)");
  c->add_option("--ic-format", o.ic_format, "fourier or grid")->check(CLI::IsMember({"fourier", "grid"}));
  c->add_option("--seed", o.seed, "seed of the random initial condition");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"bgkc: exact linear hydrodynamics of the BGK kinetic model"};
  app.set_version_flag("--version", std::string(bgk_version()));
  app.set_config("--config", "", "key = value file; [section] names a command, flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  auto* modes = app.add_subcommand("modes", "hydrodynamic mode branches over a k sweep");
  modes->add_option("--tau", o.tau, "relaxation time");
  add_sweep(modes, o);
  add_output(modes, o);

  auto* kcrit = app.add_subcommand("kcrit", "critical wave numbers of all branches");
  kcrit->add_option("--tau", o.tau, "relaxation time");
  add_output(kcrit, o);

  auto* coeffs = app.add_subcommand("coeffs", "transport coefficients c1..c6 over a k sweep");
  coeffs->add_option("--tau", o.tau, "relaxation time");
  add_sweep(coeffs, o);
  add_output(coeffs, o);

  auto* gen = app.add_subcommand("generator", "5x5 hydrodynamic generator per wave vector");
  gen->add_option("--tau", o.tau, "relaxation time");
  add_sweep(gen, o);
  gen->add_option("--kvec", o.kvec, "wave vector x,y,z")->delimiter(',')->expected(3);
  gen->add_option("--model", o.model, "exact|euler|ns|burnett");
  gen->add_option("--beyond-critical", o.policy, "reject or pin")->check(CLI::IsMember({"reject", "pin"}));
  gen->add_flag("--physical", o.physical, "(rho, u, T) instead of (rho, u, sqrt(3/2) T)");
  add_output(gen, o);

  auto* simulate = app.add_subcommand("simulate", "evolve Fourier data on the 3-torus");
  add_sim(simulate, o);
  simulate->add_option("--model", o.model, "exact|euler|ns|burnett");
  simulate->add_option("--snapshot", o.snapshot, "physical-space grid dump of the final state");
  simulate->add_option("--snapshot-n", o.snapshot_n, "grid points per direction")->check(CLI::PositiveNumber);
  simulate->add_option("--final-state", o.final_state, "final Fourier state (initial-condition format)");
  add_output(simulate, o);

  auto* compare = app.add_subcommand("compare", "distance of closures from the first model over time");
  add_sim(compare, o);
  compare->add_option("--models", o.models, "comma-separated models, first is the reference")->delimiter(',');
  add_output(compare, o);

  auto* val = app.add_subcommand("validate", "acceptance suite");
  val->add_option("--seed", o.seed, "sampling seed");
  val->add_option("--perturb-c2", o.perturb_c2, "additive fault injected into c2");
  val->add_option("--nodes", o.nodes, "quadrature nodes")->check(CLI::PositiveNumber);
  val->add_option("--criteria", o.criteria, "subset of criteria 1..12")->delimiter(',');
  add_output(val, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (modes->parsed()) return run_modes(o);
    if (kcrit->parsed()) return run_kcrit(o);
    if (coeffs->parsed()) return run_coeffs(o);
    if (gen->parsed()) return run_generator(o);
    if (simulate->parsed()) return run_simulate(o);
    if (compare->parsed()) return run_compare(o);
    if (val->parsed()) return run_validate(o);
  } catch (const std::exception& e) {
    std::cerr << "bgkc: error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
