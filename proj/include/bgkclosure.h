#ifndef BGKCLOSURE_H
#define BGKCLOSURE_H

/* C interface to the linearized BGK exact-hydrodynamics library.
   Every function returning int returns a status code (BGK_OK on success);
   bgk_last_error() gives the message of the last failure on the calling thread.
   All functions are reentrant; handles must not be shared between threads
   without external synchronization. */

#include <stddef.h>

#if defined(_WIN32)
#define BGK_API __declspec(dllexport)
#else
#define BGK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define BGK_VERSION "1.0.0"

enum bgk_status {
  BGK_OK = 0,
  BGK_INVALID_ARGUMENT = 1,
  BGK_DOMAIN = 2,
  BGK_RANGE = 3,
  BGK_DEGENERATE = 4,
  BGK_NON_CONVERGENCE = 5,
  BGK_STRIP_ESCAPE = 6,
  BGK_CONTOUR_THROUGH_ZERO = 7,
  BGK_RESOLUTION = 8,
  BGK_DEGENERATE_MODES = 9,
  BGK_BEYOND_CRITICAL = 10,
  BGK_DIVISION_BY_ZERO = 11,
  BGK_IO = 12,
  BGK_INTERNAL = 99
};

enum bgk_branch { BGK_DIFFUSION = 0, BGK_SHEAR = 1, BGK_ACOUSTIC_PLUS = 2, BGK_ACOUSTIC_MINUS = 3 };
enum bgk_model { BGK_EXACT = 0, BGK_EULER = 1, BGK_NAVIER_STOKES = 2, BGK_BURNETT = 3 };
enum bgk_policy { BGK_REJECT = 0, BGK_PIN_TO_ESSENTIAL = 1 };
enum bgk_closure_kind { BGK_CLOSURE_EXACT = 0, BGK_CLOSURE_EULER = 1, BGK_CLOSURE_NS = 2 };
enum bgk_sigma_form { BGK_SIGMA_CLOSED = 0, BGK_SIGMA_DET = 1 };

typedef struct {
  double re, im;
} bgk_complex;

BGK_API const char* bgk_version(void);
BGK_API const char* bgk_last_error(void);
BGK_API const char* bgk_status_name(int status);
BGK_API const char* bgk_model_name(int model);
/* accepts exact|euler|ns|navier-stokes|burnett */
BGK_API int bgk_parse_model(const char* name, int* model);
BGK_API const char* bgk_branch_name(int branch);

/* ---- plasma dispersion function ---- */
BGK_API int bgk_faddeeva_w(bgk_complex z, bgk_complex* out);
/* lower != 0 selects the continuation from the lower half plane */
BGK_API int bgk_plasma_z(bgk_complex zeta, int lower, bgk_complex* out);
BGK_API int bgk_plasma_z_asymptotic(bgk_complex zeta, int terms, bgk_complex* out);

/* ---- spectral function ---- */
BGK_API int bgk_sigma(bgk_complex lambda, double k, double tau, int form, bgk_complex* out);

/* ---- hydrodynamic modes ---- */
/* continuation != 0 follows the branch below the essential line */
BGK_API int bgk_branch_root(int branch, double k, double tau, int continuation, bgk_complex* out);
/* (diff, ac, ac*, shear, shear); BGK_BEYOND_CRITICAL if a branch is dead */
BGK_API int bgk_modes(double k, double tau, bgk_complex out[5]);
/* traced != 0 uses branch termination (also for the shear branch) */
BGK_API int bgk_critical_wavenumber(int branch, double tau, int traced, double* out);
BGK_API int bgk_critical_wavenumber_min(double tau, double* out);
BGK_API int bgk_count_roots(double k, double tau, double margin, int* out);

/* ---- closure ---- */
typedef struct {
  double k, tau;
  double c[6];
  double lambda_shear;
  double det_H;
  bgk_complex C[6];
  bgk_complex C_expanded[6];
  double max_imag_contamination;
} bgk_coefficients;

BGK_API int bgk_transport_coefficients(double k, double tau, bgk_coefficients* out);
BGK_API int bgk_theta(bgk_complex lambda, double k, double tau, bgk_complex* out);
/* leading small-k terms of c_1..c_6 */
BGK_API int bgk_leading_order(double k, double tau, double out[6]);
/* 5x5 row-major generator; physical != 0 returns (rho, u, T) variables */
BGK_API int bgk_generator(const double kvec[3], double tau, int model, int policy, int physical,
                          bgk_complex out[25], int* pinned);
/* displayed constant-coefficient matrices (Euler/NS/Burnett), physical, k-aligned */
BGK_API int bgk_classical_matrix(double k, double tau, int model, bgk_complex out[25]);

typedef struct {
  char name[16];
  int coeff, order;
  double extracted, target, rel_error;
  int pass;
} bgk_expansion_term;

/* perturb: NULL or six additive offsets to c_1..c_6; writes up to capacity
   terms and the total count into *n_terms */
BGK_API int bgk_expansion_check(double tau, double tol, const double* perturb, bgk_expansion_term* terms,
                                int capacity, int* n_terms, int* all_pass);

/* ---- kinetic oracle ---- */
BGK_API int bgk_quadrature_z(bgk_complex zeta, int n_nodes, bgk_complex* out);
BGK_API int bgk_quadrature_sigma(bgk_complex lambda, double k, double tau, int n_nodes, bgk_complex* out);
BGK_API int bgk_quadrature_root(bgk_complex guess, double k, double tau, int n_nodes, bgk_complex* out);
BGK_API int bgk_eigenvector_residual(double k, double tau, int n_nodes, double* out);
BGK_API int bgk_invariance_residual(double k, double tau, int n_nodes, int kind, double* out);

typedef struct {
  bgk_complex M[25]; /* compressed projector, row-major */
  double idempotency, max_angle, singular_gap, trace_error;
} bgk_riesz_report;
/* default contour around the five modes */
BGK_API int bgk_riesz(double k, double tau, int n_nodes, int n_contour, bgk_riesz_report* out);

/* ---- linear hydrodynamics on the 3-torus ---- */
typedef struct {
  double tau;
  int K_max;
  int model;
  int beyond_critical;
  double dt_output;
  double t_end;
} bgk_sim_config;

typedef struct bgk_sim bgk_sim;

BGK_API void bgk_sim_config_default(bgk_sim_config* c);
/* validates the configuration and assembles all generators */
BGK_API int bgk_sim_create(const bgk_sim_config* c, bgk_sim** out);
BGK_API void bgk_sim_destroy(bgk_sim* s);
/* independent copy of configuration, generators and state */
BGK_API int bgk_sim_clone(const bgk_sim* s, bgk_sim** out);
/* state setters replace the current state and reset time to 0 */
BGK_API int bgk_sim_load_fourier(bgk_sim* s, const char* path);
BGK_API int bgk_sim_load_grid(bgk_sim* s, const char* path);
BGK_API int bgk_sim_set_random(bgk_sim* s, unsigned long long seed);
BGK_API int bgk_sim_set_coefficient(bgk_sim* s, const int n[3], const bgk_complex h[5]);
BGK_API int bgk_sim_get_coefficient(const bgk_sim* s, const int n[3], bgk_complex h[5]);
BGK_API int bgk_sim_lattice_size(const bgk_sim* s, size_t* out);
BGK_API int bgk_sim_lattice_point(const bgk_sim* s, size_t i, int n[3]);
BGK_API int bgk_sim_time(const bgk_sim* s, double* out);
BGK_API int bgk_sim_hermitian_defect(const bgk_sim* s, double* out);
/* advances the state by t */
BGK_API int bgk_sim_evolve(bgk_sim* s, double t);
/* records the state every dt_output until t_end (from the current state,
   time counted from its current value) into a time-series file and leaves
   the handle at the last frame; path may be NULL */
BGK_API int bgk_sim_run(bgk_sim* s, const char* timeseries_path, size_t* n_frames);
BGK_API int bgk_sim_write_fourier(const bgk_sim* s, const char* path);
/* physical-space grid dump; max_imag receives the largest relative imaginary part */
BGK_API int bgk_sim_snapshot(const bgk_sim* s, int N, const char* path, double* max_imag);
/* (rho, u1, u2, u3, T) at x */
BGK_API int bgk_sim_point_value(const bgk_sim* s, const double x[3], double out[5]);
/* Exact-model kernel table: rows (|n|^2, c1..c6, lambda_shear) */
BGK_API int bgk_sim_kernel_size(const bgk_sim* s, size_t* out);
BGK_API int bgk_sim_kernel_row(const bgk_sim* s, size_t i, double* k2, double vals[7]);

typedef struct bgk_comparison bgk_comparison;
/* evolves the current state under each model; models[0] is the reference */
BGK_API int bgk_compare_models(const bgk_sim* s, const int* models, int n_models, bgk_comparison** out);
BGK_API void bgk_comparison_destroy(bgk_comparison* c);
BGK_API int bgk_comparison_dims(const bgk_comparison* c, int* n_models, int* n_times);
BGK_API int bgk_comparison_model(const bgk_comparison* c, int m, int* model);
BGK_API int bgk_comparison_time(const bgk_comparison* c, int t, double* out);
/* L2 distance of model m from the reference at time index t */
BGK_API int bgk_comparison_diff(const bgk_comparison* c, int m, int t, double* out);

/* ---- acceptance suite ---- */
typedef struct {
  unsigned seed;
  double perturb_c2; /* additive fault injected into c_2 */
  int n_nodes;
} bgk_validation_options;

typedef struct {
  int id;
  const char* name;   /* valid for the report's lifetime */
  const char* detail;
  int pass;
  int error;          /* the check raised instead of completing */
  int upper_bound;    /* pass requires value <= threshold (else value > threshold) */
  double value, threshold;
} bgk_check;

typedef struct bgk_report bgk_report;
BGK_API void bgk_validation_options_default(bgk_validation_options* o);
/* ids: NULL for criteria 1..12 */
BGK_API int bgk_validate(const bgk_validation_options* o, const int* ids, int n_ids, bgk_report** out);
BGK_API void bgk_report_destroy(bgk_report* r);
BGK_API int bgk_report_count(const bgk_report* r, int* out);
BGK_API int bgk_report_check(const bgk_report* r, int i, bgk_check* out);

#ifdef __cplusplus
}
#endif

#endif
