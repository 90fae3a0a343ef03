/*
 * C interface to the spin-chain gate simulator.
 *
 * Objects are opaque handles created by sc_*_create / sc_run / sc_estimate /
 * sc_sweep_run and released with the matching sc_*_destroy. Every fallible
 * call returns an sc_status; on failure sc_last_error() describes the
 * problem (thread-local, valid until the next failing call on the thread).
 *
 * Text outputs use a two-call protocol: pass buffer = NULL to obtain the
 * required size (including the terminating NUL) in *needed, then call again
 * with a buffer of at least that size.
 */
#ifndef SPINCHAIN_SPINCHAIN_H
#define SPINCHAIN_SPINCHAIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPINCHAIN_BUILDING_LIBRARY)
#define SC_API __attribute__((visibility("default")))
#else
#define SC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_INPUT = 1,
  SC_ERR_VALIDITY = 2,
  SC_ERR_CONVERGENCE = 3,
  SC_ERR_NUMERICAL = 4,
  SC_ERR_INTEGRITY = 5,
  SC_ERR_SINGULAR = 6,
  SC_ERR_IO = 7,
  SC_ERR_INTERNAL = 8
} sc_status;

typedef enum sc_method { SC_METHOD_EXACT = 0, SC_METHOD_BLOCKED = 1 } sc_method;

typedef enum sc_sweep_variable { SC_SWEEP_GRADIENT = 0, SC_SWEEP_RABI = 1 } sc_sweep_variable;

typedef enum sc_spacing { SC_SPACING_LINEAR = 0, SC_SPACING_LOG = 1 } sc_spacing;

typedef struct sc_chain_params {
  int length;
  double coupling;
  double gradient;
  double omega0;
} sc_chain_params;

typedef struct sc_pulse_info {
  int resonant_spin; /* -1 when untagged */
  double rabi;
  double frequency;
  double phase;
  double duration;
  double nominal_angle;
} sc_pulse_info;

typedef struct sc_budget_summary {
  int length;
  double epsilon;
  double p_success;
  double p_unwanted;
  double validity_ratio;
  double mu_end;
  double multiset_delta;
} sc_budget_summary;

typedef struct sc_sweep_spec {
  sc_sweep_variable variable;
  double start;
  double stop;
  int points;
  sc_spacing spacing;
  int length;
  double coupling;
  double omega0;
  double phase;
  double rabi;     /* gradient sweeps */
  double gradient; /* Rabi sweeps */
  int two_pi_k;    /* > 0 overrides rabi in gradient sweeps */
  int run_exact;
  int run_blocked;
  int run_analytic;
  double tolerance;
  int workers;
  int record_timings;
} sc_sweep_spec;

typedef struct sc_sweep_row {
  double value;
  int has_exact;
  double p_exact;
  int has_blocked;
  double p_blocked;
  int has_analytic;
  double p_analytic;
  double epsilon;
  double mu_end;
  int near_two_pi_k; /* 0 when untagged */
  const char* error; /* empty string when the point succeeded */
} sc_sweep_row;

typedef struct sc_sequence sc_sequence;
typedef struct sc_state sc_state;
typedef struct sc_budget sc_budget;
typedef struct sc_sweep sc_sweep;

SC_API const char* sc_last_error(void);
SC_API const char* sc_status_name(sc_status status);

SC_API void sc_chain_params_default(sc_chain_params* params);
SC_API void sc_sweep_spec_default(sc_sweep_spec* spec, sc_sweep_variable variable);

SC_API sc_status sc_epsilon(double rabi, double detuning, double duration, double* out);
SC_API sc_status sc_two_pi_k_rabi(double detuning, int k, double* out);

/* Remote CONTROL-NOT pulse sequence. */
SC_API sc_status sc_sequence_create(const sc_chain_params* params, double rabi, double phase,
                                    sc_sequence** out);
SC_API void sc_sequence_destroy(sc_sequence* seq);
SC_API size_t sc_sequence_size(const sc_sequence* seq);
SC_API sc_status sc_sequence_pulse(const sc_sequence* seq, size_t index, sc_pulse_info* out);
SC_API size_t sc_sequence_warning_count(const sc_sequence* seq);
SC_API const char* sc_sequence_warning(const sc_sequence* seq, size_t index);
SC_API sc_status sc_sequence_table(const sc_sequence* seq, char* buffer, size_t capacity,
                                   size_t* needed);
/* Ground-branch style replay: detunings[i] for every pulse, final mask. */
SC_API sc_status sc_sequence_detunings(const sc_sequence* seq, uint64_t branch,
                                       double* detunings, size_t capacity,
                                       uint64_t* final_branch);

/* Propagation from a basis state through the whole sequence. */
SC_API sc_status sc_run(const sc_sequence* seq, uint64_t initial, sc_method method,
                        double tolerance, sc_state** out);
SC_API void sc_state_destroy(sc_state* state);
SC_API int sc_state_length(const sc_state* state);
SC_API size_t sc_state_dimension(const sc_state* state);
SC_API sc_status sc_state_amplitude(const sc_state* state, uint64_t basis, double* re, double* im);
SC_API sc_status sc_state_norm(const sc_state* state, double* out);
SC_API sc_status sc_state_unwanted_probability(const sc_state* state, double* out);
SC_API sc_status sc_state_dump(const sc_state* state, double min_probability, char* buffer,
                               size_t capacity, size_t* needed);

/* Analytic error budget; pass epsilon < 0 for the default epsilon(Omega, 2J, pi/Omega). */
SC_API sc_status sc_estimate(const sc_chain_params* params, double rabi, double epsilon,
                             sc_budget** out);
SC_API void sc_budget_destroy(sc_budget* budget);
SC_API sc_status sc_budget_summary_get(const sc_budget* budget, sc_budget_summary* out);
SC_API sc_status sc_budget_mu(const sc_budget* budget, int spin, double* out);
SC_API sc_status sc_budget_record(const sc_budget* budget, char* buffer, size_t capacity,
                                  size_t* needed);

/* Parameter sweeps. */
SC_API sc_status sc_sweep_run(const sc_sweep_spec* spec, sc_sweep** out);
SC_API void sc_sweep_destroy(sc_sweep* sweep);
SC_API size_t sc_sweep_size(const sc_sweep* sweep);
SC_API sc_status sc_sweep_row_get(const sc_sweep* sweep, size_t index, sc_sweep_row* out);
SC_API sc_status sc_sweep_write_csv(const sc_sweep* sweep, const char* path);
SC_API sc_status sc_sweep_csv(const sc_sweep* sweep, char* buffer, size_t capacity, size_t* needed);
SC_API sc_status sc_sweep_write_gnuplot(const sc_sweep* sweep, const char* csv_path,
                                        const char* script_path);

#ifdef __cplusplus
}
#endif

#endif /* SPINCHAIN_SPINCHAIN_H */
