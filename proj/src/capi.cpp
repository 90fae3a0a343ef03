#include "spinchain/spinchain.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "spinchain/errors.hpp"
#include "spinchain/harness.hpp"

struct sc_sequence {
  spinchain::PulseSequence seq;
};

struct sc_state {
  spinchain::StateVector state;
};

struct sc_budget {
  spinchain::ErrorBudget budget;
};

struct sc_sweep {
  spinchain::SweepSpec spec;
  std::vector<spinchain::ResultRow> rows;
};

namespace {

thread_local std::string g_last_error;

sc_status fail(sc_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs f and maps library exceptions onto status codes.
template <class F>
sc_status guarded(F&& f) {
  try {
    f();
    return SC_OK;
  } catch (const spinchain::InputError& e) {
    return fail(SC_ERR_INPUT, e.what());
  } catch (const spinchain::ValidityError& e) {
    return fail(SC_ERR_VALIDITY, e.what());
  } catch (const spinchain::ConvergenceError& e) {
    return fail(SC_ERR_CONVERGENCE, e.what());
  } catch (const spinchain::NumericalError& e) {
    return fail(SC_ERR_NUMERICAL, e.what());
  } catch (const spinchain::IntegrityError& e) {
    return fail(SC_ERR_INTEGRITY, e.what());
  } catch (const spinchain::SingularityError& e) {
    return fail(SC_ERR_SINGULAR, e.what());
  } catch (const spinchain::IoError& e) {
    return fail(SC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SC_ERR_INTERNAL, "unknown error");
  }
}

sc_status copy_text(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (buffer == nullptr) return SC_OK;
  if (capacity < text.size() + 1) return fail(SC_ERR_INPUT, "buffer too small");
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return SC_OK;
}

spinchain::ChainParams to_params(const sc_chain_params* p) {
  if (p == nullptr) throw spinchain::InputError("null chain parameters");
  return spinchain::ChainParams{p->length, p->coupling, p->gradient, p->omega0};
}

#define SC_REQUIRE(cond, msg) \
  if (!(cond)) return fail(SC_ERR_INPUT, msg)

}  // namespace

extern "C" {

const char* sc_last_error(void) { return g_last_error.c_str(); }

const char* sc_status_name(sc_status status) {
  switch (status) {
    case SC_OK: return "ok";
    case SC_ERR_INPUT: return "input error";
    case SC_ERR_VALIDITY: return "validity error";
    case SC_ERR_CONVERGENCE: return "convergence error";
    case SC_ERR_NUMERICAL: return "numerical error";
    case SC_ERR_INTEGRITY: return "integrity error";
    case SC_ERR_SINGULAR: return "singularity error";
    case SC_ERR_IO: return "i/o error";
    case SC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void sc_chain_params_default(sc_chain_params* params) {
  if (params == nullptr) return;
  const spinchain::ChainParams d;
  *params = sc_chain_params{d.length, d.coupling, d.gradient, d.omega0};
}

void sc_sweep_spec_default(sc_sweep_spec* spec, sc_sweep_variable variable) {
  if (spec == nullptr) return;
  spinchain::SweepSpec d;
  if (variable == SC_SWEEP_RABI) {
    d.variable = spinchain::SweepVariable::rabi;
    d.start = 0.10;
    d.stop = 0.70;
    d.points = 201;
    d.spacing = spinchain::Spacing::linear;
  }
  spec->variable = variable;
  spec->start = d.start;
  spec->stop = d.stop;
  spec->points = d.points;
  spec->spacing = d.spacing == spinchain::Spacing::log ? SC_SPACING_LOG : SC_SPACING_LINEAR;
  spec->length = d.length;
  spec->coupling = d.coupling;
  spec->omega0 = d.omega0;
  spec->phase = d.phase;
  spec->rabi = d.rabi;
  spec->gradient = d.gradient;
  spec->two_pi_k = 0;
  spec->run_exact = d.methods.exact;
  spec->run_blocked = d.methods.blocked;
  spec->run_analytic = d.methods.analytic;
  spec->tolerance = d.tolerance;
  spec->workers = d.workers;
  spec->record_timings = d.record_timings;
}

sc_status sc_epsilon(double rabi, double detuning, double duration, double* out) {
  SC_REQUIRE(out != nullptr, "null output");
  return guarded([&] { *out = spinchain::epsilon(rabi, detuning, duration); });
}

sc_status sc_two_pi_k_rabi(double detuning, int k, double* out) {
  SC_REQUIRE(out != nullptr, "null output");
  return guarded([&] { *out = spinchain::two_pi_k_rabi(detuning, k); });
}

sc_status sc_sequence_create(const sc_chain_params* params, double rabi, double phase,
                             sc_sequence** out) {
  SC_REQUIRE(out != nullptr, "null output");
  *out = nullptr;
  return guarded([&] {
    *out = new sc_sequence{spinchain::build_remote_cn_sequence(to_params(params), rabi, phase)};
  });
}

void sc_sequence_destroy(sc_sequence* seq) { delete seq; }

size_t sc_sequence_size(const sc_sequence* seq) {
  return seq == nullptr ? 0 : seq->seq.pulses.size();
}

sc_status sc_sequence_pulse(const sc_sequence* seq, size_t index, sc_pulse_info* out) {
  SC_REQUIRE(seq != nullptr && out != nullptr, "null argument");
  SC_REQUIRE(index < seq->seq.pulses.size(), "pulse index out of range");
  const auto& p = seq->seq.pulses[index];
  *out = sc_pulse_info{p.resonant_spin.value_or(-1), p.rabi, p.frequency, p.phase, p.duration,
                       p.nominal_angle()};
  return SC_OK;
}

size_t sc_sequence_warning_count(const sc_sequence* seq) {
  return seq == nullptr ? 0 : seq->seq.warnings.size();
}

const char* sc_sequence_warning(const sc_sequence* seq, size_t index) {
  if (seq == nullptr || index >= seq->seq.warnings.size()) return nullptr;
  return seq->seq.warnings[index].c_str();
}

sc_status sc_sequence_table(const sc_sequence* seq, char* buffer, size_t capacity, size_t* needed) {
  SC_REQUIRE(seq != nullptr, "null sequence");
  std::ostringstream os;
  spinchain::write_sequence_table(os, seq->seq);
  return copy_text(os.str(), buffer, capacity, needed);
}

sc_status sc_sequence_detunings(const sc_sequence* seq, uint64_t branch, double* detunings,
                                size_t capacity, uint64_t* final_branch) {
  SC_REQUIRE(seq != nullptr, "null sequence");
  SC_REQUIRE(detunings == nullptr || capacity >= seq->seq.pulses.size(), "buffer too small");
  return guarded([&] {
    const auto profile = spinchain::detuning_profile(seq->seq, spinchain::BasisState{branch});
    if (detunings != nullptr) {
      for (size_t i = 0; i < profile.entries.size(); ++i) detunings[i] = profile.entries[i].detuning;
    }
    if (final_branch != nullptr) *final_branch = profile.final_branch.bits();
  });
}

sc_status sc_run(const sc_sequence* seq, uint64_t initial, sc_method method, double tolerance,
                 sc_state** out) {
  SC_REQUIRE(seq != nullptr && out != nullptr, "null argument");
  SC_REQUIRE(method == SC_METHOD_EXACT || method == SC_METHOD_BLOCKED, "unknown method");
  *out = nullptr;
  return guarded([&] {
    spinchain::ExactOptions opts;
    opts.tolerance = tolerance;
    auto result = spinchain::run_sequence(
        spinchain::BasisState{initial}, seq->seq,
        method == SC_METHOD_EXACT ? spinchain::Method::exact : spinchain::Method::blocked, opts);
    *out = new sc_state{std::move(result)};
  });
}

void sc_state_destroy(sc_state* state) { delete state; }

int sc_state_length(const sc_state* state) { return state == nullptr ? 0 : state->state.length(); }

size_t sc_state_dimension(const sc_state* state) {
  return state == nullptr ? 0 : state->state.dimension();
}

sc_status sc_state_amplitude(const sc_state* state, uint64_t basis, double* re, double* im) {
  SC_REQUIRE(state != nullptr && re != nullptr && im != nullptr, "null argument");
  return guarded([&] {
    const auto a = state->state.amplitude(spinchain::BasisState{basis});
    *re = a.real();
    *im = a.imag();
  });
}

sc_status sc_state_norm(const sc_state* state, double* out) {
  SC_REQUIRE(state != nullptr && out != nullptr, "null argument");
  *out = state->state.norm();
  return SC_OK;
}

sc_status sc_state_unwanted_probability(const sc_state* state, double* out) {
  SC_REQUIRE(state != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = spinchain::unwanted_probability(state->state); });
}

sc_status sc_state_dump(const sc_state* state, double min_probability, char* buffer,
                        size_t capacity, size_t* needed) {
  SC_REQUIRE(state != nullptr, "null state");
  std::ostringstream os;
  spinchain::write_state_dump(os, state->state, min_probability);
  return copy_text(os.str(), buffer, capacity, needed);
}

sc_status sc_estimate(const sc_chain_params* params, double rabi, double epsilon, sc_budget** out) {
  SC_REQUIRE(out != nullptr, "null output");
  *out = nullptr;
  return guarded([&] {
    const auto p = to_params(params);
    p.validate();
    std::optional<double> eps;
    if (epsilon >= 0.0) eps = epsilon;
    *out = new sc_budget{
        spinchain::gate_success_estimate(p.length, rabi, p.gradient, p.coupling, eps)};
  });
}

void sc_budget_destroy(sc_budget* budget) { delete budget; }

sc_status sc_budget_summary_get(const sc_budget* budget, sc_budget_summary* out) {
  SC_REQUIRE(budget != nullptr && out != nullptr, "null argument");
  const auto& b = budget->budget;
  *out = sc_budget_summary{b.length,         b.epsilon,  b.p_success,     b.p_unwanted,
                           b.validity_ratio, b.mu_end(), b.multiset_delta};
  return SC_OK;
}

sc_status sc_budget_mu(const sc_budget* budget, int spin, double* out) {
  SC_REQUIRE(budget != nullptr && out != nullptr, "null argument");
  SC_REQUIRE(spin >= 0 && spin < budget->budget.length, "spin index out of range");
  *out = budget->budget.mu[static_cast<size_t>(spin)];
  return SC_OK;
}

sc_status sc_budget_record(const sc_budget* budget, char* buffer, size_t capacity, size_t* needed) {
  SC_REQUIRE(budget != nullptr, "null budget");
  std::ostringstream os;
  spinchain::write_budget(os, budget->budget);
  return copy_text(os.str(), buffer, capacity, needed);
}

sc_status sc_sweep_run(const sc_sweep_spec* spec, sc_sweep** out) {
  SC_REQUIRE(spec != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    spinchain::SweepSpec s;
    s.variable = spec->variable == SC_SWEEP_RABI ? spinchain::SweepVariable::rabi
                                                 : spinchain::SweepVariable::gradient;
    s.start = spec->start;
    s.stop = spec->stop;
    s.points = spec->points;
    s.spacing = spec->spacing == SC_SPACING_LOG ? spinchain::Spacing::log : spinchain::Spacing::linear;
    s.length = spec->length;
    s.coupling = spec->coupling;
    s.omega0 = spec->omega0;
    s.phase = spec->phase;
    s.rabi = spec->rabi;
    s.gradient = spec->gradient;
    if (spec->two_pi_k > 0) s.two_pi_k = spec->two_pi_k;
    s.methods = spinchain::MethodSet{spec->run_exact != 0, spec->run_blocked != 0,
                                     spec->run_analytic != 0};
    s.tolerance = spec->tolerance;
    s.workers = spec->workers;
    s.record_timings = spec->record_timings != 0;
    auto rows = spinchain::run_sweep(s);
    *out = new sc_sweep{s, std::move(rows)};
  });
}

void sc_sweep_destroy(sc_sweep* sweep) { delete sweep; }

size_t sc_sweep_size(const sc_sweep* sweep) { return sweep == nullptr ? 0 : sweep->rows.size(); }

sc_status sc_sweep_row_get(const sc_sweep* sweep, size_t index, sc_sweep_row* out) {
  SC_REQUIRE(sweep != nullptr && out != nullptr, "null argument");
  SC_REQUIRE(index < sweep->rows.size(), "row index out of range");
  const auto& r = sweep->rows[index];
  const double nan = std::nan("");
  *out = sc_sweep_row{r.value,
                      r.p_exact.has_value(),
                      r.p_exact.value_or(nan),
                      r.p_blocked.has_value(),
                      r.p_blocked.value_or(nan),
                      r.p_analytic.has_value(),
                      r.p_analytic.value_or(nan),
                      r.epsilon,
                      r.mu_end,
                      r.near_two_pi_k.value_or(0),
                      r.error.c_str()};
  return SC_OK;
}

sc_status sc_sweep_write_csv(const sc_sweep* sweep, const char* path) {
  SC_REQUIRE(sweep != nullptr && path != nullptr, "null argument");
  return guarded([&] { spinchain::emit_csv(sweep->rows, std::filesystem::path(path)); });
}

sc_status sc_sweep_csv(const sc_sweep* sweep, char* buffer, size_t capacity, size_t* needed) {
  SC_REQUIRE(sweep != nullptr, "null sweep");
  std::ostringstream os;
  spinchain::emit_csv(sweep->rows, os);
  return copy_text(os.str(), buffer, capacity, needed);
}

sc_status sc_sweep_write_gnuplot(const sc_sweep* sweep, const char* csv_path,
                                 const char* script_path) {
  SC_REQUIRE(sweep != nullptr && csv_path != nullptr && script_path != nullptr, "null argument");
  return guarded([&] {
    std::ofstream out(script_path);
    if (!out) throw spinchain::IoError(std::string("cannot open ") + script_path + " for writing");
    spinchain::write_gnuplot_script(out, csv_path, sweep->spec.variable);
    if (!out) throw spinchain::IoError(std::string("write to ") + script_path + " failed");
  });
}

}  // extern "C"
