// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinchain/spinchain.h"

namespace {

struct Failure {
  sc_status status;
  std::string message;
};

void check(sc_status s) {
  if (s != SC_OK) throw Failure{s, sc_last_error()};
}

template <class Fn, class Handle>
std::string fetch_text(Fn fn, Handle h) {
  size_t needed = 0;
  check(fn(h, nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(fn(h, out.data(), out.size(), &needed));
  out.resize(needed - 1);
  return out;
}

struct ChainOptions {
  sc_chain_params params{};
  double rabi = 0.15;
  int two_pi_k = 0;
  double phase = 0.0;

  ChainOptions() { sc_chain_params_default(&params); }

  void add_to(CLI::App* app, bool with_rabi = true) {
    app->add_option("--length", params.length, "number of spins L")->capture_default_str();
    app->add_option("--coupling", params.coupling, "Ising coupling J")->capture_default_str();
    app->add_option("--gradient", params.gradient, "frequency step between spins")
        ->capture_default_str();
    app->add_option("--omega0", params.omega0, "frequency of spin 0")->capture_default_str();
    if (!with_rabi) return;
    auto* r = app->add_option("--rabi", rabi, "base Rabi frequency")->capture_default_str();
    auto* k = app->add_option("--two-pi-k", two_pi_k,
                              "use the Rabi frequency 2J/sqrt(4k^2-1) for this k")
                  ->check(CLI::PositiveNumber);
    r->excludes(k);
    app->add_option("--phase", phase, "pulse phase")->capture_default_str();
  }

  double resolved_rabi() const {
    if (two_pi_k <= 0) return rabi;
    double r = 0.0;
    check(sc_two_pi_k_rabi(2.0 * params.coupling, two_pi_k, &r));
    return r;
  }
};

void print_value(const char* key, double v) { std::printf("%s=%.17e\n", key, v); }

int run_simulate(const ChainOptions& chain, const std::string& method, double tol,
                 bool dump_sequence, double dump_state) {
  const double rabi = chain.resolved_rabi();
  const bool all = method == "all";
  print_value("rabi", rabi);
  double eps = 0.0;
  check(sc_epsilon(rabi, 2.0 * chain.params.coupling, 3.14159265358979323846 / rabi, &eps));
  print_value("epsilon", eps);

  if (all || method == "exact" || method == "blocked") {
    sc_sequence* seq = nullptr;
    check(sc_sequence_create(&chain.params, rabi, chain.phase, &seq));
    std::unique_ptr<sc_sequence, void (*)(sc_sequence*)> guard(seq, sc_sequence_destroy);
    for (size_t i = 0; i < sc_sequence_warning_count(seq); ++i) {
      std::fprintf(stderr, "warning: %s\n", sc_sequence_warning(seq, i));
    }
    if (dump_sequence) std::fputs(fetch_text(sc_sequence_table, seq).c_str(), stdout);

    std::vector<std::pair<const char*, sc_method>> methods;
    if (all || method == "exact") methods.emplace_back("exact", SC_METHOD_EXACT);
    if (all || method == "blocked") methods.emplace_back("blocked", SC_METHOD_BLOCKED);
    for (const auto& [name, m] : methods) {
      sc_state* state = nullptr;
      check(sc_run(seq, 0, m, tol, &state));
      std::unique_ptr<sc_state, void (*)(sc_state*)> sg(state, sc_state_destroy);
      double p = 0.0, norm = 0.0;
      check(sc_state_unwanted_probability(state, &p));
      check(sc_state_norm(state, &norm));
      print_value((std::string("p_") + name).c_str(), p);
      print_value((std::string("norm_") + name).c_str(), norm);
      if (dump_state >= 0.0) {
        std::printf("# state %s: bits re im probability\n", name);
        size_t needed = 0;
        check(sc_state_dump(state, dump_state, nullptr, 0, &needed));
        std::string text(needed, '\0');
        check(sc_state_dump(state, dump_state, text.data(), text.size(), &needed));
        std::fputs(text.c_str(), stdout);
      }
    }
  }
  if (all || method == "analytic") {
    sc_budget* b = nullptr;
    check(sc_estimate(&chain.params, rabi, -1.0, &b));
    sc_budget_summary s;
    sc_budget_summary_get(b, &s);
    sc_budget_destroy(b);
    print_value("p_analytic", s.p_unwanted);
  }
  return 0;
}

struct SweepOptions {
  double start = 0.0, stop = 0.0;
  int points = 0;
  std::string spacing;
  std::string out;
  std::string gnuplot;
  std::string method = "all";
  double tol = 1e-10;
  int workers = 1;
  bool timings = false;

  void add_to(CLI::App* app) {
    app->add_option("--start", start, "first grid value")->capture_default_str();
    app->add_option("--stop", stop, "last grid value")->capture_default_str();
    app->add_option("--points", points, "grid size")->capture_default_str();
    app->add_option("--spacing", spacing, "grid spacing")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    app->add_option("--out", out, "CSV output file (default: stdout)");
    app->add_option("--gnuplot", gnuplot, "also write a gnuplot script for the CSV (needs --out)");
    app->add_option("--method", method, "methods to evaluate")
        ->check(CLI::IsMember({"exact", "blocked", "analytic", "all"}))
        ->capture_default_str();
    app->add_option("--tol", tol, "exact-solver tolerance per pulse")->capture_default_str();
    app->add_option("--workers", workers, "parallel grid points")->capture_default_str();
    app->add_flag("--timings", timings, "record wall times in the CSV");
  }
};

int run_sweep(sc_sweep_variable variable, const ChainOptions& chain, const SweepOptions& o) {
  sc_sweep_spec spec;
  sc_sweep_spec_default(&spec, variable);
  spec.start = o.start;
  spec.stop = o.stop;
  spec.points = o.points;
  spec.spacing = o.spacing == "log" ? SC_SPACING_LOG : SC_SPACING_LINEAR;
  spec.length = chain.params.length;
  spec.coupling = chain.params.coupling;
  spec.omega0 = chain.params.omega0;
  spec.phase = chain.phase;
  spec.gradient = chain.params.gradient;
  spec.rabi = chain.rabi;
  spec.two_pi_k = chain.two_pi_k;
  spec.run_exact = o.method == "all" || o.method == "exact";
  spec.run_blocked = o.method == "all" || o.method == "blocked";
  spec.run_analytic = o.method == "all" || o.method == "analytic";
  spec.tolerance = o.tol;
  spec.workers = o.workers;
  spec.record_timings = o.timings;
  if (!o.gnuplot.empty() && o.out.empty()) throw Failure{SC_ERR_INPUT, "--gnuplot needs --out"};

  sc_sweep* sweep = nullptr;
  check(sc_sweep_run(&spec, &sweep));
  std::unique_ptr<sc_sweep, void (*)(sc_sweep*)> guard(sweep, sc_sweep_destroy);
  for (size_t i = 0; i < sc_sweep_size(sweep); ++i) {
    sc_sweep_row row;
    check(sc_sweep_row_get(sweep, i, &row));
    if (row.error[0] != '\0') std::fprintf(stderr, "warning: point %.6g: %s\n", row.value, row.error);
  }
  if (o.out.empty()) {
    std::fputs(fetch_text(sc_sweep_csv, sweep).c_str(), stdout);
  } else {
    check(sc_sweep_write_csv(sweep, o.out.c_str()));
    if (!o.gnuplot.empty()) check(sc_sweep_write_gnuplot(sweep, o.out.c_str(), o.gnuplot.c_str()));
  }
  return 0;
}

int run_estimate(const ChainOptions& chain, double eps) {
  sc_budget* b = nullptr;
  check(sc_estimate(&chain.params, chain.resolved_rabi(), eps, &b));
  std::unique_ptr<sc_budget, void (*)(sc_budget*)> guard(b, sc_budget_destroy);
  std::fputs(fetch_text(sc_budget_record, b).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remote CONTROL-NOT gate on an Ising spin chain: simulation and error estimates"};
  app.require_subcommand(1);

  ChainOptions sim_chain;
  std::string method = "all";
  double tol = 1e-10;
  bool dump_sequence = false;
  bool dump_state = false;
  double dump_threshold = 1e-12;
  auto* simulate = app.add_subcommand("simulate", "run the pulse sequence once");
  sim_chain.add_to(simulate);
  simulate->add_option("--method", method, "propagation method")
      ->check(CLI::IsMember({"exact", "blocked", "analytic", "all"}))
      ->capture_default_str();
  simulate->add_option("--tol", tol, "exact-solver tolerance per pulse")->capture_default_str();
  simulate->add_flag("--dump-sequence", dump_sequence, "print the pulse table");
  simulate->add_flag("--dump-state", dump_state, "print the final amplitudes");
  simulate->add_option("--dump-threshold", dump_threshold,
                       "smallest probability printed by --dump-state")
      ->capture_default_str();

  ChainOptions grad_chain;
  SweepOptions grad_opts;
  grad_opts.start = 50.0;
  grad_opts.stop = 1000.0;
  grad_opts.points = 5;
  grad_opts.spacing = "log";
  auto* sweep_gradient = app.add_subcommand("sweep-gradient", "sweep the field gradient");
  grad_chain.add_to(sweep_gradient);
  grad_opts.add_to(sweep_gradient);

  ChainOptions rabi_chain;
  SweepOptions rabi_opts;
  rabi_opts.start = 0.10;
  rabi_opts.stop = 0.70;
  rabi_opts.points = 201;
  rabi_opts.spacing = "linear";
  auto* sweep_rabi = app.add_subcommand("sweep-rabi", "sweep the Rabi frequency");
  rabi_chain.add_to(sweep_rabi, false);
  rabi_opts.add_to(sweep_rabi);
  sweep_rabi->add_option("--phase", rabi_chain.phase, "pulse phase")->capture_default_str();

  ChainOptions est_chain;
  double eps = -1.0;
  auto* estimate = app.add_subcommand("estimate", "analytic gate error estimate (any length)");
  est_chain.add_to(estimate);
  estimate->add_option("--epsilon", eps, "near-resonant error per pulse (default: from Rabi and J)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim_chain, method, tol, dump_sequence, dump_state ? dump_threshold : -1.0);
    if (*sweep_gradient) return run_sweep(SC_SWEEP_GRADIENT, grad_chain, grad_opts);
    if (*sweep_rabi) return run_sweep(SC_SWEEP_RABI, rabi_chain, rabi_opts);
    if (*estimate) return run_estimate(est_chain, eps);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s: %s\n", sc_status_name(f.status), f.message.c_str());
    return 2 + static_cast<int>(f.status);
  }
  return 1;
}
