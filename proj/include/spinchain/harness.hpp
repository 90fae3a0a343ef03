#pragma once

// Parameter sweeps comparing the exact, blocked and analytic error models.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinchain/evolution.hpp"
#include "spinchain/perturbation.hpp"

namespace spinchain {

// Total population outside {|0...0>, |10...01>}. Throws IntegrityError when
// the state's norm deviates from 1 by more than 1e-6.
double unwanted_probability(const StateVector& state);

enum class SweepVariable { gradient, rabi };
enum class Spacing { linear, log };

struct MethodSet {
  bool exact = true;
  bool blocked = false;
  bool analytic = true;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::gradient;
  double start = 50.0;
  double stop = 1000.0;
  int points = 5;
  Spacing spacing = Spacing::log;

  int length = 10;
  double coupling = 1.0;
  double omega0 = 0.0;
  double phase = 0.0;
  double rabi = 0.15;        // fixed Rabi frequency of a gradient sweep
  double gradient = 100.0;   // fixed gradient of a Rabi sweep
  // Gradient sweeps only: use two_pi_k_rabi(2J, k) instead of `rabi`.
  std::optional<int> two_pi_k;

  MethodSet methods;
  double tolerance = 1e-10;
  int workers = 1;
  // Wall times make the CSV non-reproducible, so they are opt-in.
  bool record_timings = false;

  // Throws InputError on an empty/invalid grid or parameters.
  void validate() const;
};

struct ResultRow {
  SweepVariable variable = SweepVariable::gradient;
  double value = 0.0;
  std::optional<double> p_exact;
  std::optional<double> p_blocked;
  std::optional<double> p_analytic;
  double epsilon = 0.0;
  double mu_end = 0.0;
  std::optional<double> runtime_exact_ms;
  std::optional<double> runtime_blocked_ms;
  // Rabi sweeps: k when the value is within half a grid step of
  // two_pi_k_rabi(2J, k), k = 1..16.
  std::optional<int> near_two_pi_k;
  std::string error;  // empty unless a method failed at this point
};

std::vector<double> sweep_grid(const SweepSpec& spec);

std::vector<ResultRow> sweep_gradient(const SweepSpec& spec);
std::vector<ResultRow> sweep_rabi(const SweepSpec& spec);
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

// All methods at one parameter point.
struct PointSpec {
  ChainParams params;
  double rabi = 0.15;
  double phase = 0.0;
  MethodSet methods;
  double tolerance = 1e-10;
  bool record_timings = false;
};
ResultRow evaluate_point(const PointSpec& point);

// Analytic estimate only; never allocates a 2^L object.
ErrorBudget estimate_large_chain(int length, double rabi, double gradient, double coupling);

inline constexpr const char* kCsvHeader =
    "sweep_var,value,p_exact,p_blocked,p_analytic,epsilon,mu_end,runtime_exact_ms,"
    "runtime_blocked_ms";

void emit_csv(std::span<const ResultRow> rows, std::ostream& os);
// Throws IoError naming the path on failure.
void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);

// gnuplot script plotting the CSV columns on log axes.
void write_gnuplot_script(std::ostream& os, const std::string& csv_path, SweepVariable variable);

}  // namespace spinchain
