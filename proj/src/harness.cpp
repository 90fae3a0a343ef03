#include "spinchain/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "spinchain/errors.hpp"

namespace spinchain {

double unwanted_probability(const StateVector& state) {
  const int L = state.length();
  if (L < 2) throw InputError("unwanted_probability needs at least 2 spins");
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw IntegrityError("state norm " + std::to_string(norm) + " deviates from 1");
  }
  const std::size_t ground = 0;
  const std::size_t target = basis_from_spins({L - 1, 0}).bits();
  // Summing the unwanted populations directly keeps small values accurate.
  double p = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i != ground && i != target) p += std::norm(amps[i]);
  }
  return std::min(p, 1.0);
}

void SweepSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
    throw InputError("sweep needs finite start < stop");
  }
  if (points < 2) throw InputError("sweep needs at least 2 points");
  if (spacing == Spacing::log && !(start > 0.0)) throw InputError("log spacing needs start > 0");
  if (workers < 1) throw InputError("workers must be positive");
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
  if (variable == SweepVariable::rabi && two_pi_k) {
    throw InputError("a Rabi sweep cannot fix the Rabi frequency through two_pi_k");
  }
  ChainParams probe{length, coupling, variable == SweepVariable::gradient ? start : gradient, omega0};
  probe.validate();
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> grid(static_cast<std::size_t>(spec.points));
  const double last = spec.points - 1;
  for (int i = 0; i < spec.points; ++i) {
    const double f = i / last;
    grid[static_cast<std::size_t>(i)] =
        spec.spacing == Spacing::linear ? spec.start + f * (spec.stop - spec.start)
                                        : spec.start * std::pow(spec.stop / spec.start, f);
  }
  grid.front() = spec.start;
  grid.back() = spec.stop;
  return grid;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void append_error(ResultRow& row, const std::string& method, const std::exception& e) {
  if (!row.error.empty()) row.error += "; ";
  row.error += method + ": " + e.what();
}

template <class F>
void for_each_index(std::size_t count, int workers, F&& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  for (std::size_t w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

ResultRow evaluate_point(const PointSpec& point) {
  ResultRow row;
  const ChainParams& params = point.params;
  params.validate();
  row.epsilon = default_epsilon(point.rabi, params.coupling);
  row.mu_end = mu(params.length - 1, point.rabi, params.gradient, params.length);

  if (point.methods.exact || point.methods.blocked) {
    std::optional<PulseSequence> seq;
    try {
      seq = build_remote_cn_sequence(params, point.rabi, point.phase);
    } catch (const Error& e) {
      append_error(row, "protocol", e);
    }
    if (seq && point.methods.exact) {
      try {
        const auto t0 = Clock::now();
        const StateVector out = run_sequence(BasisState::ground(), *seq, Method::exact,
                                             ExactOptions{point.tolerance});
        row.p_exact = unwanted_probability(out);
        if (point.record_timings) row.runtime_exact_ms = elapsed_ms(t0);
      } catch (const Error& e) {
        append_error(row, "exact", e);
      }
    }
    if (seq && point.methods.blocked) {
      try {
        const auto t0 = Clock::now();
        const StateVector out = run_sequence(BasisState::ground(), *seq, Method::blocked);
        row.p_blocked = unwanted_probability(out);
        if (point.record_timings) row.runtime_blocked_ms = elapsed_ms(t0);
      } catch (const Error& e) {
        append_error(row, "blocked", e);
      }
    }
  }
  if (point.methods.analytic) {
    try {
      row.p_analytic =
          gate_success_estimate(params.length, point.rabi, params.gradient, params.coupling)
              .p_unwanted;
    } catch (const Error& e) {
      append_error(row, "analytic", e);
    }
  }
  return row;
}

namespace {

std::vector<ResultRow> run_grid(const SweepSpec& spec) {
  const std::vector<double> grid = sweep_grid(spec);
  std::vector<ResultRow> rows(grid.size());
  const double fixed_rabi =
      spec.two_pi_k ? two_pi_k_rabi(2.0 * spec.coupling, *spec.two_pi_k) : spec.rabi;

  for_each_index(grid.size(), spec.workers, [&](std::size_t i) {
    const double value = grid[i];
    PointSpec point;
    point.params = ChainParams{spec.length, spec.coupling,
                               spec.variable == SweepVariable::gradient ? value : spec.gradient,
                               spec.omega0};
    point.rabi = spec.variable == SweepVariable::rabi ? value : fixed_rabi;
    point.phase = spec.phase;
    point.methods = spec.methods;
    point.tolerance = spec.tolerance;
    point.record_timings = spec.record_timings;
    ResultRow row;
    try {
      row = evaluate_point(point);
    } catch (const Error& e) {
      append_error(row, "point", e);
    }
    row.variable = spec.variable;
    row.value = value;
    rows[i] = std::move(row);
  });

  if (spec.variable == SweepVariable::rabi) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double left = i > 0 ? grid[i] - grid[i - 1] : grid[i + 1] - grid[i];
      const double right = i + 1 < grid.size() ? grid[i + 1] - grid[i] : left;
      const double half_step = 0.25 * (left + right);
      for (int k = 1; k <= 16; ++k) {
        if (std::abs(grid[i] - two_pi_k_rabi(2.0 * spec.coupling, k)) <= half_step) {
          rows[i].near_two_pi_k = k;
          break;
        }
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> sweep_gradient(const SweepSpec& spec) {
  if (spec.variable != SweepVariable::gradient) throw InputError("sweep_gradient needs a gradient sweep");
  return run_grid(spec);
}

std::vector<ResultRow> sweep_rabi(const SweepSpec& spec) {
  if (spec.variable != SweepVariable::rabi) throw InputError("sweep_rabi needs a Rabi sweep");
  return run_grid(spec);
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  return spec.variable == SweepVariable::gradient ? sweep_gradient(spec) : sweep_rabi(spec);
}

ErrorBudget estimate_large_chain(int length, double rabi, double gradient, double coupling) {
  return gate_success_estimate(length, rabi, gradient, coupling);
}

void emit_csv(std::span<const ResultRow> rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  char buf[64];
  auto num = [&](std::optional<double> v) {
    os << ',';
    if (v) {
      std::snprintf(buf, sizeof buf, "%.17e", *v);
      os << buf;
    }
  };
  for (const auto& r : rows) {
    os << (r.variable == SweepVariable::gradient ? "gradient" : "rabi");
    num(r.value);
    num(r.p_exact);
    num(r.p_blocked);
    num(r.p_analytic);
    num(r.epsilon);
    num(r.mu_end);
    num(r.runtime_exact_ms);
    num(r.runtime_blocked_ms);
    os << '\n';
  }
}

void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  emit_csv(rows, out);
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

void write_gnuplot_script(std::ostream& os, const std::string& csv_path, SweepVariable variable) {
  const bool gradient = variable == SweepVariable::gradient;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set logscale y\n"
     << (gradient ? "set logscale x\nset xlabel 'gradient'\n" : "set xlabel 'rabi'\n")
     << "set ylabel 'unwanted probability'\n"
     << "plot '" << csv_path << "' using 2:3 with linespoints pt 7 title 'exact', \\\n"
     << "     '' using 2:4 with lines title 'blocked', \\\n"
     << "     '' using 2:5 with lines dt 2 title 'analytic'\n";
}

}  // namespace spinchain
