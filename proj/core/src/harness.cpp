#include "discrepancy/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "discrepancy/beck_fiala.hpp"
#include "discrepancy/errors.hpp"
#include "discrepancy/reduction.hpp"

namespace discrepancy::harness {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(10);
  os << v;
  return os.str();
}

void write_version_line(std::ostream& out, std::string_view kind) {
  out << "# discrepancy-csv v" << kCsvVersion << ' ' << kind << '\n';
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::size_t head_size_for(std::size_t m, double ratio) {
  return std::max<std::size_t>(default_head_size(m, ratio), 1);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::beck_fiala: return "beck-fiala";
    case Algorithm::phased: return "phased";
    case Algorithm::full: return "full";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "beck-fiala") return Algorithm::beck_fiala;
  if (name == "phased") return Algorithm::phased;
  if (name == "full") return Algorithm::full;
  throw InvalidParameter("unknown algorithm '" + std::string(name) +
                         "' (expected beck-fiala, phased or full)");
}

SolveReport run_solver(const SetSystem& sys, Seed seed, const RunOptions& opts) {
  PhaseConfig cfg = opts.cfg;
  cfg.seed = derive_seed(seed, 1);
  switch (opts.algorithm) {
    case Algorithm::beck_fiala: {
      SolveReport report;
      report.coloring = beck_fiala_color(sys);
      report.discrepancy_abs = discrepancy(sys, report.coloring);
      report.discrepancy_inf = report.discrepancy_abs;
      return report;
    }
    case Algorithm::phased: return solve(sys, cfg);
    case Algorithm::full:
      return solve_full(sys, cfg,
                        opts.k.value_or(default_head_size(sys.num_sets(), opts.head_constant)));
  }
  throw InvalidParameter("unknown algorithm");
}

SolveRow run_one(const SetSystem& sys, Seed seed, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const SolveReport report = run_solver(sys, seed, opts);
  const auto stop = std::chrono::steady_clock::now();

  SolveRow row;
  row.n = sys.num_elements();
  row.m = sys.num_sets();
  row.t = sys.degree();
  row.seed = seed;
  row.algorithm = opts.algorithm;
  row.c = opts.cfg.c;
  // Recomputed from the coloring rather than taken from the report.
  row.discrepancy = discrepancy(sys, report.coloring);
  row.fallback_used = report.fallback_used;
  row.abort_iteration = report.abort_iteration;
  row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  row.head_infeasible = report.head_infeasible;
  row.fallback_reason = report.fallback_reason;
  return row;
}

SolveRow run_one(std::size_t n, std::size_t m, std::size_t t, Seed seed, const RunOptions& opts) {
  return run_one(generate_random(n, m, t, seed), seed, opts);
}

void write_solve_csv(std::ostream& out, const std::vector<SolveRow>& rows, bool include_timing) {
  write_version_line(out, "solve");
  out << "n,m,t,seed,algorithm,c,discrepancy,fallback_used,abort_iteration,wall_ms\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.m << ',' << r.t << ',' << r.seed << ',' << to_string(r.algorithm) << ','
        << num(r.c) << ',' << num(r.discrepancy) << ',' << (r.fallback_used ? 1 : 0) << ',';
    if (r.abort_iteration) out << *r.abort_iteration;
    out << ',';
    if (include_timing) out << num(std::round(r.wall_ms * 1000.0) / 1000.0);
    out << '\n';
  }
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(count, 1));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

SweepResult run_sweep(const SweepGrid& grid) {
  struct Cell {
    std::size_t n, m, t;
    double c, head_constant;
  };
  std::vector<Cell> cells;
  for (std::size_t m : grid.m) {
    const std::vector<std::size_t> ns = grid.n.empty() ? std::vector<std::size_t>{m} : grid.n;
    for (std::size_t n : ns) {
      for (std::size_t t : grid.t) {
        for (double c : grid.c) {
          for (double hc : grid.head_constant) cells.push_back({n, m, t, c, hc});
        }
      }
    }
  }

  SweepResult result;
  result.rows.resize(cells.size() * grid.seeds);
  parallel_for(result.rows.size(), grid.jobs, [&](std::size_t index) {
    const std::size_t cell_index = index / grid.seeds;
    const std::size_t rep = index % grid.seeds;
    const Cell& cell = cells[cell_index];
    RunOptions opts = grid.base;
    opts.cfg.c = cell.c;
    opts.head_constant = cell.head_constant;
    const Seed seed = derive_seed(grid.master_seed, cell_index, rep);
    result.rows[index] = run_one(cell.n, cell.m, cell.t, seed, opts);
  });

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const Cell& cell = cells[ci];
    CellSummary s{cell.n, cell.m, cell.t, cell.c, cell.head_constant};
    std::vector<double> values;
    std::size_t aborts = 0, fallbacks = 0, infeasible = 0;
    for (std::size_t r = 0; r < grid.seeds; ++r) {
      const SolveRow& row = result.rows[ci * grid.seeds + r];
      values.push_back(row.discrepancy);
      aborts += row.abort_iteration ? 1 : 0;
      fallbacks += row.fallback_used ? 1 : 0;
      infeasible += row.head_infeasible ? 1 : 0;
    }
    s.runs = values.size();
    if (s.runs > 0) {
      const double runs = static_cast<double>(s.runs);
      s.mean = std::accumulate(values.begin(), values.end(), 0.0) / runs;
      s.max = *std::max_element(values.begin(), values.end());
      s.median = median_of(values);
      s.abort_rate = static_cast<double>(aborts) / runs;
      s.fallback_rate = static_cast<double>(fallbacks) / runs;
      s.head_infeasible_rate = static_cast<double>(infeasible) / runs;
    }
    s.median_over_sqrt_t = cell.t > 0 ? s.median / std::sqrt(static_cast<double>(cell.t)) : 0.0;
    result.summary.push_back(s);
  }
  return result;
}

void write_summary_csv(std::ostream& out, Algorithm algorithm,
                       const std::vector<CellSummary>& summary) {
  write_version_line(out, "summary");
  out << "n,m,t,algorithm,c,C_k,runs,mean,median,max,median_over_sqrt_t,abort_rate,"
         "fallback_rate,head_infeasible_rate\n";
  for (const auto& s : summary) {
    out << s.n << ',' << s.m << ',' << s.t << ',' << to_string(algorithm) << ',' << num(s.c) << ','
        << num(s.head_constant) << ',' << s.runs << ',' << num(s.mean) << ',' << num(s.median)
        << ',' << num(s.max) << ',' << num(s.median_over_sqrt_t) << ',' << num(s.abort_rate) << ','
        << num(s.fallback_rate) << ',' << num(s.head_infeasible_rate) << '\n';
  }
}

ContainmentSweepResult run_containment_sweep(const ContainmentGrid& grid) {
  struct Cell {
    std::size_t m, t;
    double ratio;
  };
  std::vector<Cell> cells;
  for (std::size_t m : grid.m) {
    for (std::size_t t : grid.t) {
      for (double ratio : grid.ratios) cells.push_back({m, t, ratio});
    }
  }

  ContainmentSweepResult result;
  result.rows.resize(cells.size() * grid.seeds);
  parallel_for(result.rows.size(), grid.jobs, [&](std::size_t index) {
    const std::size_t cell_index = index / grid.seeds;
    const std::size_t rep = index % grid.seeds;
    const Cell& cell = cells[cell_index];
    ContainmentRow row;
    row.m = cell.m;
    row.t = cell.t;
    row.ratio = cell.ratio;
    row.k = head_size_for(cell.m, cell.ratio);
    row.seed = derive_seed(grid.master_seed, cell_index, rep);
    const SetSystem sys = generate_random(grid.tail_factor * row.k, cell.m, cell.t, row.seed);
    row.contained = containment_check_exact(sys.slice(0, row.k).incidence(), cell.t, grid.tol);
    row.reduce_feasible = std::holds_alternative<ReductionResult>(reduce(sys, row.k, grid.tol));
    result.rows[index] = row;
  });

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    ContainmentSummary s;
    s.m = cells[ci].m;
    s.t = cells[ci].t;
    s.ratio = cells[ci].ratio;
    s.k = head_size_for(s.m, s.ratio);
    std::size_t contained = 0, feasible = 0;
    for (std::size_t r = 0; r < grid.seeds; ++r) {
      const auto& row = result.rows[ci * grid.seeds + r];
      contained += row.contained ? 1 : 0;
      feasible += row.reduce_feasible ? 1 : 0;
    }
    s.runs = grid.seeds;
    if (s.runs > 0) {
      s.contained_rate = static_cast<double>(contained) / static_cast<double>(s.runs);
      s.feasible_rate = static_cast<double>(feasible) / static_cast<double>(s.runs);
    }
    result.summary.push_back(s);
  }
  return result;
}

void write_containment_csv(std::ostream& out, const std::vector<ContainmentRow>& rows) {
  write_version_line(out, "containment");
  out << "m,t,ratio,k,seed,contained,reduce_feasible\n";
  for (const auto& r : rows) {
    out << r.m << ',' << r.t << ',' << num(r.ratio) << ',' << r.k << ',' << r.seed << ','
        << (r.contained ? 1 : 0) << ',' << (r.reduce_feasible ? 1 : 0) << '\n';
  }
}

void write_containment_summary_csv(std::ostream& out,
                                   const std::vector<ContainmentSummary>& summary) {
  write_version_line(out, "containment-summary");
  out << "m,t,ratio,k,runs,contained_rate,feasible_rate\n";
  for (const auto& s : summary) {
    out << s.m << ',' << s.t << ',' << num(s.ratio) << ',' << s.k << ',' << s.runs << ','
        << num(s.contained_rate) << ',' << num(s.feasible_rate) << '\n';
  }
}

CheckReport check_containment(const SetSystem& head, std::size_t t, std::size_t trials, Seed seed,
                              double tol, bool force_exact) {
  CheckReport report;
  report.m = head.num_sets();
  report.k = head.num_elements();
  report.t = t;
  const Eigen::MatrixXd a = head.incidence();
  if (force_exact || report.m <= kMaxContainmentRows) {
    const ContainmentVerdict verdict = containment_check_detailed(a, t, tol);
    report.exact = true;
    report.contained = verdict.contained;
    report.min_dual_norm =
        verdict.contained ? dual_condition_sample(a, t, trials, seed).min_norm : verdict.dual_norm;
    return report;
  }
  const DualSample sample = dual_condition_sample(a, t, trials, seed);
  report.exact = false;
  report.contained = !sample.certifies_failure;
  report.min_dual_norm = sample.min_norm;
  return report;
}

void write_check_report(std::ostream& out, const CheckReport& report) {
  out << "CONTAINED=" << (report.contained ? "true" : "false") << '\n';
  out << "METHOD=" << (report.exact ? "exact" : "sampled") << '\n';
  out << "VERDICT=" << (report.exact || !report.contained ? "certified" : "evidence-only") << '\n';
  out << "m=" << report.m << " k=" << report.k << " t=" << report.t
      << " min_dual_l1=" << num(report.min_dual_norm) << '\n';
}

}  // namespace discrepancy::harness
