// Command-line front end: generate instances, run solvers, sweep grids and
// check head containment. Exit codes: 0 ok, 1 usage, 2 solver breakdown,
// 3 capacity.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "discrepancy/errors.hpp"
#include "discrepancy/harness.hpp"
#include "discrepancy/phased_solver.hpp"
#include "discrepancy/reduction.hpp"
#include "discrepancy/set_system.hpp"

namespace dh = discrepancy::harness;
using discrepancy::SetSystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitBreakdown = 2;
constexpr int kExitCapacity = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to the named file, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw UsageError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

SetSystem load_system(const std::string& path) {
  if (path == "-") return SetSystem::read(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return SetSystem::read(in);
}

struct SolverFlags {
  std::string algorithm = "phased";
  double c = discrepancy::PhaseConfig{}.c;
  double delta = 0.0;
  double tol = 1e-8;
  double head_constant = 4.0;
  std::optional<std::size_t> k;
  std::optional<double> step_size;
  std::optional<std::size_t> steps;
  std::size_t max_restarts = 10;
  bool no_ceiling_guard = false;

  // Sweeps take --c and --C-k as lists and register those themselves.
  void attach(CLI::App* cmd, bool scalar_grid_flags) {
    cmd->add_option("--algorithm", algorithm, "beck-fiala | phased | full")
        ->check(CLI::IsMember({"beck-fiala", "phased", "full"}));
    if (scalar_grid_flags) {
      cmd->add_option("--c", c, "phased budget constant");
      cmd->add_option("--C-k", head_constant, "head size constant: k = ceil(C m ln^2 m)");
    }
    cmd->add_option("--delta", delta, "freeze threshold (<= 0: 1/n)");
    cmd->add_option("--tol", tol, "numeric tolerance");
    cmd->add_option("--k", k, "head size for --algorithm full");
    cmd->add_option("--step-size", step_size, "edge-walk step size gamma");
    cmd->add_option("--steps", steps, "edge-walk step cap T");
    cmd->add_option("--max-restarts", max_restarts, "partial coloring restarts per iteration");
    cmd->add_flag("--no-ceiling-guard", no_ceiling_guard, "keep phased output even above 2t - 1");
  }

  dh::RunOptions options() const {
    dh::RunOptions opts;
    opts.algorithm = dh::parse_algorithm(algorithm);
    opts.cfg.c = c;
    opts.cfg.delta = delta;
    opts.cfg.tol = tol;
    if (step_size) opts.cfg.step_size = step_size;
    opts.cfg.step_count = steps;
    opts.cfg.max_restarts_per_iteration = max_restarts;
    opts.cfg.ceiling_guard = !no_ceiling_guard;
    opts.k = k;
    opts.head_constant = head_constant;
    opts.cfg.validate();
    return opts;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrepancy minimization for random t-regular set systems"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults");

  // generate
  auto* gen = app.add_subcommand("generate", "write a random t-regular set system");
  std::size_t gen_n = 0, gen_m = 0, gen_t = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "elements")->required();
  gen->add_option("--m", gen_m, "sets")->required();
  gen->add_option("--t", gen_t, "sets per element")->required();
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  // solve
  auto* sol = app.add_subcommand("solve", "color one instance and print a CSV row");
  std::string sol_in, sol_out;
  std::optional<std::size_t> sol_n, sol_m, sol_t;
  std::uint64_t sol_seed = 0;
  bool sol_no_timing = false;
  SolverFlags sol_flags;
  sol->add_option("--in", sol_in, "set-system file ('-' for stdin)");
  sol->add_option("--n", sol_n, "elements (generate instead of --in)");
  sol->add_option("--m", sol_m, "sets");
  sol->add_option("--t", sol_t, "sets per element");
  sol->add_option("--seed", sol_seed, "instance and solver seed");
  sol->add_option("--out", sol_out, "CSV path (default stdout)");
  sol->add_flag("--no-timing", sol_no_timing, "leave wall_ms empty");
  sol_flags.attach(sol, true);

  // sweep
  auto* swp = app.add_subcommand("sweep", "run a seeded grid and write rows plus a summary");
  std::vector<std::size_t> swp_n, swp_m, swp_t;
  std::vector<double> swp_c{discrepancy::PhaseConfig{}.c}, swp_ck{4.0}, swp_ratio{0.5, 1, 2, 4};
  std::size_t swp_seeds = 20, swp_jobs = 1, swp_tail = 4;
  std::uint64_t swp_seed = 0;
  std::string swp_out, swp_summary;
  bool swp_no_timing = false, swp_containment = false;
  SolverFlags swp_flags;
  swp->add_option("--n", swp_n, "element counts (default n = m)")->delimiter(',');
  swp->add_option("--m", swp_m, "set counts")->delimiter(',')->required();
  swp->add_option("--t", swp_t, "degrees")->delimiter(',')->required();
  swp->add_option("--c", swp_c, "budget constants")->delimiter(',');
  swp->add_option("--C-k", swp_ck, "head size constants")->delimiter(',');
  swp->add_option("--seeds", swp_seeds, "runs per cell");
  swp->add_option("--seed", swp_seed, "master seed");
  swp->add_option("--jobs", swp_jobs, "worker threads (0: all cores)");
  swp->add_option("--out", swp_out, "row CSV path (default stdout)");
  swp->add_option("--summary", swp_summary, "summary CSV path (default <out>.summary.csv)");
  swp->add_flag("--no-timing", swp_no_timing, "leave wall_ms empty");
  swp->add_flag("--containment", swp_containment,
                "containment/reduce feasibility sweep over --m, --t, --ratio");
  swp->add_option("--ratio", swp_ratio, "k / (m ln^2 m) values for --containment")->delimiter(',');
  swp->add_option("--tail-factor", swp_tail, "n = tail_factor * k for --containment");
  swp_flags.attach(swp, false);

  // check
  auto* chk = app.add_subcommand("check", "is 2t B_inf^m inside the head's discrepancy polytope?");
  std::string chk_in;
  std::optional<std::size_t> chk_t;
  std::size_t chk_trials = 2000;
  std::uint64_t chk_seed = 0;
  double chk_tol = 1e-8;
  bool chk_exact = false;
  chk->add_option("--in", chk_in, "head set-system file")->required();
  chk->add_option("--t", chk_t, "radius parameter (default: the file's degree)");
  chk->add_option("--trials", chk_trials, "dual samples");
  chk->add_option("--seed", chk_seed, "sampler seed");
  chk->add_option("--tol", chk_tol, "LP tolerance");
  chk->add_flag("--exact", chk_exact, "always enumerate vertices (capacity error above m = 16)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const SetSystem sys = discrepancy::generate_random(gen_n, gen_m, gen_t, gen_seed);
      Output out(gen_out);
      sys.write(out.stream());
    } else if (*sol) {
      SetSystem sys;
      if (!sol_in.empty()) {
        if (sol_n || sol_m || sol_t) throw UsageError("give either --in or --n/--m/--t");
        sys = load_system(sol_in);
      } else {
        if (!sol_n || !sol_m || !sol_t) throw UsageError("solve needs --in or all of --n --m --t");
        sys = discrepancy::generate_random(*sol_n, *sol_m, *sol_t, sol_seed);
      }
      const dh::RunOptions opts = sol_flags.options();
      const dh::SolveRow row = dh::run_one(sys, sol_seed, opts);
      std::cerr << "algorithm=" << dh::to_string(row.algorithm) << " n=" << row.n << " m=" << row.m
                << " t=" << row.t << " discrepancy=" << row.discrepancy
                << " fallback=" << (row.fallback_used ? "yes" : "no") << " ("
                << discrepancy::to_string(row.fallback_reason) << ")\n";
      Output out(sol_out);
      dh::write_solve_csv(out.stream(), {row}, !sol_no_timing);
    } else if (*swp) {
      std::string summary_path = swp_summary;
      if (summary_path.empty() && !swp_out.empty() && swp_out != "-") {
        summary_path = swp_out + ".summary.csv";
      }
      if (swp_containment) {
        dh::ContainmentGrid grid;
        grid.m = swp_m;
        grid.t = swp_t;
        grid.ratios = swp_ratio;
        grid.seeds = swp_seeds;
        grid.master_seed = swp_seed;
        grid.tail_factor = swp_tail;
        grid.tol = swp_flags.tol;
        grid.jobs = swp_jobs;
        const auto result = dh::run_containment_sweep(grid);
        Output out(swp_out);
        dh::write_containment_csv(out.stream(), result.rows);
        Output summary(summary_path);
        dh::write_containment_summary_csv(summary.stream(), result.summary);
      } else {
        dh::SweepGrid grid;
        grid.n = swp_n;
        grid.m = swp_m;
        grid.t = swp_t;
        grid.c = swp_c;
        grid.head_constant = swp_ck;
        grid.seeds = swp_seeds;
        grid.master_seed = swp_seed;
        grid.base = swp_flags.options();
        grid.jobs = swp_jobs;
        const auto result = dh::run_sweep(grid);
        Output out(swp_out);
        dh::write_solve_csv(out.stream(), result.rows, !swp_no_timing);
        Output summary(summary_path);
        dh::write_summary_csv(summary.stream(), grid.base.algorithm, result.summary);
      }
    } else if (*chk) {
      const SetSystem head = load_system(chk_in);
      const auto report = dh::check_containment(head, chk_t.value_or(head.degree()), chk_trials,
                                                chk_seed, chk_tol, chk_exact);
      dh::write_check_report(std::cout, report);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const discrepancy::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const discrepancy::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "solver breakdown: " << e.what() << '\n';
    return kExitBreakdown;
  }
  return 0;
}
