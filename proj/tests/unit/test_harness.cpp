#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "discrepancy/errors.hpp"
#include "discrepancy/harness.hpp"
#include "discrepancy/set_system.hpp"

using namespace discrepancy;
using namespace discrepancy::harness;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

SweepGrid small_grid(std::size_t jobs) {
  SweepGrid grid;
  grid.m = {64, 128};
  grid.t = {4, 9, 16};
  grid.seeds = 20;
  grid.master_seed = 7;
  grid.base.algorithm = Algorithm::beck_fiala;
  grid.jobs = jobs;
  return grid;
}

}  // namespace

TEST(Algorithms, NamesRoundTrip) {
  for (Algorithm a : {Algorithm::beck_fiala, Algorithm::phased, Algorithm::full}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  EXPECT_EQ(to_string(Algorithm::beck_fiala), "beck-fiala");
  EXPECT_THROW(parse_algorithm("simplex"), InvalidParameter);
}

TEST(SolveCsv, VersionLineHeaderAndRow) {
  SolveRow row;
  row.n = 10;
  row.m = 4;
  row.t = 2;
  row.seed = 3;
  row.algorithm = Algorithm::phased;
  row.c = 96;
  row.discrepancy = 2;
  row.fallback_used = true;
  row.abort_iteration = 1;
  row.wall_ms = 1.23456;
  std::ostringstream out;
  write_solve_csv(out, {row});
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "# discrepancy-csv v1 solve");
  EXPECT_EQ(lines[1], "n,m,t,seed,algorithm,c,discrepancy,fallback_used,abort_iteration,wall_ms");
  EXPECT_EQ(lines[2], "10,4,2,3,phased,96,2,1,1,1.235");

  std::ostringstream untimed;
  row.abort_iteration.reset();
  write_solve_csv(untimed, {row}, false);
  EXPECT_EQ(lines_of(untimed.str())[2], "10,4,2,3,phased,96,2,1,,");
}

TEST(RunOne, SolverSeedFollowsInstanceSeed) {
  RunOptions opts;
  const SolveRow generated = run_one(64, 32, 4, 21, opts);
  const SolveRow from_system = run_one(generate_random(64, 32, 4, 21), 21, opts);
  EXPECT_EQ(generated.discrepancy, from_system.discrepancy);
  EXPECT_EQ(generated.fallback_used, from_system.fallback_used);
}

TEST(RunOne, BeckFialaRowStaysUnderCeiling) {
  RunOptions opts;
  opts.algorithm = Algorithm::beck_fiala;
  const SolveRow row = run_one(200, 30, 6, 2, opts);
  EXPECT_LE(row.discrepancy, 11.0);
  EXPECT_FALSE(row.fallback_used);
}

TEST(Sweep, RowAndSummaryCounts) {
  const SweepResult result = run_sweep(small_grid(1));
  EXPECT_EQ(result.rows.size(), 120u);
  ASSERT_EQ(result.summary.size(), 6u);
  std::ostringstream summary;
  write_summary_csv(summary, Algorithm::beck_fiala, result.summary);
  const auto lines = lines_of(summary.str());
  ASSERT_EQ(lines.size(), 8u);
  EXPECT_NE(lines[1].find("median_over_sqrt_t"), std::string::npos);
  for (const auto& s : result.summary) {
    EXPECT_EQ(s.runs, 20u);
    EXPECT_EQ(s.n, s.m);
    EXPECT_DOUBLE_EQ(s.median_over_sqrt_t, s.median / std::sqrt(static_cast<double>(s.t)));
    EXPECT_LE(s.max, 2.0 * static_cast<double>(s.t) - 1.0);
  }
}

TEST(Sweep, WorkerCountDoesNotChangeOutput) {
  std::ostringstream one, three;
  write_solve_csv(one, run_sweep(small_grid(1)).rows, false);
  write_solve_csv(three, run_sweep(small_grid(3)).rows, false);
  EXPECT_EQ(one.str(), three.str());
}

TEST(ContainmentSweep, RowsAndRates) {
  ContainmentGrid grid;
  grid.m = {4};
  grid.t = {1};
  grid.ratios = {0.5, 4.0};
  grid.seeds = 5;
  const auto result = run_containment_sweep(grid);
  ASSERT_EQ(result.rows.size(), 10u);
  ASSERT_EQ(result.summary.size(), 2u);
  EXPECT_LT(result.summary[0].k, result.summary[1].k);
  for (const auto& row : result.rows) {
    // Containment means every b with |b| <= 2t is absorbed, and the tail's b is such a b.
    if (row.contained) EXPECT_TRUE(row.reduce_feasible);
  }
  std::ostringstream out;
  write_containment_csv(out, result.rows);
  EXPECT_EQ(lines_of(out.str())[0], "# discrepancy-csv v1 containment");
}

TEST(Check, RoutesByRowCount) {
  const SetSystem small(1, 1, {{0}, {0}});
  const CheckReport exact = check_containment(small, 1, 100, 0);
  EXPECT_TRUE(exact.exact);
  EXPECT_TRUE(exact.contained);

  const SetSystem wide = generate_random(400, 20, 3, 1);
  const CheckReport sampled = check_containment(wide, 3, 200, 0);
  EXPECT_FALSE(sampled.exact);
  std::ostringstream out;
  write_check_report(out, sampled);
  const std::string text = out.str();
  EXPECT_NE(text.find("METHOD=sampled"), std::string::npos);
  if (sampled.contained) EXPECT_NE(text.find("VERDICT=evidence-only"), std::string::npos);
}

TEST(ParallelFor, RunsEveryIndexAndRethrows) {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 6) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
