#pragma once

#include <cstdint>
#include <limits>

#include "ageopt/expectation.hpp"
#include "ageopt/penalty.hpp"
#include "ageopt/policy.hpp"
#include "ageopt/service.hpp"

namespace ageopt {

struct SolveConfig {
  double f_max = std::numeric_limits<double>::infinity();  // max sampling rate
  TimeMode mode = TimeMode::Continuous;
  double eps = 0.0;  // bisection tolerance; <= 0 picks 1e-9 exact / 1e-6 Monte Carlo
  std::size_t pool_size = 100000;
  std::uint64_t seed = 1;
};

// Per-cycle expectations of the threshold rule at a given beta. A cycle runs
// from one delivery to the next: realized service y, waiting z by rule, then
// the successor service y'.
struct CycleStats {
  double mean_penalty = 0.0;   // E[ penalty mass of one cycle ], >= rule
  double mean_length = 0.0;    // E[ y + z ], >= rule: shortest admissible interval
  double interval_max = 0.0;   // E[ y + z ], strict rule: longest admissible interval
};

// Cycle averages for a fixed water level (z = max(level - y, 0)).
struct CycleAverages {
  double mean_penalty = 0.0;
  double mean_length = 0.0;
};

struct SolveResult {
  ThresholdPolicy policy;
  double p_opt = 0.0;        // optimal long-run average penalty
  double alpha = 0.0;        // beta - p_opt; > 0 only when the rate cap binds
  bool constrained_active = false;
  double expected_interval = 0.0;
  int iterations = 0;
  double residual = 0.0;     // closing defect of the final fixed point
  double objective_se = 0.0; // Monte Carlo standard error of p_opt; 0 when exact
  std::uint64_t seed = 0;
};

struct ZeroWaitReport {
  bool optimal = false;
  double lhs = 0.0;  // expected penalty right after the earliest possible delivery
  double rhs = 0.0;  // zero-wait long-run average penalty
};

CycleAverages cycle_averages_at_level(const PenaltyFn& p, const ExpectationEngine& ev,
                                      double level);

CycleStats cycle_stats(const PenaltyFn& p, const ExpectationEngine& ev, double beta,
                       double tol = 1e-9);

// Root-find the unconstrained fixed point: the unique beta with
// beta == E[cycle penalty] / E[cycle length] under the beta-threshold rule.
SolveResult bisect_unconstrained(const PenaltyFn& p, const ExpectationEngine& ev,
                                 double eps);

// Rate-capped variant: raise beta until the expected sampling interval
// reaches 1/f_max, mixing the two adjacent threshold rules (eps/2-relaxed)
// to land on the cap exactly.
SolveResult bisect_constrained(const PenaltyFn& p, const ExpectationEngine& ev,
                               double f_max, double eps, const SolveResult& unconstrained);

SolveResult solve(const PenaltyFn& p, const ServiceDist& dist, const SolveConfig& cfg);

// Whether sampling immediately on every delivery is already optimal.
ZeroWaitReport zero_wait_check(const PenaltyFn& p, const ServiceDist& dist,
                               const ExpectationEngine& ev);

// h(c) = E[cycle penalty - c * cycle length] minimized over waiting; shares
// its sign with (p_opt - c) and vanishes at the optimum.
double dinkelbach_gap(double c, const PenaltyFn& p, const ExpectationEngine& ev);

}  // namespace ageopt
