#pragma once

#include <utility>
#include <variant>

#include "ageopt/expectation.hpp"
#include "ageopt/penalty.hpp"

namespace ageopt {

// Smallest age level w with E[p(w + Y')] >= beta (or > beta when strict).
// Continuous mode bisects to `tol`; discrete mode finds the exact integer.
// Brackets grow by doubling and give up past 2^40 with a diagnostic, which
// only triggers when beta exceeds the penalty's reachable expectation (e.g.
// a flat penalty under a binding rate constraint).
double water_level(const PenaltyFn& p, const ExpectationEngine& ev, double beta,
                   bool strict, double tol = 1e-9);

// Definitional waiting bounds for one realized service time y: the least
// t >= 0 with E[p(y + t + Y')] >= beta (resp. > beta). Equivalent to
// max(water_level - y, 0); kept as an independent route for cross-checks.
std::pair<double, double> waiting_bounds_direct(const PenaltyFn& p,
                                                const ExpectationEngine& ev, double y,
                                                double beta, double tol = 1e-9);

// Stationary randomized threshold policy. After a delivery with age y the
// sampler waits max(water_min - y, 0) with probability lambda, else
// max(water_max - y, 0). Unconstrained optima are deterministic
// (water_min == water_max, lambda == 1); rate-constrained optima mix two
// adjacent levels so the average sampling interval lands on 1/f_max.
struct ThresholdPolicy {
  double beta = 0.0;
  double alpha = 0.0;
  double lambda = 1.0;
  double water_min = 0.0;
  double water_max = 0.0;
  TimeMode mode = TimeMode::Continuous;

  double waiting_time(double y, double coin) const {
    double z_lo = water_min > y ? water_min - y : 0.0;
    if (lambda >= 1.0) return z_lo;
    if (coin < lambda) return z_lo;
    return water_max > y ? water_max - y : 0.0;
  }
};

// Deterministic threshold policy at a given beta (always the water_min rule).
ThresholdPolicy threshold_policy_at(const PenaltyFn& p, const ExpectationEngine& ev,
                                    double beta, double tol = 1e-9);

struct ZeroWaitPolicy {};
struct UniformPolicy { double period = 1.0; };

using Policy = std::variant<ZeroWaitPolicy, UniformPolicy, ThresholdPolicy>;

// Next sampling instant given the previous sample and delivery times. The
// coin drives randomized thresholds; zero-wait and uniform ignore it. Uniform
// sampling may land before prev_delivery (the sample then queues).
double next_sample_time(const Policy& pol, double prev_sample, double prev_delivery,
                        double coin);

}  // namespace ageopt
