#pragma once

#include <cstdint>
#include <vector>

#include "ageopt/penalty.hpp"
#include "ageopt/policy.hpp"
#include "ageopt/service.hpp"

namespace ageopt {

// One sampling cycle: sample i taken at S, queued for Z relative to the
// previous delivery (negative means it arrived while the server was busy),
// served for Y, delivered at D.
struct TrajectoryRecord {
  std::int64_t i = 0;
  double S = 0.0;
  double Z = 0.0;
  double Y = 0.0;
  double D = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  TimeMode mode = TimeMode::Continuous;
  double horizon = 0.0;
  double initial_age = 0.0;
  std::uint64_t seed = 0;
};

struct SimResult {
  Trajectory trajectory;
  double avg_penalty = 0.0;
  double avg_interval = 0.0;
  double se = 0.0;             // batch-means standard error of avg_penalty
  std::int64_t cycles = 0;     // delivery cycles inside the measured window
  bool low_cycle_warning = false;
  std::uint64_t seed = 0;
};

struct RenewalResult {
  double avg_penalty = 0.0;
  double avg_interval = 0.0;
  double se = 0.0;
  std::int64_t cycles = 0;
  std::uint64_t seed = 0;
};

// Run the FIFO source-queue-receiver loop under `pol` until the next sample
// would pass `horizon`. Averages discard the first 1% of delivery cycles as
// transient and come with a batch-means standard error; fewer than 100
// measured cycles sets low_cycle_warning.
SimResult simulate(const Policy& pol, const ServiceDist& dist, const PenaltyFn& p,
                   double horizon, std::uint64_t seed, TimeMode mode,
                   double initial_age = 0.0);

// Cycle-by-cycle renewal-reward estimate for policies that never queue
// (threshold and zero-wait; uniform is rejected). Tighter than a full
// trajectory for the same budget since cycles are drawn independently.
RenewalResult renewal_average(const Policy& pol, const ServiceDist& dist,
                              const PenaltyFn& p, std::int64_t n_cycles,
                              std::uint64_t seed, TimeMode mode);

// Age at time t under the recorded trajectory: t minus the sampling time of
// the newest delivered sample, or initial_age + t before the first delivery.
double age_process(const Trajectory& traj, double t);

}  // namespace ageopt
