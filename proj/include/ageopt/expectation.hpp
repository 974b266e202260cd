#pragma once

#include <cstdint>
#include <span>

#include "ageopt/penalty.hpp"
#include "ageopt/service.hpp"

namespace ageopt {

enum class TimeMode { Continuous, Discrete };

// Evaluates the service-time expectations the solver needs. Finite-support
// laws are enumerated exactly (product measure over consecutive cycles);
// everything else uses one pre-drawn pool of (Y, Y') pairs shared by every
// threshold candidate, so objective comparisons across candidates see common
// random numbers. Immutable after construction and safe to share read-only.
class ExpectationEngine {
 public:
  ExpectationEngine(const ServiceDist& dist, TimeMode mode, std::size_t pool_size,
                    std::uint64_t seed);

  bool exact() const { return exact_; }
  TimeMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  const ServiceDist& dist() const { return dist_; }

  // E[p(delta + Y')] over the successor-service marginal
  double expected_after(const PenaltyFn& p, double delta) const;
  // same, but with p evaluated as a left limit (used by the discrete
  // zero-wait boundary test)
  double expected_after_left(const PenaltyFn& p, double delta) const;

  double successor_mean() const { return succ_mean_; }  // E[Y']
  double first_mean() const { return first_mean_; }     // E[Y] under the pair measure
  // underlying Monte Carlo draws behind the pair measure; 0 when exact
  std::size_t sample_count() const { return sample_count_; }

  // paired measure; weights sum to 1
  std::span<const double> pair_y() const { return pair_y_; }
  std::span<const double> pair_y2() const { return pair_y2_; }
  std::span<const double> pair_w() const { return pair_w_; }

 private:
  ServiceDist dist_;
  TimeMode mode_;
  std::uint64_t seed_;
  bool exact_;
  std::size_t sample_count_ = 0;
  double succ_mean_ = 0.0;
  double first_mean_ = 0.0;
  std::vector<double> succ_vals_, succ_probs_;
  std::vector<double> pair_y_, pair_y2_, pair_w_;
};

// E[p(delta + Y')] with a finiteness guard; throws NumericError if the
// expectation fails to be finite under the engine's measure.
double expected_penalty_after_service(const PenaltyFn& p, const ExpectationEngine& ev,
                                      double delta);

}  // namespace ageopt
