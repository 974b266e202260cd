#pragma once

#include <cstdint>
#include <vector>

#include "ageopt/expectation.hpp"
#include "ageopt/penalty.hpp"
#include "ageopt/service.hpp"

namespace ageopt {

// Deterministic stationary policy for a finite discrete service law: one
// integer waiting time per support value.
struct WaitingMap {
  std::vector<double> support;   // sorted service values
  std::vector<std::int64_t> z;   // waiting after a delivery whose service was support[j]

  friend bool operator==(const WaitingMap&, const WaitingMap&) = default;
};

// Long-run average penalty of a waiting map, by exact enumeration over
// consecutive service pairs.
double exact_objective(const WaitingMap& map, const PenaltyFn& p, const ServiceDist& dist);

// Expected sampling interval E[Y + z(Y)] of a waiting map.
double exact_interval(const WaitingMap& map, const ServiceDist& dist);

struct BruteForceResult {
  WaitingMap best;
  double objective = 0.0;
  std::int64_t evaluated = 0;
};

// Exhaustive search over all maps with waiting in [0, z_cap], lexicographically
// first among ties. Refuses searches costing more than `budget` evaluations
// (|support| * (z_cap+1)^|support|).
BruteForceResult brute_force_discrete(const PenaltyFn& p, const ServiceDist& dist,
                                      std::int64_t z_cap, std::int64_t budget = 10000000);

// All candidate maps, smallest first; test helper for small searches.
std::vector<WaitingMap> enumerate_waiting_maps(const ServiceDist& dist, std::int64_t z_cap,
                                               std::int64_t budget = 10000000);

struct GridPoint {
  double level = 0.0;
  double objective = 0.0;
};

struct GridSearchResult {
  double best_level = 0.0;
  double best_objective = 0.0;
  std::vector<GridPoint> points;
};

// Objective of the water-filling rule z = max(level - y, 0) on a grid of
// levels, under the engine's measure; independent check of the bisection.
GridSearchResult grid_search_water_level(const PenaltyFn& p, const ExpectationEngine& ev,
                                         const std::vector<double>& levels);

}  // namespace ageopt
