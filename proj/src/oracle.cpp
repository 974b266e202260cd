#include "ageopt/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "ageopt/numeric.hpp"
#include "ageopt/optimizer.hpp"

namespace ageopt {

namespace {

void check_enumerable(const ServiceDist& dist) {
  if (!dist.finite_support() || !dist.is_discrete())
    throw std::invalid_argument("oracle needs a finite integer-valued service law");
}

void check_map(const WaitingMap& map, const ServiceDist& dist) {
  if (map.support != dist.support())
    throw std::invalid_argument("waiting map support does not match the service law");
  if (map.z.size() != map.support.size())
    throw std::invalid_argument("waiting map needs one waiting time per support value");
  for (std::int64_t z : map.z)
    if (z < 0) throw std::invalid_argument("waiting times must be >= 0");
}

}  // namespace

double exact_objective(const WaitingMap& map, const PenaltyFn& p, const ServiceDist& dist) {
  check_enumerable(dist);
  check_map(map, dist);
  PenaltyPrefixSums sums(p);
  const auto& ys = dist.support();
  const auto& pr = dist.probs();
  KahanSum pen, len;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    std::int64_t y = std::llround(ys[i]);
    std::int64_t z = map.z[i];
    len.add(pr[i] * double(y + z));
    for (std::size_t j = 0; j < ys.size(); ++j) {
      std::int64_t y2 = std::llround(ys[j]);
      pen.add(pr[i] * pr[j] * sums.sum_range(y, y + z + y2));
    }
  }
  return pen.value() / len.value();
}

double exact_interval(const WaitingMap& map, const ServiceDist& dist) {
  check_enumerable(dist);
  check_map(map, dist);
  KahanSum len;
  for (std::size_t i = 0; i < map.support.size(); ++i)
    len.add(dist.probs()[i] * (map.support[i] + double(map.z[i])));
  return len.value();
}

BruteForceResult brute_force_discrete(const PenaltyFn& p, const ServiceDist& dist,
                                      std::int64_t z_cap, std::int64_t budget) {
  check_enumerable(dist);
  if (z_cap < 0) throw std::invalid_argument("brute force: z_cap must be >= 0");
  const std::size_t k = dist.support().size();
  double combos = std::pow(double(z_cap + 1), double(k));
  if (double(k) * combos > double(budget))
    throw NumericError("brute force: " + std::to_string(double(k) * combos) +
                       " evaluations exceed the budget of " + std::to_string(budget));

  PenaltyPrefixSums sums(p);
  const auto& ys = dist.support();
  const auto& pr = dist.probs();

  WaitingMap current{ys, std::vector<std::int64_t>(k, 0)};
  BruteForceResult best;
  bool first = true;
  while (true) {
    KahanSum pen, len;
    for (std::size_t i = 0; i < k; ++i) {
      std::int64_t y = std::llround(ys[i]);
      std::int64_t z = current.z[i];
      len.add(pr[i] * double(y + z));
      for (std::size_t j = 0; j < k; ++j)
        pen.add(pr[i] * pr[j] * sums.sum_range(y, y + z + std::llround(ys[j])));
    }
    double obj = pen.value() / len.value();
    ++best.evaluated;
    // strict improvement keeps the lexicographically first optimum
    if (first || obj < best.objective) {
      best.objective = obj;
      best.best = current;
      first = false;
    }
    // odometer, last coordinate fastest: lexicographic enumeration order
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (current.z[pos] < z_cap) {
        ++current.z[pos];
        for (std::size_t q = pos + 1; q < k; ++q) current.z[q] = 0;
        break;
      }
      if (pos == 0) return best;
    }
  }
}

std::vector<WaitingMap> enumerate_waiting_maps(const ServiceDist& dist, std::int64_t z_cap,
                                               std::int64_t budget) {
  check_enumerable(dist);
  const std::size_t k = dist.support().size();
  double combos = std::pow(double(z_cap + 1), double(k));
  if (combos > double(budget))
    throw NumericError("map enumeration exceeds the budget");
  std::vector<WaitingMap> all;
  all.reserve(std::size_t(combos));
  WaitingMap current{dist.support(), std::vector<std::int64_t>(k, 0)};
  while (true) {
    all.push_back(current);
    std::size_t pos = k;
    bool advanced = false;
    while (pos > 0) {
      --pos;
      if (current.z[pos] < z_cap) {
        ++current.z[pos];
        for (std::size_t q = pos + 1; q < k; ++q) current.z[q] = 0;
        advanced = true;
        break;
      }
    }
    if (!advanced) return all;
  }
}

GridSearchResult grid_search_water_level(const PenaltyFn& p, const ExpectationEngine& ev,
                                         const std::vector<double>& levels) {
  if (levels.empty()) throw std::invalid_argument("grid search: need at least one level");
  GridSearchResult res;
  bool first = true;
  for (double w : levels) {
    CycleAverages avg = cycle_averages_at_level(p, ev, w);
    double obj = avg.mean_penalty / avg.mean_length;
    res.points.push_back({w, obj});
    if (first || obj < res.best_objective) {
      res.best_level = w;
      res.best_objective = obj;
      first = false;
    }
  }
  return res;
}

}  // namespace ageopt
