#include "ageopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ageopt/numeric.hpp"
#include "ageopt/rng.hpp"

namespace ageopt {

namespace {

constexpr std::uint64_t kStreamService = 1;
constexpr std::uint64_t kStreamCoin = 2;
constexpr std::uint64_t kStreamSuccessor = 3;

void check_mode(const ServiceDist& dist, TimeMode mode) {
  if (mode == TimeMode::Discrete && !dist.is_discrete())
    throw std::invalid_argument("discrete mode needs an integer-valued service law");
}

// penalty mass while the age runs from a up to b (one delivery interval)
double interval_penalty(const PenaltyFn& p, PenaltyPrefixSums& sums, TimeMode mode,
                        double a, double b) {
  if (mode == TimeMode::Discrete) return sums.sum_range(std::llround(a), std::llround(b));
  return p.integral(b) - p.integral(a);
}

double batch_means_se(const std::vector<double>& q, const std::vector<double>& l) {
  // standard error of sum(q)/sum(l) from batch subratios; robust to the
  // cycle correlation a queueing policy introduces
  std::size_t n = q.size();
  std::size_t batches = std::min<std::size_t>(32, n / 2);
  if (batches < 2) return 0.0;
  std::vector<double> ratios;
  ratios.reserve(batches);
  std::size_t per = n / batches;
  double grand_q = 0.0, grand_l = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double sq = 0.0, sl = 0.0;
    std::size_t end = (b + 1 == batches) ? n : (b + 1) * per;
    for (std::size_t j = b * per; j < end; ++j) {
      sq += q[j];
      sl += l[j];
    }
    grand_q += sq;
    grand_l += sl;
    if (sl > 0.0) ratios.push_back(sq / sl);
  }
  if (ratios.size() < 2) return 0.0;
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= double(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= double(ratios.size() - 1);
  (void)grand_q;
  (void)grand_l;
  return std::sqrt(var / double(ratios.size()));
}

}  // namespace

SimResult simulate(const Policy& pol, const ServiceDist& dist, const PenaltyFn& p,
                   double horizon, std::uint64_t seed, TimeMode mode,
                   double initial_age) {
  check_mode(dist, mode);
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be > 0");
  if (const auto* u = std::get_if<UniformPolicy>(&pol)) {
    if (!(u->period > 0.0)) throw std::invalid_argument("uniform policy: period must be > 0");
    if (mode == TimeMode::Discrete && !is_integral_value(u->period))
      throw std::invalid_argument("uniform policy: period must be an integer in discrete mode");
  }

  RngStream service(seed, kStreamService);
  RngStream coins(seed, kStreamCoin);

  SimResult res;
  res.seed = seed;
  Trajectory& traj = res.trajectory;
  traj.mode = mode;
  traj.horizon = horizon;
  traj.initial_age = initial_age;
  traj.seed = seed;

  // sample 0 goes out immediately at t = 0
  double y0 = dist.draw(service);
  traj.records.push_back({0, 0.0, 0.0, y0, y0});
  while (true) {
    const TrajectoryRecord& prev = traj.records.back();
    double coin = coins.next_unit();
    double s = next_sample_time(pol, prev.S, prev.D, coin);
    if (s > horizon) break;
    double yi = dist.draw(service);
    double d = std::max(s, prev.D) + yi;
    traj.records.push_back({prev.i + 1, s, s - prev.D, yi, d});
  }

  std::int64_t m = std::int64_t(traj.records.size()) - 1;  // index of last delivery
  if (m < 1) throw NumericError("simulate: horizon too short for a single full cycle");

  // measurement window: drop the first 1% of cycles (at least one) as warmup
  std::int64_t k = std::max<std::int64_t>(1, std::int64_t(std::llround(0.01 * double(m))));
  k = std::min(k, m - 1);
  if (k < 1) k = 1;

  PenaltyPrefixSums sums(p);
  std::vector<double> cycle_pen, cycle_len;
  cycle_pen.reserve(std::size_t(m - k));
  KahanSum total_pen;
  for (std::int64_t j = k; j < m; ++j) {
    const TrajectoryRecord& cur = traj.records[std::size_t(j)];
    const TrajectoryRecord& nxt = traj.records[std::size_t(j + 1)];
    double q = interval_penalty(p, sums, mode, cur.D - cur.S, nxt.D - cur.S);
    total_pen.add(q);
    cycle_pen.push_back(q);
    cycle_len.push_back(nxt.D - cur.D);
  }
  double t0 = traj.records[std::size_t(k)].D;
  double t1 = traj.records[std::size_t(m)].D;
  res.avg_penalty = total_pen.value() / (t1 - t0);
  res.avg_interval =
      (traj.records[std::size_t(m)].S - traj.records[std::size_t(k)].S) / double(m - k);
  res.cycles = m - k;
  res.low_cycle_warning = res.cycles < 100;
  res.se = batch_means_se(cycle_pen, cycle_len);
  return res;
}

RenewalResult renewal_average(const Policy& pol, const ServiceDist& dist,
                              const PenaltyFn& p, std::int64_t n_cycles,
                              std::uint64_t seed, TimeMode mode) {
  check_mode(dist, mode);
  if (std::holds_alternative<UniformPolicy>(pol))
    throw std::invalid_argument(
        "renewal_average: uniform sampling queues, so its cycles do not renew");
  if (n_cycles < 1) throw std::invalid_argument("renewal_average: need at least one cycle");

  RngStream first(seed, kStreamService);
  RngStream successor(seed, kStreamSuccessor);
  RngStream coins(seed, kStreamCoin);
  PenaltyPrefixSums sums(p);

  KahanSum sq, sl, sqq, sll, sql;
  for (std::int64_t i = 0; i < n_cycles; ++i) {
    double y = dist.draw(first);
    double y2 = dist.draw(successor);
    double coin = coins.next_unit();
    double z = 0.0;
    if (const auto* t = std::get_if<ThresholdPolicy>(&pol)) z = t->waiting_time(y, coin);
    double q = interval_penalty(p, sums, mode, y, y + z + y2);
    double l = y + z;
    sq.add(q);
    sl.add(l);
    sqq.add(q * q);
    sll.add(l * l);
    sql.add(q * l);
  }
  double n = double(n_cycles);
  double mq = sq.value() / n;
  double ml = sl.value() / n;
  double r = mq / ml;
  double var_q = sqq.value() / n - mq * mq;
  double var_l = sll.value() / n - ml * ml;
  double cov = sql.value() / n - mq * ml;
  double var_r = (var_q - 2.0 * r * cov + r * r * var_l) / (n * ml * ml);

  RenewalResult res;
  res.avg_penalty = r;
  res.avg_interval = ml;
  res.se = var_r > 0.0 ? std::sqrt(var_r) : 0.0;
  res.cycles = n_cycles;
  res.seed = seed;
  return res;
}

double age_process(const Trajectory& traj, double t) {
  if (t < 0.0) throw std::domain_error("age_process: time must be >= 0");
  // records are delivery-ordered; find the newest delivery at or before t
  const auto& r = traj.records;
  auto it = std::upper_bound(r.begin(), r.end(), t,
                             [](double x, const TrajectoryRecord& rec) { return x < rec.D; });
  if (it == r.begin()) return traj.initial_age + t;
  return t - std::prev(it)->S;
}

}  // namespace ageopt
