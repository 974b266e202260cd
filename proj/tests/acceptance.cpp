// Acceptance harness: ten end-to-end checks, one printed line each. Exit
// status is the number of failed checks, so the suite doubles as a gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "ageopt/expectation.hpp"
#include "ageopt/optimizer.hpp"
#include "ageopt/oracle.hpp"
#include "ageopt/penalty.hpp"
#include "ageopt/policy.hpp"
#include "ageopt/rng.hpp"
#include "ageopt/service.hpp"
#include "ageopt/simulator.hpp"
#include "ageopt/sources.hpp"

using namespace ageopt;

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
}

void run(int id, bool (*fn)(std::string&)) {
  std::string detail;
  bool pass = false;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("unexpected exception: ") + e.what();
  }
  report(id, pass, detail);
}

std::string fmt1(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
// Bisection equals exhaustive search on the two-point discrete instance,
// both equal to 11/6, in under a second.
bool crit1(std::string& detail) {
  Timer t;
  auto p = PenaltyFn::linear();
  auto dist = ServiceDist::two_point(1.0, 2.0, 0.5);
  SolveConfig cfg;
  cfg.mode = TimeMode::Discrete;
  auto res = solve(p, dist, cfg);
  auto oracle = brute_force_discrete(p, dist, 50);
  double expect = 11.0 / 6.0;
  bool pass = std::abs(res.p_opt - oracle.objective) <= 1e-9 &&
              std::abs(res.p_opt - expect) <= 1e-9 && t.ms() < 1000.0;
  std::ostringstream os;
  os << "solver " << res.p_opt << " vs exhaustive " << oracle.objective << " vs 11/6, "
     << fmt1(t.ms()) << " ms";
  detail = os.str();
  return pass;
}

// ---------------------------------------------------------------- criterion 2
// Constant unit service: optimum 1.5, zero-wait already optimal, nobody waits.
bool crit2(std::string& detail) {
  Timer t;
  auto p = PenaltyFn::linear();
  auto dist = ServiceDist::constant(1.0);
  SolveConfig cfg;
  auto res = solve(p, dist, cfg);
  ExpectationEngine ev(dist, TimeMode::Continuous, 10, 1);
  auto zw = zero_wait_check(p, dist, ev);
  bool wait_free = res.policy.waiting_time(1.0, 0.0) == 0.0 &&
                   res.policy.waiting_time(1.0, 0.999) == 0.0;
  bool pass = std::abs(res.policy.beta - 1.5) <= 1e-6 && zw.optimal && wait_free &&
              t.ms() < 1000.0;
  std::ostringstream os;
  os << "beta " << res.policy.beta << ", zero-wait optimal " << (zw.optimal ? "yes" : "no")
     << ", waiting " << res.policy.waiting_time(1.0, 0.0) << ", " << fmt1(t.ms()) << " ms";
  detail = os.str();
  return pass;
}

// ---------------------------------------------------------------- criterion 3
// Exponential service: zero-wait is strictly beaten (its average is exactly
// 2), and a level grid over the same Monte Carlo measure agrees with the
// bisected optimum to grid resolution.
bool crit3(std::string& detail) {
  Timer t;
  auto p = PenaltyFn::linear();
  auto dist = ServiceDist::exponential(1.0);
  SolveConfig cfg;
  cfg.pool_size = 100000;
  cfg.seed = 2;
  auto res = solve(p, dist, cfg);
  ExpectationEngine ev(dist, TimeMode::Continuous, cfg.pool_size, cfg.seed);
  auto zw = zero_wait_check(p, dist, ev);

  std::vector<double> levels;
  for (double w = 0.0; w <= 3.0001; w += 0.15) levels.push_back(w);
  auto grid = grid_search_water_level(p, ev, levels);

  double se = res.objective_se;
  bool below_zero_wait = res.p_opt < 2.0 - 5.0 * se;
  bool grid_agrees = grid.best_objective >= res.p_opt - 1e-6 &&
                     grid.best_objective - res.p_opt <= 0.02 &&
                     std::abs(grid.best_level - res.policy.water_min) <= 0.15 + 1e-9;
  bool pass = !zw.optimal && below_zero_wait && grid_agrees && t.ms() < 30000.0;
  std::ostringstream os;
  os << "beta " << fmt1(res.p_opt) << " (se " << fmt1(se) << ") vs zero-wait 2, grid best "
     << fmt1(grid.best_objective) << " at level " << fmt1(grid.best_level) << ", "
     << fmt1(t.ms()) << " ms";
  detail = os.str();
  return pass;
}

// ---------------------------------------------------------------- criterion 4
// Binding rate cap: the constrained branch fires and the sampling interval
// lands on 1/f_max, also under simulation.
bool crit4(std::string& detail) {
  auto p = PenaltyFn::linear();
  auto dist = ServiceDist::constant(1.0);
  SolveConfig cfg;
  cfg.f_max = 0.25;
  auto res = solve(p, dist, cfg);
  double eps = 1e-9;  // the automatic tolerance for an exact engine

  auto sim = simulate(Policy{res.policy}, dist, p, 440000.0, 3, TimeMode::Continuous);
  bool pass = res.constrained_active && std::abs(res.expected_interval - 4.0) <= 2 * eps &&
              sim.cycles >= 100000 && std::abs(sim.avg_interval - 4.0) <= 0.01;
  std::ostringstream os;
  os << "interval " << res.expected_interval << ", simulated " << sim.avg_interval
     << " over " << sim.cycles << " cycles";
  detail = os.str();
  return pass;
}

// ---------------------------------------------------------------- criterion 5
// The returned objective is the long-run average its own policy earns, for a
// spread of penalty/service/mode combinations.
bool crit5(std::string& detail) {
  struct Instance {
    PenaltyFn p;
    ServiceDist dist;
    TimeMode mode;
  };
  std::vector<Instance> instances = {
      {PenaltyFn::linear(), ServiceDist::constant(1.0), TimeMode::Continuous},
      {PenaltyFn::linear(), ServiceDist::two_point(1.0, 2.0, 0.5), TimeMode::Discrete},
      {PenaltyFn::power(2.0), ServiceDist::two_point(1.0, 3.0, 0.4), TimeMode::Discrete},
      {PenaltyFn::power(1.5), ServiceDist::erlang(2, 1.0), TimeMode::Continuous},
      {PenaltyFn::exponential(0.2), ServiceDist::two_point(2.0, 5.0, 0.7), TimeMode::Discrete},
      {PenaltyFn::exponential(0.3), ServiceDist::exponential(1.0), TimeMode::Continuous},
      {PenaltyFn::step(4.0), ServiceDist::geometric(0.5), TimeMode::Discrete},
      {PenaltyFn::neg_mutual_info_binary(0.1), ServiceDist::two_point(1.0, 3.0, 0.5),
       TimeMode::Discrete},
      {PenaltyFn::neg_mutual_info_gauss(0.8), ServiceDist::two_point(1.0, 5.0, 0.5),
       TimeMode::Discrete},
      {PenaltyFn::table({0.0, 4.0, 8.0}, {0.5, 2.0, 3.0}), ServiceDist::constant(2.0),
       TimeMode::Discrete},
  };
  int ok = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    SolveConfig cfg;
    cfg.mode = inst.mode;
    cfg.seed = 10 + std::uint64_t(i);
    auto res = solve(inst.p, inst.dist, cfg);
    auto sim = simulate(Policy{res.policy}, inst.dist, inst.p, 200000.0,
                        100 + std::uint64_t(i), inst.mode);
    double band =
        3.0 * std::sqrt(sim.se * sim.se + res.objective_se * res.objective_se) + 1e-9;
    double gap = std::abs(sim.avg_penalty - res.p_opt);
    worst = std::max(worst, band > 0 ? gap / band : 0.0);
    if (gap <= band) ++ok;
  }
  std::ostringstream os;
  os << ok << "/" << instances.size() << " within 3 joint standard errors (worst gap "
     << fmt1(worst) << " of band)";
  detail = os.str();
  return ok == int(instances.size());
}

// ---------------------------------------------------------------- criterion 6
// Sign structure of the auxiliary gap around the criterion-2 optimum.
bool crit6(std::string& detail) {
  auto p = PenaltyFn::linear();
  ExpectationEngine ev(ServiceDist::constant(1.0), TimeMode::Continuous, 10, 1);
  double at = dinkelbach_gap(1.5, p, ev);
  double below = dinkelbach_gap(1.4, p, ev);
  double above = dinkelbach_gap(1.6, p, ev);
  bool pass = std::abs(at) <= 1e-6 && below > 0.0 && above < 0.0;
  std::ostringstream os;
  os << "h(1.5) = " << fmt1(at) << ", h(1.4) = " << fmt1(below) << ", h(1.6) = "
     << fmt1(above);
  detail = os.str();
  return pass;
}

// ---------------------------------------------------------------- criterion 7
// Information law: frozen value at lag 1 and monotone decay for random
// sources of both kinds.
bool crit7(std::string& detail) {
  bool frozen =
      std::abs(mutual_info(MarkovSource{GaussMarkov{0.9}}, 1) - 1.19796) <= 1e-5;
  RngStream rng(71);
  int monotone = 0;
  for (int trial = 0; trial < 50; ++trial) {
    MarkovSource src;
    if (trial % 2 == 0)
      src = GaussMarkov{0.02 + 0.95 * rng.next_unit()};
    else
      src = BinaryMarkov{0.002 + 0.49 * rng.next_unit()};
    bool ok = true;
    double prev = mutual_info(src, 1);
    for (std::int64_t d = 2; d <= 200; ++d) {
      double cur = mutual_info(src, d);
      if (cur > prev + 1e-12) ok = false;
      prev = cur;
    }
    if (ok) ++monotone;
  }
  std::ostringstream os;
  os << "I(0.9, 1) = " << mutual_info(MarkovSource{GaussMarkov{0.9}}, 1) << ", " << monotone
     << "/50 sources monotone";
  detail = os.str();
  return frozen && monotone == 50;
}

// ---------------------------------------------------------------- criterion 8
// (a) At an information floor of 0.1 bits with Y in {1, 5}, the threshold
// rule waits after every fast service and never after a slow one.
// (b) Across four trimmed sweeps, the solved policy is at least as good as
// every feasible alternative, within joint error bars.
struct SweepPoint {
  std::string label;
  PenaltyFn p;
  ServiceDist dist;
  double f_max;
};

bool sweep_point_ok(const SweepPoint& pt, std::uint64_t seed, std::string& why) {
  SolveConfig cfg;
  cfg.mode = TimeMode::Discrete;
  cfg.f_max = pt.f_max;
  cfg.seed = seed;
  auto res = solve(pt.p, pt.dist, cfg);
  auto opt = renewal_average(Policy{res.policy}, pt.dist, pt.p, 20000, seed, TimeMode::Discrete);

  bool ok = true;
  std::ostringstream os;
  // comparisons are written so that a NaN average counts as a failure
  if (1.0 / pt.dist.mean() <= pt.f_max * (1.0 + 1e-12)) {
    auto zw = renewal_average(Policy{ZeroWaitPolicy{}}, pt.dist, pt.p, 20000, seed,
                              TimeMode::Discrete);
    double band = 3.0 * std::sqrt(opt.se * opt.se + zw.se * zw.se) + 1e-9;
    if (!(opt.avg_penalty <= zw.avg_penalty + band)) {
      ok = false;
      os << " zero-wait " << fmt1(zw.avg_penalty) << " vs optimal "
         << fmt1(opt.avg_penalty) << ";";
    }
  }
  double raw_period = 1.0 / pt.f_max;
  double period = std::abs(raw_period - std::round(raw_period)) < 1e-9
                      ? std::round(raw_period)
                      : std::ceil(raw_period);
  auto uni = simulate(Policy{UniformPolicy{period}}, pt.dist, pt.p, 5000.0, seed,
                      TimeMode::Discrete);
  double band = 3.0 * std::sqrt(opt.se * opt.se + uni.se * uni.se) + 1e-9;
  if (!(opt.avg_penalty <= uni.avg_penalty + band)) {
    ok = false;
    os << " uniform " << fmt1(uni.avg_penalty) << " vs optimal "
       << fmt1(opt.avg_penalty) << ";";
  }
  if (!ok) why += " [" + pt.label + ":" + os.str() + "]";
  return ok;
}

bool crit8(std::string& detail) {
  // (a) waiting pattern at the information floor
  auto p = PenaltyFn::neg_mutual_info_gauss(0.8);
  auto dist = ServiceDist::two_point(1.0, 5.0, 0.5);
  ExpectationEngine ev(dist, TimeMode::Discrete, 10, 1);
  auto pol = threshold_policy_at(p, ev, -0.1);
  auto sim = simulate(Policy{pol}, dist, p, 40000.0, 9, TimeMode::Discrete);
  const auto& recs = sim.trajectory.records;
  std::int64_t checked = 0;
  bool pattern = recs.size() > 10000;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    double prev_service = recs[i - 1].Y;
    double wait = recs[i].Z;  // threshold samples only after delivery, so Z >= 0
    if (prev_service == 1.0 && !(wait > 0.0)) pattern = false;
    if (prev_service == 5.0 && wait != 0.0) pattern = false;
    ++checked;
  }

  // (b) trimmed sweeps: correlation, rate cap, penalty steepness, service spread
  std::vector<SweepPoint> points;
  auto tp = ServiceDist::two_point(1.0, 21.0, 0.5);
  for (double a : {0.3, 0.6, 0.9})
    points.push_back({"a=" + fmt1(a), PenaltyFn::neg_mutual_info_gauss(a), tp, 0.095});
  for (double f : {0.05, 0.08, 0.12})
    points.push_back({"f_max=" + fmt1(f), PenaltyFn::neg_mutual_info_gauss(0.9), tp, f});
  // the steepness sweep needs a light-tailed service and the spread sweep a
  // polynomially growing penalty: a log-normal service has no finite
  // exponential moment, so exp-penalty averages would not exist there. Its
  // cap of 0.56 keeps zero-wait feasible (mean service 1.8) while the
  // rounded-up uniform period of 2 keeps that queue stable, which matters
  // because an unstable queue under an exponential penalty overflows.
  for (double alpha : {0.0, 0.1, 0.2})
    points.push_back({"alpha=" + fmt1(alpha), PenaltyFn::exponential(alpha),
                      ServiceDist::two_point(1.0, 3.0, 0.6), 0.56});
  for (double sigma : {0.0, 0.75, 1.5})
    points.push_back({"sigma=" + fmt1(sigma), PenaltyFn::power(1.5),
                      ServiceDist::discretized_log_normal(sigma), 1.0});

  std::string why;
  int ok = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (sweep_point_ok(points[i], 300 + std::uint64_t(i), why)) ++ok;

  std::ostringstream os;
  os << "waiting pattern over " << checked << " cycles "
     << (pattern ? "holds" : "broken") << "; " << ok << "/" << points.size()
     << " sweep points ordered" << why;
  detail = os.str();
  return pattern && ok == int(points.size());
}

// ---------------------------------------------------------------- criterion 9
// Randomized rate-capped policies: mixing weight in [0,1], the two relaxed
// levels bracket the target interval, and the achieved rate meets the cap.
bool crit9(std::string& detail) {
  RngStream rng(91);
  int ok = 0;
  std::string why;
  for (int trial = 0; trial < 20; ++trial) {
    double y1 = 1.0 + std::floor(3.0 * rng.next_unit());
    double y2 = y1 + 1.0 + std::floor(9.0 * rng.next_unit());
    double p1 = 0.2 + 0.6 * rng.next_unit();
    auto dist = ServiceDist::two_point(y1, y2, p1);
    PenaltyFn p = PenaltyFn::linear();
    int kind = int(3.0 * rng.next_unit());
    if (kind == 1) p = PenaltyFn::power(1.2 + 1.3 * rng.next_unit());
    if (kind == 2) p = PenaltyFn::exponential(0.05 + 0.25 * rng.next_unit());

    SolveConfig cfg;
    cfg.mode = TimeMode::Discrete;
    auto free_run = solve(p, dist, cfg);
    double target = free_run.expected_interval * (1.3 + 2.7 * rng.next_unit());
    cfg.f_max = 1.0 / target;
    auto res = solve(p, dist, cfg);

    ExpectationEngine ev(dist, TimeMode::Discrete, 10, 1);
    double lo = cycle_averages_at_level(p, ev, res.policy.water_min).mean_length;
    double hi = cycle_averages_at_level(p, ev, res.policy.water_max).mean_length;
    bool lambda_ok = res.policy.lambda >= 0.0 && res.policy.lambda <= 1.0;
    bool sandwich = lo <= target + 1e-6 && hi >= target - 1e-6;

    // achieved sampling interval of the mixed rule, measured on fresh cycles
    RngStream sim_rng(1000 + std::uint64_t(trial));
    const int n = 50000;
    double sum = 0.0, sumsq = 0.0;
    for (int c = 0; c < n; ++c) {
      double y = dist.draw(sim_rng);
      double z = res.policy.waiting_time(y, sim_rng.next_unit());
      double len = y + z;
      sum += len;
      sumsq += len * len;
    }
    double mean = sum / n;
    double se = std::sqrt((sumsq / n - mean * mean) / n);
    bool rate_ok = std::abs(mean - target) <= 2e-9 + 3.0 * se;

    if (lambda_ok && sandwich && rate_ok && res.constrained_active) {
      ++ok;
    } else {
      std::ostringstream os;
      os << " [trial " << trial << ": lambda " << res.policy.lambda << ", levels ("
         << fmt1(lo) << ", " << fmt1(hi) << ") target " << fmt1(target) << ", measured "
         << fmt1(mean) << "]";
      why += os.str();
    }
  }
  detail = std::to_string(ok) + "/20 instances satisfy the mixing contract" + why;
  return ok == 20;
}

// --------------------------------------------------------------- criterion 10
// Three routes to the waiting time, all engines, random inputs.
bool crit10(std::string& detail) {
  RngStream rng(101);
  auto lin = PenaltyFn::linear();
  auto pw = PenaltyFn::power(1.7);
  int checked = 0, agreed = 0;

  auto check_forms = [&](const PenaltyFn& p, const ExpectationEngine& ev, double y,
                         double beta, bool discrete) {
    ++checked;
    double z_def = waiting_bounds_direct(p, ev, y, beta).first;
    double w = water_level(p, ev, beta, false);
    double z_water = std::max(w - y, 0.0);
    // age-threshold reading: wait until the age, which starts the cycle at y,
    // first reaches the level
    double z_age;
    if (discrete) {
      z_age = y >= w ? 0.0 : std::ceil(w - y);
    } else {
      z_age = std::max(w - y, 0.0);
    }
    bool same = discrete ? (z_def == z_water && z_water == z_age)
                         : (std::abs(z_def - z_water) <= 2e-9 && z_water == z_age);
    if (same) ++agreed;
  };

  ExpectationEngine evd(ServiceDist::two_point(1.0, 2.0, 0.5), TimeMode::Discrete, 10, 1);
  for (int i = 0; i < 4000; ++i) {
    double y = 1.0 + std::floor(2.0 * rng.next_unit());
    double beta = -1.0 + 16.0 * rng.next_unit();
    check_forms(i % 2 ? lin : pw, evd, y, beta, true);
  }

  ExpectationEngine evc(ServiceDist::two_point(0.7, 2.3, 0.5), TimeMode::Continuous, 10, 1);
  for (int i = 0; i < 3000; ++i) {
    double y = 0.1 + 3.9 * rng.next_unit();
    double beta = 0.5 + 11.5 * rng.next_unit();
    check_forms(i % 2 ? lin : pw, evc, y, beta, false);
  }

  ExpectationEngine evm(ServiceDist::exponential(1.0), TimeMode::Continuous, 2000, 7);
  for (int i = 0; i < 3000; ++i) {
    double y = 0.01 + 4.99 * rng.next_unit();
    double beta = 0.2 + 9.8 * rng.next_unit();
    check_forms(lin, evm, y, beta, false);
  }

  detail = std::to_string(agreed) + "/" + std::to_string(checked) + " (y, beta) pairs agree";
  return agreed == checked;
}

}  // namespace

int main() {
  run(1, crit1);
  run(2, crit2);
  run(3, crit3);
  run(4, crit4);
  run(5, crit5);
  run(6, crit6);
  run(7, crit7);
  run(8, crit8);
  run(9, crit9);
  run(10, crit10);
  return failures;
}
