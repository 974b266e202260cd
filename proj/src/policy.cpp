#include "ageopt/policy.hpp"

#include <cmath>
#include <string>

#include "ageopt/numeric.hpp"

namespace ageopt {

namespace {

constexpr double kBracketCap = 1099511627776.0;  // 2^40

// least x >= 0 with pred(x), for a monotone (false then true) predicate
double first_passage(const std::function<bool(double)>& pred, TimeMode mode, double tol,
                     const char* what) {
  if (pred(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (!pred(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBracketCap)
      throw NumericError(std::string(what) +
                         ": level search exceeded 2^40; the expected penalty never "
                         "reaches the requested threshold");
  }
  if (mode == TimeMode::Discrete) {
    // smallest integer in (lo, hi] satisfying pred
    std::int64_t a = std::int64_t(lo), b = std::int64_t(hi);
    while (b - a > 1) {
      std::int64_t m = a + (b - a) / 2;
      if (pred(double(m)))
        b = m;
      else
        a = m;
    }
    return double(b);
  }
  while (hi - lo > tol) {
    double m = 0.5 * (lo + hi);
    if (pred(m))
      hi = m;
    else
      lo = m;
  }
  return hi;
}

}  // namespace

double water_level(const PenaltyFn& p, const ExpectationEngine& ev, double beta,
                   bool strict, double tol) {
  auto pred = [&](double d) {
    double f = expected_penalty_after_service(p, ev, d);
    return strict ? f > beta : f >= beta;
  };
  return first_passage(pred, ev.mode(), tol, "water_level");
}

std::pair<double, double> waiting_bounds_direct(const PenaltyFn& p,
                                                const ExpectationEngine& ev, double y,
                                                double beta, double tol) {
  auto pred_geq = [&](double t) {
    return expected_penalty_after_service(p, ev, y + t) >= beta;
  };
  auto pred_gt = [&](double t) {
    return expected_penalty_after_service(p, ev, y + t) > beta;
  };
  double z_min = first_passage(pred_geq, ev.mode(), tol, "waiting_bounds");
  double z_max = first_passage(pred_gt, ev.mode(), tol, "waiting_bounds");
  return {z_min, z_max};
}

ThresholdPolicy threshold_policy_at(const PenaltyFn& p, const ExpectationEngine& ev,
                                    double beta, double tol) {
  double w = water_level(p, ev, beta, /*strict=*/false, tol);
  ThresholdPolicy pol;
  pol.beta = beta;
  pol.alpha = 0.0;
  pol.lambda = 1.0;
  pol.water_min = w;
  pol.water_max = w;
  pol.mode = ev.mode();
  return pol;
}

double next_sample_time(const Policy& pol, double prev_sample, double prev_delivery,
                        double coin) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ZeroWaitPolicy>) {
          return prev_delivery;
        } else if constexpr (std::is_same_v<T, UniformPolicy>) {
          return prev_sample + v.period;
        } else {
          // age at the previous delivery; threshold samples never queue, so
          // this equals that sample's service time
          double age = prev_delivery - prev_sample;
          return prev_delivery + v.waiting_time(age, coin);
        }
      },
      pol);
}

}  // namespace ageopt
