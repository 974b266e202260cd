#include "ageopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ageopt/numeric.hpp"

namespace ageopt {

namespace {

constexpr int kMaxBisectIters = 400;
constexpr int kMaxExpand = 64;

// Evaluates per-cycle quantities for one penalty, caching integer prefix sums
// in discrete mode. One instance per solve invocation (not shareable).
class CycleEvaluator {
 public:
  CycleEvaluator(const PenaltyFn& p, TimeMode mode) : p_(&p), mode_(mode), sums_(p) {}

  // penalty mass accumulated while the age runs from y up to y + z + y2
  double cycle_penalty(double y, double z, double y2) {
    if (mode_ == TimeMode::Discrete)
      return sums_.sum_range(std::llround(y), std::llround(y + z + y2));
    return p_->integral(y + z + y2) - p_->integral(y);
  }

 private:
  const PenaltyFn* p_;
  TimeMode mode_;
  PenaltyPrefixSums sums_;
};

// Weighted first and second moments of (cycle penalty, cycle length) under a
// lambda-mix of two water levels, over the engine's pair measure.
struct LevelMoments {
  double pen = 0.0, len = 0.0;
  double qq = 0.0, ll = 0.0, ql = 0.0;  // raw second moments

  double ratio() const { return pen / len; }

  // delta-method standard error of pen/len given n independent draws
  double ratio_se(std::size_t n) const {
    if (n == 0) return 0.0;
    double r = ratio();
    double var_q = qq - pen * pen;
    double var_l = ll - len * len;
    double cov = ql - pen * len;
    double v = (var_q - 2.0 * r * cov + r * r * var_l) / (double(n) * len * len);
    return v > 0.0 ? std::sqrt(v) : 0.0;
  }
};

LevelMoments accumulate_mixture(const ExpectationEngine& ev, CycleEvaluator& eval,
                                double w1, double w2, double lambda) {
  auto y = ev.pair_y();
  auto y2 = ev.pair_y2();
  auto wt = ev.pair_w();
  KahanSum pen, len, qq, ll, ql;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double z1 = w1 > y[i] ? w1 - y[i] : 0.0;
    double q = eval.cycle_penalty(y[i], z1, y2[i]);
    double l = y[i] + z1;
    if (lambda < 1.0) {
      double z2 = w2 > y[i] ? w2 - y[i] : 0.0;
      double q2 = eval.cycle_penalty(y[i], z2, y2[i]);
      double l2 = y[i] + z2;
      q = lambda * q + (1.0 - lambda) * q2;
      l = lambda * l + (1.0 - lambda) * l2;
    }
    pen.add(wt[i] * q);
    len.add(wt[i] * l);
    qq.add(wt[i] * q * q);
    ll.add(wt[i] * l * l);
    ql.add(wt[i] * q * l);
  }
  LevelMoments m;
  m.pen = pen.value();
  m.len = len.value();
  m.qq = qq.value();
  m.ll = ll.value();
  m.ql = ql.value();
  return m;
}

LevelMoments accumulate_level(const ExpectationEngine& ev, CycleEvaluator& eval, double w) {
  return accumulate_mixture(ev, eval, w, w, 1.0);
}

// E[y + max(level - y, 0)] where the level comes from the (possibly strict)
// threshold search at beta; +inf when beta is past the reachable expectation.
double interval_at(const PenaltyFn& p, const ExpectationEngine& ev, double beta,
                   bool strict, double tol) {
  double w;
  try {
    w = water_level(p, ev, beta, strict, tol);
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
  auto y = ev.pair_y();
  auto wt = ev.pair_w();
  KahanSum len;
  for (std::size_t i = 0; i < y.size(); ++i)
    len.add(wt[i] * (y[i] + (w > y[i] ? w - y[i] : 0.0)));
  return len.value();
}

double default_eps(const ExpectationEngine& ev, double eps) {
  if (eps > 0.0) return eps;
  return ev.exact() ? 1e-9 : 1e-6;
}

}  // namespace

CycleAverages cycle_averages_at_level(const PenaltyFn& p, const ExpectationEngine& ev,
                                      double level) {
  CycleEvaluator eval(p, ev.mode());
  LevelMoments m = accumulate_level(ev, eval, level);
  return {m.pen, m.len};
}

CycleStats cycle_stats(const PenaltyFn& p, const ExpectationEngine& ev, double beta,
                       double tol) {
  CycleEvaluator eval(p, ev.mode());
  double w1 = water_level(p, ev, beta, /*strict=*/false, tol);
  LevelMoments m1 = accumulate_level(ev, eval, w1);
  CycleStats s;
  s.mean_penalty = m1.pen;
  s.mean_length = m1.len;
  s.interval_max = interval_at(p, ev, beta, /*strict=*/true, tol);
  return s;
}

SolveResult bisect_unconstrained(const PenaltyFn& p, const ExpectationEngine& ev,
                                 double eps) {
  CycleEvaluator eval(p, ev.mode());
  int iterations = 0;

  // o(beta) = beta - E[cycle penalty]/E[cycle length] at the beta-threshold
  // rule; negative below the fixed point, non-negative above it
  auto offset = [&](double beta) -> double {
    double w = water_level(p, ev, beta, /*strict=*/false, eps < 1e-9 ? eps : 1e-9);
    LevelMoments m = accumulate_level(ev, eval, w);
    double r = m.ratio();
    if (!std::isfinite(r))
      throw NumericError("cycle ratio is not finite at threshold " + std::to_string(beta));
    return beta - r;
  };

  // lower start: expected penalty one service after a fresh delivery
  auto y = ev.pair_y();
  auto y2 = ev.pair_y2();
  auto wt = ev.pair_w();
  KahanSum l0;
  for (std::size_t i = 0; i < y.size(); ++i) l0.add(wt[i] * p(y[i] + y2[i]));
  double lo = l0.value();
  if (!std::isfinite(lo)) lo = p(2.0 * ev.dist().ess_inf());
  if (!std::isfinite(lo))
    throw NumericError("cannot initialize the lower bisection bracket");

  // upper start: the zero-wait average is achievable, so the optimum is below it
  LevelMoments zw = accumulate_level(ev, eval, 0.0);
  double hi = zw.ratio();
  if (!std::isfinite(hi)) throw NumericError("zero-wait average penalty is not finite");

  double step = std::max(1.0, 0.5 * std::abs(lo));
  for (int k = 0; offset(lo) >= 0.0; ++k) {
    if (k >= kMaxExpand) throw NumericError("lower bisection bracket failed to expand");
    lo -= step;
    step *= 2.0;
    ++iterations;
  }
  step = std::max(1.0, 0.5 * std::abs(hi));
  for (int k = 0; offset(hi) < 0.0; ++k) {
    if (k >= kMaxExpand) throw NumericError("upper bisection bracket failed to expand");
    hi += step;
    step *= 2.0;
    ++iterations;
  }

  while (hi - lo > eps && iterations < kMaxBisectIters) {
    double mid = 0.5 * (lo + hi);
    if (offset(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
    ++iterations;
  }

  double beta = 0.5 * (lo + hi);
  double w = water_level(p, ev, beta, /*strict=*/false, eps < 1e-9 ? eps : 1e-9);
  LevelMoments m = accumulate_level(ev, eval, w);

  SolveResult res;
  res.policy.beta = beta;
  res.policy.alpha = 0.0;
  res.policy.lambda = 1.0;
  res.policy.water_min = w;
  res.policy.water_max = w;
  res.policy.mode = ev.mode();
  res.p_opt = beta;
  res.alpha = 0.0;
  res.constrained_active = false;
  res.expected_interval = m.len;
  res.iterations = iterations;
  res.residual = std::abs(beta - m.ratio());
  res.objective_se = m.ratio_se(ev.sample_count());
  res.seed = ev.seed();
  return res;
}

SolveResult bisect_constrained(const PenaltyFn& p, const ExpectationEngine& ev,
                               double f_max, double eps, const SolveResult& unconstrained) {
  if (!(f_max > 0.0) || !std::isfinite(f_max))
    throw std::invalid_argument("constrained solve needs a finite positive rate cap");
  const double target = 1.0 / f_max;
  const double wtol = eps < 1e-9 ? eps : 1e-9;
  CycleEvaluator eval(p, ev.mode());
  int iterations = 0;

  double lo = unconstrained.policy.beta;
  double hi = lo;
  double step = std::max(1.0, 0.5 * std::abs(lo));
  for (int k = 0; interval_at(p, ev, hi, /*strict=*/false, wtol) < target; ++k) {
    if (k >= kMaxExpand)
      throw NumericError("rate-cap bracket failed to expand");
    hi += step;
    step *= 2.0;
    ++iterations;
  }

  double beta = 0.5 * (lo + hi);
  bool sandwiched = false;
  while (hi - lo > eps && iterations < kMaxBisectIters) {
    beta = 0.5 * (lo + hi);
    double shortest = interval_at(p, ev, beta, /*strict=*/false, wtol);
    double longest = interval_at(p, ev, beta, /*strict=*/true, wtol);
    ++iterations;
    if (shortest > target) {
      hi = beta;
    } else if (longest < target) {
      lo = beta;
    } else {
      sandwiched = true;  // target lies between the two admissible intervals
      break;
    }
  }
  if (!sandwiched) beta = 0.5 * (lo + hi);

  // half-tolerance relaxation of the two threshold rules absorbs the numeric
  // error left in beta; the mix of their levels hits the cap exactly
  double w1 = water_level(p, ev, beta - 0.5 * eps, /*strict=*/false, wtol);
  double w2;
  try {
    w2 = water_level(p, ev, beta + 0.5 * eps, /*strict=*/true, wtol);
  } catch (const NumericError&) {
    throw NumericError(
        "rate cap is unattainable: the expected penalty plateaus at the threshold");
  }

  LevelMoments m1 = accumulate_level(ev, eval, w1);
  LevelMoments m2 = accumulate_level(ev, eval, w2);
  double denom = m2.len - m1.len;
  double lambda = 1.0;
  if (denom > 1e-12 * std::max(1.0, std::abs(m2.len)))
    lambda = std::clamp((m2.len - target) / denom, 0.0, 1.0);

  LevelMoments mix = accumulate_mixture(ev, eval, w1, w2, lambda);

  SolveResult res;
  res.policy.beta = beta;
  res.policy.lambda = lambda;
  res.policy.water_min = w1;
  res.policy.water_max = w2;
  res.policy.mode = ev.mode();
  res.p_opt = mix.ratio();
  res.alpha = beta - res.p_opt;
  res.policy.alpha = res.alpha;
  res.constrained_active = true;
  res.expected_interval = mix.len;
  res.iterations = iterations;
  res.residual = std::abs(mix.len - target);
  res.objective_se = mix.ratio_se(ev.sample_count());
  res.seed = ev.seed();
  return res;
}

SolveResult solve(const PenaltyFn& p, const ServiceDist& dist, const SolveConfig& cfg) {
  if (!(cfg.f_max > 0.0))
    throw std::invalid_argument("f_max must be positive (use infinity for no cap)");
  ExpectationEngine ev(dist, cfg.mode, cfg.pool_size, cfg.seed);
  double eps = default_eps(ev, cfg.eps);

  SolveResult unc = bisect_unconstrained(p, ev, eps);
  unc.seed = cfg.seed;
  if (!std::isfinite(cfg.f_max) || unc.expected_interval > 1.0 / cfg.f_max)
    return unc;

  SolveResult con = bisect_constrained(p, ev, cfg.f_max, eps, unc);
  con.iterations += unc.iterations;
  con.seed = cfg.seed;
  return con;
}

ZeroWaitReport zero_wait_check(const PenaltyFn& p, const ServiceDist& dist,
                               const ExpectationEngine& ev) {
  ZeroWaitReport rep;
  double floor_age = dist.ess_inf();
  CycleEvaluator eval(p, ev.mode());
  LevelMoments zw = accumulate_level(ev, eval, 0.0);
  if (ev.mode() == TimeMode::Continuous) {
    rep.lhs = expected_penalty_after_service(p, ev, floor_age);
  } else {
    // the discrete criterion asks for some e < 1 making the shifted
    // expectation large enough; the left limit at floor_age + y' + 1 is the
    // supremum over such e, so testing it decides the existential
    rep.lhs = ev.expected_after_left(p, floor_age + 1.0);
  }
  rep.rhs = zw.pen / ev.successor_mean();
  rep.optimal = rep.lhs >= rep.rhs;
  return rep;
}

double dinkelbach_gap(double c, const PenaltyFn& p, const ExpectationEngine& ev) {
  CycleEvaluator eval(p, ev.mode());
  double w = water_level(p, ev, c, /*strict=*/false);
  LevelMoments m = accumulate_level(ev, eval, w);
  return m.pen - c * m.len;
}

}  // namespace ageopt
