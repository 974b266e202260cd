#include "ageopt/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "ageopt/numeric.hpp"
#include "ageopt/rng.hpp"

namespace ageopt {

namespace {
constexpr std::uint64_t kStreamFirst = 101;   // Y pool
constexpr std::uint64_t kStreamSecond = 102;  // Y' pool
}  // namespace

ExpectationEngine::ExpectationEngine(const ServiceDist& dist, TimeMode mode,
                                     std::size_t pool_size, std::uint64_t seed)
    : dist_(dist), mode_(mode), seed_(seed), exact_(dist.finite_support()) {
  if (mode == TimeMode::Discrete && !dist.is_discrete())
    throw std::invalid_argument("discrete mode needs an integer-valued service law");
  if (exact_) {
    succ_vals_ = dist.support();
    succ_probs_ = dist.probs();
    // consecutive service times are independent, so the pair law is a product
    for (std::size_t i = 0; i < succ_vals_.size(); ++i) {
      for (std::size_t j = 0; j < succ_vals_.size(); ++j) {
        pair_y_.push_back(succ_vals_[i]);
        pair_y2_.push_back(succ_vals_[j]);
        pair_w_.push_back(succ_probs_[i] * succ_probs_[j]);
      }
    }
  } else {
    if (pool_size == 0) throw std::invalid_argument("expectation pool must be non-empty");
    sample_count_ = pool_size;
    RngStream first(seed, kStreamFirst);
    RngStream second(seed, kStreamSecond);
    std::vector<double> ys(pool_size), y2s(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) ys[i] = dist.draw(first);
    for (std::size_t i = 0; i < pool_size; ++i) y2s[i] = dist.draw(second);
    double w = 1.0 / double(pool_size);
    if (dist.is_discrete()) {
      // integer pools compress well; keeps every threshold scan O(#distinct)
      std::map<std::pair<long, long>, double> joint;
      std::map<long, double> marg;
      for (std::size_t i = 0; i < pool_size; ++i) {
        joint[{long(std::llround(ys[i])), long(std::llround(y2s[i]))}] += w;
        marg[long(std::llround(y2s[i]))] += w;
      }
      for (const auto& [k, v] : joint) {
        pair_y_.push_back(double(k.first));
        pair_y2_.push_back(double(k.second));
        pair_w_.push_back(v);
      }
      for (const auto& [k, v] : marg) {
        succ_vals_.push_back(double(k));
        succ_probs_.push_back(v);
      }
    } else {
      pair_y_ = ys;
      pair_y2_ = y2s;
      pair_w_.assign(pool_size, w);
      succ_vals_ = y2s;
      succ_probs_.assign(pool_size, w);
    }
  }
  KahanSum sm, fm;
  for (std::size_t i = 0; i < succ_vals_.size(); ++i) sm.add(succ_probs_[i] * succ_vals_[i]);
  for (std::size_t i = 0; i < pair_y_.size(); ++i) fm.add(pair_w_[i] * pair_y_[i]);
  succ_mean_ = sm.value();
  first_mean_ = fm.value();
}

double ExpectationEngine::expected_after(const PenaltyFn& p, double delta) const {
  KahanSum acc;
  for (std::size_t i = 0; i < succ_vals_.size(); ++i)
    acc.add(succ_probs_[i] * p(delta + succ_vals_[i]));
  return acc.value();
}

double ExpectationEngine::expected_after_left(const PenaltyFn& p, double delta) const {
  KahanSum acc;
  for (std::size_t i = 0; i < succ_vals_.size(); ++i)
    acc.add(succ_probs_[i] * p.left_limit(delta + succ_vals_[i]));
  return acc.value();
}

double expected_penalty_after_service(const PenaltyFn& p, const ExpectationEngine& ev,
                                      double delta) {
  double v = ev.expected_after(p, delta);
  if (!std::isfinite(v))
    throw NumericError("expected penalty after service is not finite at age " +
                       std::to_string(delta));
  return v;
}

}  // namespace ageopt
