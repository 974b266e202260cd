#include "ageopt/sources.hpp"

#include <cmath>
#include <stdexcept>

#include "ageopt/numeric.hpp"

namespace ageopt {

namespace {

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace

double mutual_info(const MarkovSource& src, std::int64_t delta) {
  if (delta < 0) throw std::domain_error("mutual_info: lag must be >= 0");
  if (const auto* g = std::get_if<GaussMarkov>(&src)) {
    if (!(g->a > -1.0 && g->a < 1.0))
      throw std::invalid_argument("gauss-markov source: coefficient must lie in (-1, 1)");
    if (delta == 0)
      throw std::domain_error("gauss-markov mutual information diverges at lag 0");
    double decay = std::pow(g->a * g->a, double(delta));
    return -0.5 * std::log2(1.0 - decay);
  }
  const auto& b = std::get<BinaryMarkov>(src);
  if (!(b.q >= 0.0 && b.q <= 0.5))
    throw std::invalid_argument("binary source: flip probability must lie in [0, 1/2]");
  return 1.0 - conditional_entropy(b, delta);
}

double conditional_entropy(const BinaryMarkov& src, std::int64_t delta) {
  if (delta < 0) throw std::domain_error("conditional_entropy: lag must be >= 0");
  // state flips accumulate: P[X_t != X_{t-delta}] = (1 - (1-2q)^delta)/2
  double corr = std::pow(1.0 - 2.0 * src.q, double(delta));
  return binary_entropy(0.5 * (1.0 - corr));
}

PenaltyFn mi_penalty(const MarkovSource& src) {
  if (const auto* g = std::get_if<GaussMarkov>(&src))
    return PenaltyFn::neg_mutual_info_gauss(g->a);
  return PenaltyFn::neg_mutual_info_binary(std::get<BinaryMarkov>(src).q);
}

double conditional_mi_given_service(const MarkovSource& src, const ServiceDist& dist,
                                    std::int64_t gap) {
  if (!dist.finite_support())
    throw std::invalid_argument(
        "conditional_mi_given_service: service law must have enumerable support");
  if (!dist.is_discrete())
    throw std::invalid_argument("conditional_mi_given_service: service law must be integer valued");
  KahanSum acc;
  for (std::size_t i = 0; i < dist.support().size(); ++i) {
    std::int64_t y = std::int64_t(std::llround(dist.support()[i]));
    acc.add(dist.probs()[i] * mutual_info(src, gap + y));
  }
  return acc.value();
}

}  // namespace ageopt
