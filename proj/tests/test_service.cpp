// Service-law tests: analytic means against large-sample empirical means,
// support classification (discrete / finite), draw ranges, reproducibility
// under the counter-based generator, and constructor validation.

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "ageopt/rng.hpp"
#include "ageopt/service.hpp"

using namespace ageopt;

namespace {

struct SampleStats {
  double mean = 0.0;
  double se = 0.0;
};

SampleStats empirical_mean(const ServiceDist& dist, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = dist.draw(rng);
    sum += y;
    sumsq += y * y;
  }
  double mean = sum / double(n);
  double var = sumsq / double(n) - mean * mean;
  return {mean, std::sqrt(var / double(n))};
}

}  // namespace

TEST_CASE("analytic means") {
  CHECK(ServiceDist::constant(2.5).mean() == doctest::Approx(2.5));
  CHECK(ServiceDist::two_point(1.0, 5.0, 0.25).mean() == doctest::Approx(4.0));
  CHECK(ServiceDist::exponential(2.0).mean() == doctest::Approx(0.5));
  CHECK(ServiceDist::erlang(3, 2.0).mean() == doctest::Approx(1.5));
  CHECK(ServiceDist::geometric(0.25).mean() == doctest::Approx(4.0));
  CHECK(ServiceDist::discretized_log_normal(0.0).mean() == doctest::Approx(1.0));
  // the ceil(lognormal) family keeps its mean pinned inside (1, 2)
  for (double sigma : {0.3, 1.0, 1.5, 2.0, 3.0}) {
    double m = ServiceDist::discretized_log_normal(sigma).mean();
    CHECK(m > 1.0);
    CHECK(m < 2.0);
  }
}

TEST_CASE("empirical means agree with analytic means within 3 standard errors") {
  std::vector<ServiceDist> laws = {
      ServiceDist::constant(1.5),
      ServiceDist::two_point(1.0, 21.0, 0.5),
      ServiceDist::exponential(1.0),
      ServiceDist::erlang(4, 2.0),
      ServiceDist::discretized_log_normal(1.5),
      ServiceDist::geometric(0.3),
  };
  std::uint64_t seed = 11;
  for (const auto& dist : laws) {
    auto st = empirical_mean(dist, 400000, seed++);
    CHECK(std::abs(st.mean - dist.mean()) <= 3.0 * st.se + 1e-12);
  }
}

TEST_CASE("infimum of the support") {
  CHECK(ServiceDist::constant(2.5).ess_inf() == doctest::Approx(2.5));
  CHECK(ServiceDist::two_point(1.0, 5.0, 0.25).ess_inf() == doctest::Approx(1.0));
  CHECK(ServiceDist::exponential(2.0).ess_inf() == doctest::Approx(0.0));
  CHECK(ServiceDist::erlang(3, 2.0).ess_inf() == doctest::Approx(0.0));
  CHECK(ServiceDist::discretized_log_normal(1.0).ess_inf() == doctest::Approx(1.0));
  CHECK(ServiceDist::geometric(0.25).ess_inf() == doctest::Approx(1.0));
}

TEST_CASE("discreteness and finite support classification") {
  CHECK(ServiceDist::constant(2.0).is_discrete());
  CHECK(!ServiceDist::constant(2.5).is_discrete());
  CHECK(ServiceDist::two_point(1.0, 2.0, 0.5).is_discrete());
  CHECK(!ServiceDist::two_point(0.7, 2.3, 0.5).is_discrete());
  CHECK(!ServiceDist::exponential(1.0).is_discrete());
  CHECK(!ServiceDist::erlang(2, 1.0).is_discrete());
  CHECK(ServiceDist::discretized_log_normal(1.0).is_discrete());
  CHECK(ServiceDist::geometric(0.5).is_discrete());

  CHECK(ServiceDist::constant(2.5).finite_support());
  CHECK(ServiceDist::two_point(0.7, 2.3, 0.5).finite_support());
  CHECK(!ServiceDist::exponential(1.0).finite_support());
  CHECK(!ServiceDist::geometric(0.5).finite_support());
  CHECK(ServiceDist::geometric(1.0).finite_support());
  CHECK(ServiceDist::discretized_log_normal(0.0).finite_support());
  CHECK(!ServiceDist::discretized_log_normal(1.0).finite_support());

  auto tp = ServiceDist::two_point(1.0, 5.0, 0.25);
  REQUIRE(tp.support().size() == 2);
  CHECK(tp.support()[0] == 1.0);
  CHECK(tp.support()[1] == 5.0);
  CHECK(tp.probs()[0] + tp.probs()[1] == doctest::Approx(1.0));
  CHECK(tp.probs()[0] == doctest::Approx(0.25));
}

TEST_CASE("draws stay inside the support") {
  RngStream rng(3);
  auto dln = ServiceDist::discretized_log_normal(1.5);
  auto geo = ServiceDist::geometric(0.4);
  auto expo = ServiceDist::exponential(1.0);
  for (int i = 0; i < 5000; ++i) {
    double a = dln.draw(rng), b = geo.draw(rng), c = expo.draw(rng);
    CHECK(a >= 1.0);
    CHECK(a == std::floor(a));
    CHECK(b >= 1.0);
    CHECK(b == std::floor(b));
    CHECK(c > 0.0);
  }
  auto degenerate = ServiceDist::discretized_log_normal(0.0);
  for (int i = 0; i < 100; ++i) CHECK(degenerate.draw(rng) == 1.0);
}

TEST_CASE("two-point frequencies match the mixing weight") {
  auto tp = ServiceDist::two_point(1.0, 5.0, 0.3);
  RngStream rng(17);
  int n = 200000, low = 0;
  for (int i = 0; i < n; ++i)
    if (tp.draw(rng) == 1.0) ++low;
  double freq = double(low) / n;
  double se = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(freq - 0.3) <= 3.0 * se);
}

TEST_CASE("identical seeds replay identical draws") {
  auto dist = ServiceDist::erlang(3, 1.0);
  RngStream a(99), b(99), c(100);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    double x = dist.draw(a), y = dist.draw(b), z = dist.draw(c);
    all_equal = all_equal && (x == y);
    any_diff = any_diff || (x != z);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("constructor rejects out-of-range parameters") {
  CHECK_THROWS_AS(ServiceDist::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::two_point(2.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::two_point(1.0, 2.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::two_point(0.0, 2.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::erlang(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::erlang(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::discretized_log_normal(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::geometric(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ServiceDist::geometric(1.2), std::invalid_argument);
}
