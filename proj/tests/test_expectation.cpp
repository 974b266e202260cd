// Expectation-engine tests: exact enumeration for finite support, Monte
// Carlo pools with common random numbers, the compressed discrete pool,
// monotonicity in the age offset, and the finiteness guard.

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "doctest.h"

#include "ageopt/expectation.hpp"
#include "ageopt/numeric.hpp"

using namespace ageopt;

TEST_CASE("finite support is enumerated exactly") {
  auto dist = ServiceDist::two_point(1.0, 2.0, 0.5);
  ExpectationEngine ev(dist, TimeMode::Discrete, 10, 1);
  CHECK(ev.exact());
  CHECK(ev.sample_count() == 0);
  CHECK(ev.successor_mean() == doctest::Approx(1.5));
  CHECK(ev.first_mean() == doctest::Approx(1.5));

  // product measure over consecutive cycles: 4 pairs, weight 1/4 each
  REQUIRE(ev.pair_y().size() == 4);
  double wsum = 0.0;
  for (double w : ev.pair_w()) wsum += w;
  CHECK(wsum == doctest::Approx(1.0));

  auto lin = PenaltyFn::linear();
  CHECK(ev.expected_after(lin, 3.0) == doctest::Approx(4.5));
  CHECK(ev.expected_after(lin, 0.0) == doctest::Approx(1.5));
}

TEST_CASE("discrete mode refuses non-integer service laws") {
  CHECK_THROWS_AS(
      ExpectationEngine(ServiceDist::exponential(1.0), TimeMode::Discrete, 10, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      ExpectationEngine(ServiceDist::two_point(0.7, 2.3, 0.5), TimeMode::Discrete, 10, 1),
      std::invalid_argument);
  // continuous mode takes non-integer finite support just fine
  ExpectationEngine ok(ServiceDist::two_point(0.7, 2.3, 0.5), TimeMode::Continuous, 10, 1);
  CHECK(ok.exact());
  CHECK(ok.successor_mean() == doctest::Approx(1.5));
}

TEST_CASE("Monte Carlo pools estimate the same expectations") {
  auto dist = ServiceDist::exponential(1.0);
  ExpectationEngine ev(dist, TimeMode::Continuous, 60000, 5);
  CHECK(!ev.exact());
  CHECK(ev.sample_count() == 60000);

  auto lin = PenaltyFn::linear();
  // E[2 + Y'] = 3 for a unit-rate exponential successor
  CHECK(ev.expected_after(lin, 2.0) == doctest::Approx(3.0).epsilon(0.02));
  CHECK(ev.successor_mean() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(ev.first_mean() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("identical seeds rebuild identical pools") {
  auto dist = ServiceDist::erlang(2, 1.0);
  ExpectationEngine a(dist, TimeMode::Continuous, 5000, 9);
  ExpectationEngine b(dist, TimeMode::Continuous, 5000, 9);
  ExpectationEngine c(dist, TimeMode::Continuous, 5000, 10);
  REQUIRE(a.pair_y().size() == b.pair_y().size());
  bool identical = true;
  for (std::size_t i = 0; i < a.pair_y().size(); ++i)
    identical = identical && a.pair_y()[i] == b.pair_y()[i] &&
                a.pair_y2()[i] == b.pair_y2()[i];
  CHECK(identical);
  auto lin = PenaltyFn::linear();
  CHECK(a.expected_after(lin, 1.0) == b.expected_after(lin, 1.0));
  CHECK(a.expected_after(lin, 1.0) != c.expected_after(lin, 1.0));
}

TEST_CASE("discrete Monte Carlo pools compress to distinct pairs") {
  auto dist = ServiceDist::geometric(0.5);
  ExpectationEngine ev(dist, TimeMode::Discrete, 40000, 3);
  CHECK(!ev.exact());
  CHECK(ev.sample_count() == 40000);
  // far fewer distinct (y, y') pairs than raw draws, and no duplicates
  CHECK(ev.pair_y().size() < 2000);
  std::map<std::pair<double, double>, int> seen;
  double wsum = 0.0;
  for (std::size_t i = 0; i < ev.pair_y().size(); ++i) {
    ++seen[{ev.pair_y()[i], ev.pair_y2()[i]}];
    wsum += ev.pair_w()[i];
  }
  for (const auto& [k, n] : seen) CHECK(n == 1);
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

  auto lin = PenaltyFn::linear();
  // E[1 + Y'] = 3 for a mean-2 geometric successor
  CHECK(ev.expected_after(lin, 1.0) == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("expected penalty grows with the age offset") {
  auto dist = ServiceDist::exponential(0.7);
  ExpectationEngine ev(dist, TimeMode::Continuous, 20000, 21);
  for (const auto& p : {PenaltyFn::power(1.7), PenaltyFn::step(2.0),
                        PenaltyFn::neg_mutual_info_binary(0.15)}) {
    double prev = ev.expected_after(p, 0.0);
    for (double d = 0.5; d < 12.0; d += 0.5) {
      double cur = ev.expected_after(p, d);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("left-limit expectations see the value before a jump") {
  auto dist = ServiceDist::constant(1.0);
  ExpectationEngine ev(dist, TimeMode::Discrete, 10, 1);
  auto step = PenaltyFn::step(3.0);
  CHECK(ev.expected_after(step, 2.0) == doctest::Approx(1.0));       // p(3) = 1
  CHECK(ev.expected_after_left(step, 2.0) == doctest::Approx(0.0));  // p(3-) = 0
}

TEST_CASE("non-finite expectations are reported, not returned") {
  auto dist = ServiceDist::exponential(1.0);
  ExpectationEngine ev(dist, TimeMode::Continuous, 2000, 2);
  auto hot = PenaltyFn::exponential(800.0);  // e^{800 Y'} overflows
  CHECK_THROWS_AS(expected_penalty_after_service(hot, ev, 1.0), NumericError);
  auto lin = PenaltyFn::linear();
  CHECK(expected_penalty_after_service(lin, ev, 1.0) ==
        doctest::Approx(ev.expected_after(lin, 1.0)));
}
