#pragma once

#include <cstdint>
#include <variant>

#include "ageopt/penalty.hpp"
#include "ageopt/service.hpp"

namespace ageopt {

// Signal models behind the freshness metrics. Only their information laws
// matter here: how much a sample from `delta` slots ago still says about the
// current state.

struct GaussMarkov {
  double a = 0.9;       // one-step correlation, in (-1, 1)
  double sigma2 = 1.0;  // innovation variance; the information law does not depend on it
  friend bool operator==(const GaussMarkov&, const GaussMarkov&) = default;
};

struct BinaryMarkov {
  double q = 0.1;  // per-slot flip probability, in [0, 1/2]
  friend bool operator==(const BinaryMarkov&, const BinaryMarkov&) = default;
};

using MarkovSource = std::variant<GaussMarkov, BinaryMarkov>;

// I(X_t ; X_{t-delta}) in bits. Infinite for the Gauss-Markov model at
// delta = 0 (throws std::domain_error); 1 bit for the binary model there.
double mutual_info(const MarkovSource& src, std::int64_t delta);

// H(X_t | X_{t-delta}) in bits, binary model only.
double conditional_entropy(const BinaryMarkov& src, std::int64_t delta);

// The matching age penalty: p(delta) = -I(delta), so minimizing average
// penalty maximizes average freshness of the received samples.
PenaltyFn mi_penalty(const MarkovSource& src);

// E_Y[ I(gap + Y) ]: information the receiver will have once a sample taken
// `gap` slots after the last delivery gets through the queue. Needs an
// enumerable service law.
double conditional_mi_given_service(const MarkovSource& src, const ServiceDist& dist,
                                    std::int64_t gap);

}  // namespace ageopt
