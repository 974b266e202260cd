#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ageopt {

// Age penalty catalog. Every variant is non-decreasing on [0, inf); negative
// values are allowed (the mutual-information variants are utilities with the
// sign flipped).

struct LinearPenalty {
  friend bool operator==(const LinearPenalty&, const LinearPenalty&) = default;
};                    // p(d) = d
struct ExponentialPenalty {  // p(d) = e^{alpha d} - 1, alpha >= 0
  double alpha = 1.0;
  friend bool operator==(const ExponentialPenalty&, const ExponentialPenalty&) = default;
};
struct PowerPenalty {  // p(d) = d^k, k >= 1
  double k = 2.0;
  friend bool operator==(const PowerPenalty&, const PowerPenalty&) = default;
};
struct StepPenalty {  // p(d) = 1{d >= a}
  double a = 0.0;
  friend bool operator==(const StepPenalty&, const StepPenalty&) = default;
};
// p(d) = 0.5*log2(1 - a^(2d)); negated mutual information of a scalar
// Gauss-Markov state observed d time units ago. Diverges at d = 0.
struct NegMutualInfoGaussPenalty {
  double a = 0.9;
  friend bool operator==(const NegMutualInfoGaussPenalty&, const NegMutualInfoGaussPenalty&) = default;
};
// p(d) = h2((1 - (1-2q)^d)/2) - 1 for a symmetric binary Markov chain with
// flip probability q; bounded in [-1, 0].
struct NegMutualInfoBinaryPenalty {
  double q = 0.1;
  friend bool operator==(const NegMutualInfoBinaryPenalty&, const NegMutualInfoBinaryPenalty&) = default;
};
// Left-continuous step table: p(x) = values[j] on (breaks[j], breaks[j+1]],
// and values[0] for x <= breaks[0].
struct TablePenalty {
  std::vector<double> breaks;
  std::vector<double> values;
  friend bool operator==(const TablePenalty&, const TablePenalty&) = default;
};

using PenaltySpec =
    std::variant<LinearPenalty, ExponentialPenalty, PowerPenalty, StepPenalty,
                 NegMutualInfoGaussPenalty, NegMutualInfoBinaryPenalty, TablePenalty>;

class PenaltyFn {
 public:
  explicit PenaltyFn(PenaltySpec spec);

  static PenaltyFn linear() { return PenaltyFn(LinearPenalty{}); }
  static PenaltyFn exponential(double alpha) { return PenaltyFn(ExponentialPenalty{alpha}); }
  static PenaltyFn power(double k) { return PenaltyFn(PowerPenalty{k}); }
  static PenaltyFn step(double a) { return PenaltyFn(StepPenalty{a}); }
  static PenaltyFn neg_mutual_info_gauss(double a) {
    return PenaltyFn(NegMutualInfoGaussPenalty{a});
  }
  static PenaltyFn neg_mutual_info_binary(double q) {
    return PenaltyFn(NegMutualInfoBinaryPenalty{q});
  }
  static PenaltyFn table(std::vector<double> breaks, std::vector<double> values) {
    return PenaltyFn(TablePenalty{std::move(breaks), std::move(values)});
  }

  // p(delta); throws std::domain_error for delta < 0 and for the Gauss
  // mutual-information variant at delta = 0 (the value diverges there).
  double operator()(double delta) const;

  // lim_{t -> delta-} p(t); equals p(delta) wherever p is continuous.
  double left_limit(double delta) const;

  // v(s) = integral of p over [0, s]. Closed form where available, adaptive
  // Simpson (abs tol 1e-9) otherwise.
  double integral(double s) const;

  // V(n) = sum_{t=0}^{n-1} p(t). Includes p(0); diverges for the Gauss
  // mutual-information variant (throws).
  double cumsum(std::int64_t n) const;

  // sum_{t=from}^{to-1} p(t); safe for the Gauss variant when from >= 1.
  double sum_range(std::int64_t from, std::int64_t to) const;

  const PenaltySpec& spec() const { return spec_; }
  bool finite_at_zero() const;
  std::string describe() const;

 private:
  PenaltySpec spec_;
};

// Lazily grown prefix table of sum_{t=1}^{n-1} p(t) for one penalty, so a
// solver or simulator can take many integer range sums in O(1) each. Not
// shareable across threads; each consumer owns its instance.
class PenaltyPrefixSums {
 public:
  explicit PenaltyPrefixSums(const PenaltyFn& p) : p_(&p) {}

  // sum_{t=from}^{to-1} p(t)
  double sum_range(std::int64_t from, std::int64_t to);

 private:
  void grow(std::int64_t n);

  const PenaltyFn* p_;
  std::vector<double> prefix_{0.0, 0.0};  // prefix_[n] = sum_{t=1}^{n-1} p(t)
};

}  // namespace ageopt
