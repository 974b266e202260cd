#include "ageopt/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ageopt/numeric.hpp"

namespace ageopt {

namespace {

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double gauss_neg_mi(double a, double delta) {
  // 0.5*log2(1 - (a^2)^delta); using pow on a^2 keeps negative a and real
  // delta well defined.
  double decay = std::pow(a * a, delta);
  return 0.5 * std::log2(1.0 - decay);
}

double binary_neg_mi(double q, double delta) {
  double corr = std::pow(1.0 - 2.0 * q, delta);
  return binary_entropy(0.5 * (1.0 - corr)) - 1.0;
}

void validate(const PenaltySpec& spec) {
  if (const auto* e = std::get_if<ExponentialPenalty>(&spec)) {
    if (!(e->alpha >= 0.0)) throw std::invalid_argument("exponential penalty: rate must be >= 0");
  } else if (const auto* p = std::get_if<PowerPenalty>(&spec)) {
    if (!(p->k >= 1.0)) throw std::invalid_argument("power penalty: exponent must be >= 1");
  } else if (const auto* s = std::get_if<StepPenalty>(&spec)) {
    if (!(s->a >= 0.0)) throw std::invalid_argument("step penalty: threshold must be >= 0");
  } else if (const auto* g = std::get_if<NegMutualInfoGaussPenalty>(&spec)) {
    if (!(g->a > -1.0 && g->a < 1.0))
      throw std::invalid_argument("gauss mutual-info penalty: coefficient must lie in (-1, 1)");
  } else if (const auto* b = std::get_if<NegMutualInfoBinaryPenalty>(&spec)) {
    if (!(b->q >= 0.0 && b->q <= 0.5))
      throw std::invalid_argument("binary mutual-info penalty: flip probability must lie in [0, 1/2]");
  } else if (const auto* t = std::get_if<TablePenalty>(&spec)) {
    if (t->breaks.empty() || t->breaks.size() != t->values.size())
      throw std::invalid_argument("table penalty: need equal, non-empty breaks and values");
    for (std::size_t i = 1; i < t->breaks.size(); ++i) {
      if (!(t->breaks[i] > t->breaks[i - 1]))
        throw std::invalid_argument("table penalty: breaks must be strictly increasing");
      if (t->values[i] < t->values[i - 1])
        throw std::invalid_argument("table penalty: values must be non-decreasing");
    }
    if (!(t->breaks.front() >= 0.0))
      throw std::invalid_argument("table penalty: breaks must be >= 0");
  }
}

// value of a left-continuous step table at x
double table_value(const TablePenalty& t, double x) {
  // p(x) = values[j] on (breaks[j], breaks[j+1]], values[0] for x <= breaks[0];
  // the jump at a break lands just after it
  if (x <= t.breaks.front()) return t.values.front();
  auto it = std::lower_bound(t.breaks.begin(), t.breaks.end(), x);
  // breaks strictly below x number (it - begin); the last of them owns x
  return t.values[std::size_t(it - t.breaks.begin()) - 1];
}

double table_integral(const TablePenalty& t, double s) {
  // integral over [0, s] of the step function; jumps are measure zero so the
  // continuity convention does not matter here
  double acc = 0.0;
  double lo = 0.0;
  double val = t.values.front();
  for (std::size_t j = 0; j < t.breaks.size(); ++j) {
    double b = std::max(t.breaks[j], 0.0);
    if (b >= s) break;
    acc += val * (std::max(b, lo) - lo);
    lo = std::max(b, lo);
    val = t.values[j];
  }
  acc += val * (s - lo);
  return acc;
}

}  // namespace

PenaltyFn::PenaltyFn(PenaltySpec spec) : spec_(std::move(spec)) { validate(spec_); }

bool PenaltyFn::finite_at_zero() const {
  return !std::holds_alternative<NegMutualInfoGaussPenalty>(spec_);
}

double PenaltyFn::operator()(double delta) const {
  if (!(delta >= 0.0)) throw std::domain_error("penalty: age must be >= 0");
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearPenalty>) {
          return delta;
        } else if constexpr (std::is_same_v<T, ExponentialPenalty>) {
          return std::expm1(v.alpha * delta);
        } else if constexpr (std::is_same_v<T, PowerPenalty>) {
          return std::pow(delta, v.k);
        } else if constexpr (std::is_same_v<T, StepPenalty>) {
          return delta >= v.a ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, NegMutualInfoGaussPenalty>) {
          if (delta == 0.0)
            throw std::domain_error("gauss mutual-info penalty: diverges at age 0");
          return gauss_neg_mi(v.a, delta);
        } else if constexpr (std::is_same_v<T, NegMutualInfoBinaryPenalty>) {
          return binary_neg_mi(v.q, delta);
        } else {
          return table_value(v, delta);
        }
      },
      spec_);
}

double PenaltyFn::left_limit(double delta) const {
  if (!(delta >= 0.0)) throw std::domain_error("penalty: age must be >= 0");
  if (const auto* s = std::get_if<StepPenalty>(&spec_)) {
    if (delta == s->a) return s->a == 0.0 ? 1.0 : 0.0;  // at 0 the domain starts closed
  }
  // every other variant is continuous from the left (the table by convention)
  return (*this)(delta);
}

double PenaltyFn::integral(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("penalty integral: bound must be >= 0");
  if (s == 0.0) return 0.0;
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearPenalty>) {
          return 0.5 * s * s;
        } else if constexpr (std::is_same_v<T, ExponentialPenalty>) {
          if (v.alpha == 0.0) return 0.0;
          return std::expm1(v.alpha * s) / v.alpha - s;
        } else if constexpr (std::is_same_v<T, PowerPenalty>) {
          return std::pow(s, v.k + 1.0) / (v.k + 1.0);
        } else if constexpr (std::is_same_v<T, StepPenalty>) {
          return std::max(s - v.a, 0.0);
        } else if constexpr (std::is_same_v<T, NegMutualInfoGaussPenalty>) {
          // integrable singularity at 0: split off a short head and linearize
          // 1 - (a^2)^t ~ c*t there
          if (v.a == 0.0) return 0.0;
          const double t0 = std::min(1e-12, 0.5 * s);
          double c = -std::log(v.a * v.a);
          double head = 0.5 * t0 * (std::log2(c * t0) - 1.0 / std::log(2.0));
          double tail = adaptive_simpson(
              [&](double t) { return gauss_neg_mi(v.a, t); }, t0, s, 1e-9);
          return head + tail;
        } else if constexpr (std::is_same_v<T, NegMutualInfoBinaryPenalty>) {
          return adaptive_simpson([&](double t) { return binary_neg_mi(v.q, t); },
                                  0.0, s, 1e-9);
        } else {
          return table_integral(v, s);
        }
      },
      spec_);
}

double PenaltyFn::cumsum(std::int64_t n) const {
  if (n < 0) throw std::domain_error("penalty cumsum: length must be >= 0");
  if (n == 0) return 0.0;
  if (!finite_at_zero())
    throw std::domain_error("gauss mutual-info penalty: sum including age 0 diverges");
  if (std::holds_alternative<LinearPenalty>(spec_))
    return 0.5 * double(n) * double(n - 1);
  if (const auto* e = std::get_if<ExponentialPenalty>(&spec_)) {
    if (e->alpha == 0.0) return 0.0;
    // sum of e^{alpha t} - 1 over t = 0..n-1
    return std::expm1(e->alpha * double(n)) / std::expm1(e->alpha) - double(n);
  }
  KahanSum acc;
  for (std::int64_t t = 0; t < n; ++t) acc.add((*this)(double(t)));
  return acc.value();
}

double PenaltyFn::sum_range(std::int64_t from, std::int64_t to) const {
  if (from < 0 || to < from) throw std::domain_error("penalty sum_range: bad range");
  if (from == to) return 0.0;
  if (finite_at_zero() &&
      (std::holds_alternative<LinearPenalty>(spec_) ||
       std::holds_alternative<ExponentialPenalty>(spec_)))
    return cumsum(to) - cumsum(from);
  if (from == 0 && !finite_at_zero())
    throw std::domain_error("gauss mutual-info penalty: sum including age 0 diverges");
  KahanSum acc;
  for (std::int64_t t = from; t < to; ++t) acc.add((*this)(double(t)));
  return acc.value();
}

std::string PenaltyFn::describe() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearPenalty>) return "linear";
        else if constexpr (std::is_same_v<T, ExponentialPenalty>)
          return "exponential(" + std::to_string(v.alpha) + ")";
        else if constexpr (std::is_same_v<T, PowerPenalty>)
          return "power(" + std::to_string(v.k) + ")";
        else if constexpr (std::is_same_v<T, StepPenalty>)
          return "step(" + std::to_string(v.a) + ")";
        else if constexpr (std::is_same_v<T, NegMutualInfoGaussPenalty>)
          return "neg_mi_gauss(" + std::to_string(v.a) + ")";
        else if constexpr (std::is_same_v<T, NegMutualInfoBinaryPenalty>)
          return "neg_mi_binary(" + std::to_string(v.q) + ")";
        else
          return "table[" + std::to_string(v.breaks.size()) + "]";
      },
      spec_);
}

double PenaltyPrefixSums::sum_range(std::int64_t from, std::int64_t to) {
  if (from < 0 || to < from) throw std::domain_error("penalty sum_range: bad range");
  if (from == to) return 0.0;
  grow(to);
  double head = 0.0;
  if (from == 0) head = (*p_)(0.0);  // throws for the Gauss variant, as it must
  std::int64_t lo = std::max<std::int64_t>(from, 1);
  return head + prefix_[std::size_t(to)] - prefix_[std::size_t(lo)];
}

void PenaltyPrefixSums::grow(std::int64_t n) {
  while (std::int64_t(prefix_.size()) <= n) {
    std::int64_t t = std::int64_t(prefix_.size()) - 1;
    prefix_.push_back(prefix_.back() + (*p_)(double(t)));
  }
}

}  // namespace ageopt
