#include "ageopt/service.hpp"

#include <cmath>
#include <stdexcept>

#include "ageopt/numeric.hpp"

namespace ageopt {

namespace {

void validate(const ServiceSpec& spec) {
  if (const auto* c = std::get_if<ConstantService>(&spec)) {
    if (!(c->y > 0.0)) throw std::invalid_argument("constant service: value must be > 0");
  } else if (const auto* t = std::get_if<TwoPointService>(&spec)) {
    if (!(t->y1 > 0.0 && t->y2 > t->y1))
      throw std::invalid_argument("two-point service: need 0 < y1 < y2");
    if (!(t->p1 > 0.0 && t->p1 < 1.0))
      throw std::invalid_argument("two-point service: p1 must lie in (0, 1)");
  } else if (const auto* e = std::get_if<ExponentialService>(&spec)) {
    if (!(e->rate > 0.0)) throw std::invalid_argument("exponential service: rate must be > 0");
  } else if (const auto* g = std::get_if<ErlangService>(&spec)) {
    if (g->shape < 1 || !(g->rate > 0.0))
      throw std::invalid_argument("erlang service: need shape >= 1 and rate > 0");
  } else if (const auto* d = std::get_if<DiscretizedLogNormalService>(&spec)) {
    if (!(d->sigma >= 0.0))
      throw std::invalid_argument("discretized log-normal service: sigma must be >= 0");
  } else if (const auto* p = std::get_if<GeometricService>(&spec)) {
    if (!(p->p > 0.0 && p->p <= 1.0))
      throw std::invalid_argument("geometric service: p must lie in (0, 1]");
  }
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// E[ceil(exp(sigma X - sigma^2/2))] = sum_{k>=0} P[exp(sigma X - sigma^2/2) > k];
// the k = 0 term is 1. Tail terms decay like a log-normal survival function, so
// the series is summed until terms drop below 1e-13.
double discretized_log_normal_mean(double sigma) {
  if (sigma == 0.0) return 1.0;
  KahanSum acc;
  acc.add(1.0);
  for (long k = 1; k < 200000000L; ++k) {
    double term = normal_upper_tail((std::log(double(k)) + 0.5 * sigma * sigma) / sigma);
    acc.add(term);
    if (term < 1e-13) break;
  }
  return acc.value();
}

}  // namespace

ServiceDist::ServiceDist(ServiceSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  if (const auto* c = std::get_if<ConstantService>(&spec_)) {
    mean_ = c->y;
    support_ = {c->y};
    probs_ = {1.0};
  } else if (const auto* t = std::get_if<TwoPointService>(&spec_)) {
    mean_ = t->p1 * t->y1 + (1.0 - t->p1) * t->y2;
    support_ = {t->y1, t->y2};
    probs_ = {t->p1, 1.0 - t->p1};
  } else if (const auto* e = std::get_if<ExponentialService>(&spec_)) {
    mean_ = 1.0 / e->rate;
  } else if (const auto* g = std::get_if<ErlangService>(&spec_)) {
    mean_ = double(g->shape) / g->rate;
  } else if (const auto* d = std::get_if<DiscretizedLogNormalService>(&spec_)) {
    mean_ = discretized_log_normal_mean(d->sigma);
    if (d->sigma == 0.0) {
      support_ = {1.0};
      probs_ = {1.0};
    }
  } else if (const auto* p = std::get_if<GeometricService>(&spec_)) {
    mean_ = 1.0 / p->p;
    if (p->p == 1.0) {
      support_ = {1.0};
      probs_ = {1.0};
    }
  }
}

double ServiceDist::draw(RngStream& rng) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantService>) {
          return v.y;
        } else if constexpr (std::is_same_v<T, TwoPointService>) {
          return rng.next_unit() < v.p1 ? v.y1 : v.y2;
        } else if constexpr (std::is_same_v<T, ExponentialService>) {
          return rng.next_exp() / v.rate;
        } else if constexpr (std::is_same_v<T, ErlangService>) {
          double s = 0.0;
          for (int i = 0; i < v.shape; ++i) s += rng.next_exp();
          return s / v.rate;
        } else if constexpr (std::is_same_v<T, DiscretizedLogNormalService>) {
          if (v.sigma == 0.0) return 1.0;
          double w = std::exp(v.sigma * rng.next_normal() - 0.5 * v.sigma * v.sigma);
          return std::max(1.0, std::ceil(w));
        } else {
          if (v.p == 1.0) return 1.0;
          double u = rng.next_unit();
          return std::max(1.0, std::ceil(std::log1p(-u) / std::log1p(-v.p)));
        }
      },
      spec_);
}

double ServiceDist::ess_inf() const {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantService>) return v.y;
        else if constexpr (std::is_same_v<T, TwoPointService>) return v.y1;
        else if constexpr (std::is_same_v<T, ExponentialService>) return 0.0;
        else if constexpr (std::is_same_v<T, ErlangService>) return 0.0;
        else if constexpr (std::is_same_v<T, DiscretizedLogNormalService>) return 1.0;
        else return 1.0;
      },
      spec_);
}

bool ServiceDist::is_discrete() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantService>) {
          return is_integral_value(v.y);
        } else if constexpr (std::is_same_v<T, TwoPointService>) {
          return is_integral_value(v.y1) && is_integral_value(v.y2);
        } else if constexpr (std::is_same_v<T, ExponentialService>) {
          return false;
        } else if constexpr (std::is_same_v<T, ErlangService>) {
          return false;
        } else {
          return true;
        }
      },
      spec_);
}

std::string ServiceDist::describe() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantService>)
          return "constant(" + std::to_string(v.y) + ")";
        else if constexpr (std::is_same_v<T, TwoPointService>)
          return "two_point(" + std::to_string(v.y1) + "," + std::to_string(v.y2) + ";" +
                 std::to_string(v.p1) + ")";
        else if constexpr (std::is_same_v<T, ExponentialService>)
          return "exponential(" + std::to_string(v.rate) + ")";
        else if constexpr (std::is_same_v<T, ErlangService>)
          return "erlang(" + std::to_string(v.shape) + "," + std::to_string(v.rate) + ")";
        else if constexpr (std::is_same_v<T, DiscretizedLogNormalService>)
          return "discretized_log_normal(" + std::to_string(v.sigma) + ")";
        else
          return "geometric(" + std::to_string(v.p) + ")";
      },
      spec_);
}

}  // namespace ageopt
