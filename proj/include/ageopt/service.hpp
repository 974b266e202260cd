#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ageopt/rng.hpp"

namespace ageopt {

// Service-time laws for the queue between sampler and receiver. Discrete
// variants draw positive integers, continuous ones positive reals; Constant
// and TwoPoint count as discrete when their values are integers.

struct ConstantService {
  double y = 1.0;
  friend bool operator==(const ConstantService&, const ConstantService&) = default;
};
struct TwoPointService {
  double y1 = 1.0;
  double y2 = 2.0;
  double p1 = 0.5;
  friend bool operator==(const TwoPointService&, const TwoPointService&) = default;
};
struct ExponentialService {
  double rate = 1.0;
  friend bool operator==(const ExponentialService&, const ExponentialService&) = default;
};
struct ErlangService {
  int shape = 2;
  double rate = 1.0;
  friend bool operator==(const ErlangService&, const ErlangService&) = default;
};
// ceil(exp(sigma*X) / exp(sigma^2/2)) with X standard normal; mean lies in
// (1, 2) for every sigma > 0, and sigma = 0 degenerates to the constant 1.
struct DiscretizedLogNormalService {
  double sigma = 1.0;
  friend bool operator==(const DiscretizedLogNormalService&, const DiscretizedLogNormalService&) = default;
};
struct GeometricService {  // trials to first success, support 1,2,...
  double p = 0.5;
  friend bool operator==(const GeometricService&, const GeometricService&) = default;
};

using ServiceSpec =
    std::variant<ConstantService, TwoPointService, ExponentialService, ErlangService,
                 DiscretizedLogNormalService, GeometricService>;

class ServiceDist {
 public:
  explicit ServiceDist(ServiceSpec spec);

  static ServiceDist constant(double y) { return ServiceDist(ConstantService{y}); }
  static ServiceDist two_point(double y1, double y2, double p1) {
    return ServiceDist(TwoPointService{y1, y2, p1});
  }
  static ServiceDist exponential(double rate) { return ServiceDist(ExponentialService{rate}); }
  static ServiceDist erlang(int shape, double rate) {
    return ServiceDist(ErlangService{shape, rate});
  }
  static ServiceDist discretized_log_normal(double sigma) {
    return ServiceDist(DiscretizedLogNormalService{sigma});
  }
  static ServiceDist geometric(double p) { return ServiceDist(GeometricService{p}); }

  double draw(RngStream& rng) const;
  double mean() const { return mean_; }
  double ess_inf() const;

  // all samples are positive integers
  bool is_discrete() const;
  // support small enough to enumerate exactly
  bool finite_support() const { return !support_.empty(); }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  const ServiceSpec& spec() const { return spec_; }
  std::string describe() const;

 private:
  ServiceSpec spec_;
  double mean_ = 0.0;
  std::vector<double> support_;  // empty unless finite support
  std::vector<double> probs_;
};

}  // namespace ageopt
