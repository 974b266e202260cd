#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ageopt/expectation.hpp"
#include "ageopt/penalty.hpp"
#include "ageopt/service.hpp"
#include "ageopt/sources.hpp"

namespace ageopt {

// Bad or inconsistent user input; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PenaltySpec penalty_from_json(const nlohmann::json& j);
nlohmann::json penalty_to_json(const PenaltySpec& spec);

ServiceSpec service_from_json(const nlohmann::json& j);
nlohmann::json service_to_json(const ServiceSpec& spec);

MarkovSource source_from_json(const nlohmann::json& j);
nlohmann::json source_to_json(const MarkovSource& src);

struct ExperimentConfig {
  PenaltySpec penalty = LinearPenalty{};
  ServiceSpec service = ConstantService{1.0};
  std::optional<MarkovSource> source;  // when set and no penalty given, the
                                       // penalty is the negated information law
  bool penalty_from_source = false;
  TimeMode mode = TimeMode::Continuous;
  double f_max = std::numeric_limits<double>::infinity();
  double horizon = 200000.0;
  std::int64_t n_cycles = 100000;
  std::size_t pool_size = 100000;
  double eps = 0.0;  // 0 = automatic
  std::uint64_t seed = 1;
  double initial_age = 0.0;

  // simulate: which policy to run
  std::string policy = "optimal";  // optimal | zero_wait | uniform | threshold
  std::optional<double> beta;      // for policy=threshold

  // sweep
  std::string sweep_axis;  // a | q | f_max | alpha_exp | sigma
  std::vector<double> sweep_values;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Applies one sweep axis value, retuning penalty/source/service/f_max as the
// axis demands; throws ConfigError if the config lacks the matching knob.
ExperimentConfig apply_sweep_value(const ExperimentConfig& base, const std::string& axis,
                                   double value);

}  // namespace ageopt
