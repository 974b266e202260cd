#include "ageopt/config.hpp"

#include <cmath>

namespace ageopt {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError(std::string("missing or non-numeric field \"") + key + "\"");
  return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError(std::string("field \"") + key + "\" must be a number");
  return j[key].get<double>();
}

std::string require_kind(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ConfigError(std::string(what) + ": expected an object with a \"kind\" field");
  return j["kind"].get<std::string>();
}

}  // namespace

PenaltySpec penalty_from_json(const json& j) {
  std::string kind = require_kind(j, "penalty");
  if (kind == "linear") return LinearPenalty{};
  if (kind == "exponential") return ExponentialPenalty{require_number(j, "alpha")};
  if (kind == "power") return PowerPenalty{require_number(j, "k")};
  if (kind == "step") return StepPenalty{require_number(j, "a")};
  if (kind == "neg_mi_gauss") return NegMutualInfoGaussPenalty{require_number(j, "a")};
  if (kind == "neg_mi_binary") return NegMutualInfoBinaryPenalty{require_number(j, "q")};
  if (kind == "table") {
    if (!j.contains("breaks") || !j.contains("values") || !j["breaks"].is_array() ||
        !j["values"].is_array())
      throw ConfigError("table penalty: need \"breaks\" and \"values\" arrays");
    TablePenalty t;
    for (const auto& b : j["breaks"]) t.breaks.push_back(b.get<double>());
    for (const auto& v : j["values"]) t.values.push_back(v.get<double>());
    return t;
  }
  throw ConfigError("unknown penalty kind \"" + kind + "\"");
}

json penalty_to_json(const PenaltySpec& spec) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearPenalty>) {
          return {{"kind", "linear"}};
        } else if constexpr (std::is_same_v<T, ExponentialPenalty>) {
          return {{"kind", "exponential"}, {"alpha", v.alpha}};
        } else if constexpr (std::is_same_v<T, PowerPenalty>) {
          return {{"kind", "power"}, {"k", v.k}};
        } else if constexpr (std::is_same_v<T, StepPenalty>) {
          return {{"kind", "step"}, {"a", v.a}};
        } else if constexpr (std::is_same_v<T, NegMutualInfoGaussPenalty>) {
          return {{"kind", "neg_mi_gauss"}, {"a", v.a}};
        } else if constexpr (std::is_same_v<T, NegMutualInfoBinaryPenalty>) {
          return {{"kind", "neg_mi_binary"}, {"q", v.q}};
        } else {
          return {{"kind", "table"}, {"breaks", v.breaks}, {"values", v.values}};
        }
      },
      spec);
}

ServiceSpec service_from_json(const json& j) {
  std::string kind = require_kind(j, "service");
  if (kind == "constant") return ConstantService{require_number(j, "y")};
  if (kind == "two_point")
    return TwoPointService{require_number(j, "y1"), require_number(j, "y2"),
                           number_or(j, "p1", 0.5)};
  if (kind == "exponential") return ExponentialService{require_number(j, "rate")};
  if (kind == "erlang")
    return ErlangService{int(require_number(j, "shape")), require_number(j, "rate")};
  if (kind == "discretized_log_normal")
    return DiscretizedLogNormalService{require_number(j, "sigma")};
  if (kind == "geometric") return GeometricService{require_number(j, "p")};
  throw ConfigError("unknown service kind \"" + kind + "\"");
}

json service_to_json(const ServiceSpec& spec) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantService>) {
          return {{"kind", "constant"}, {"y", v.y}};
        } else if constexpr (std::is_same_v<T, TwoPointService>) {
          return {{"kind", "two_point"}, {"y1", v.y1}, {"y2", v.y2}, {"p1", v.p1}};
        } else if constexpr (std::is_same_v<T, ExponentialService>) {
          return {{"kind", "exponential"}, {"rate", v.rate}};
        } else if constexpr (std::is_same_v<T, ErlangService>) {
          return {{"kind", "erlang"}, {"shape", v.shape}, {"rate", v.rate}};
        } else if constexpr (std::is_same_v<T, DiscretizedLogNormalService>) {
          return {{"kind", "discretized_log_normal"}, {"sigma", v.sigma}};
        } else {
          return {{"kind", "geometric"}, {"p", v.p}};
        }
      },
      spec);
}

MarkovSource source_from_json(const json& j) {
  std::string kind = require_kind(j, "source");
  if (kind == "gauss_markov")
    return GaussMarkov{require_number(j, "a"), number_or(j, "sigma2", 1.0)};
  if (kind == "binary_markov") return BinaryMarkov{require_number(j, "q")};
  throw ConfigError("unknown source kind \"" + kind + "\"");
}

json source_to_json(const MarkovSource& src) {
  if (const auto* g = std::get_if<GaussMarkov>(&src))
    return {{"kind", "gauss_markov"}, {"a", g->a}, {"sigma2", g->sigma2}};
  const auto& b = std::get<BinaryMarkov>(src);
  return {{"kind", "binary_markov"}, {"q", b.q}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;

  if (j.contains("source")) cfg.source = source_from_json(j["source"]);
  if (j.contains("penalty")) {
    cfg.penalty = penalty_from_json(j["penalty"]);
  } else if (cfg.source) {
    cfg.penalty = mi_penalty(*cfg.source).spec();
    cfg.penalty_from_source = true;
  } else {
    throw ConfigError("config needs a \"penalty\" (or a \"source\" to derive one)");
  }
  if (!j.contains("service")) throw ConfigError("config needs a \"service\"");
  cfg.service = service_from_json(j["service"]);

  if (j.contains("mode")) {
    std::string m = j["mode"].get<std::string>();
    if (m == "continuous")
      cfg.mode = TimeMode::Continuous;
    else if (m == "discrete")
      cfg.mode = TimeMode::Discrete;
    else
      throw ConfigError("mode must be \"continuous\" or \"discrete\"");
  }

  if (j.contains("f_max")) {
    const auto& f = j["f_max"];
    if (f.is_null() || (f.is_string() && f.get<std::string>() == "inf"))
      cfg.f_max = std::numeric_limits<double>::infinity();
    else if (f.is_number())
      cfg.f_max = f.get<double>();
    else
      throw ConfigError("f_max must be a number, \"inf\", or null");
    if (!(cfg.f_max > 0.0)) throw ConfigError("f_max must be positive");
  }

  cfg.horizon = number_or(j, "horizon", cfg.horizon);
  cfg.n_cycles = std::int64_t(number_or(j, "n_cycles", double(cfg.n_cycles)));
  cfg.pool_size = std::size_t(number_or(j, "pool_size", double(cfg.pool_size)));
  cfg.eps = number_or(j, "eps", cfg.eps);
  cfg.seed = std::uint64_t(number_or(j, "seed", double(cfg.seed)));
  cfg.initial_age = number_or(j, "initial_age", 0.0);
  if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (cfg.n_cycles < 1) throw ConfigError("n_cycles must be >= 1");
  if (!(cfg.initial_age >= 0.0)) throw ConfigError("initial_age must be >= 0");

  if (j.contains("policy")) {
    cfg.policy = j["policy"].get<std::string>();
    if (cfg.policy != "optimal" && cfg.policy != "zero_wait" && cfg.policy != "uniform" &&
        cfg.policy != "threshold")
      throw ConfigError("policy must be optimal, zero_wait, uniform, or threshold");
  }
  if (j.contains("beta")) cfg.beta = require_number(j, "beta");
  if (cfg.policy == "threshold" && !cfg.beta)
    throw ConfigError("policy \"threshold\" needs a \"beta\"");

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (!s.is_object() || !s.contains("axis") || !s.contains("values"))
      throw ConfigError("sweep needs \"axis\" and \"values\"");
    cfg.sweep_axis = s["axis"].get<std::string>();
    for (const auto& v : s["values"]) cfg.sweep_values.push_back(v.get<double>());
    if (cfg.sweep_values.empty()) throw ConfigError("sweep values must be non-empty");
  }

  // construction validates parameter ranges; surface those as config errors
  try {
    PenaltyFn check_p(cfg.penalty);
    ServiceDist check_s(cfg.service);
    if (cfg.mode == TimeMode::Discrete && !check_s.is_discrete())
      throw ConfigError("discrete mode needs an integer-valued service law");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (!cfg.penalty_from_source) j["penalty"] = penalty_to_json(cfg.penalty);
  if (cfg.source) j["source"] = source_to_json(*cfg.source);
  j["service"] = service_to_json(cfg.service);
  j["mode"] = cfg.mode == TimeMode::Continuous ? "continuous" : "discrete";
  if (std::isfinite(cfg.f_max))
    j["f_max"] = cfg.f_max;
  else
    j["f_max"] = "inf";
  j["horizon"] = cfg.horizon;
  j["n_cycles"] = cfg.n_cycles;
  j["pool_size"] = cfg.pool_size;
  if (cfg.eps > 0.0) j["eps"] = cfg.eps;
  j["seed"] = cfg.seed;
  if (cfg.initial_age != 0.0) j["initial_age"] = cfg.initial_age;
  j["policy"] = cfg.policy;
  if (cfg.beta) j["beta"] = *cfg.beta;
  if (!cfg.sweep_axis.empty())
    j["sweep"] = {{"axis", cfg.sweep_axis}, {"values", cfg.sweep_values}};
  return j;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base, const std::string& axis,
                                   double value) {
  ExperimentConfig cfg = base;
  auto rederive = [&]() {
    if (cfg.penalty_from_source && cfg.source)
      cfg.penalty = mi_penalty(*cfg.source).spec();
  };
  if (axis == "f_max") {
    if (!(value > 0.0)) throw ConfigError("sweep f_max values must be positive");
    cfg.f_max = value;
  } else if (axis == "alpha_exp") {
    if (!std::holds_alternative<ExponentialPenalty>(cfg.penalty))
      throw ConfigError("sweep axis alpha_exp needs an exponential penalty");
    std::get<ExponentialPenalty>(cfg.penalty).alpha = value;
  } else if (axis == "sigma") {
    if (!std::holds_alternative<DiscretizedLogNormalService>(cfg.service))
      throw ConfigError("sweep axis sigma needs a discretized log-normal service law");
    std::get<DiscretizedLogNormalService>(cfg.service).sigma = value;
  } else if (axis == "a") {
    if (cfg.source && std::holds_alternative<GaussMarkov>(*cfg.source)) {
      std::get<GaussMarkov>(*cfg.source).a = value;
      rederive();
    } else if (std::holds_alternative<NegMutualInfoGaussPenalty>(cfg.penalty)) {
      std::get<NegMutualInfoGaussPenalty>(cfg.penalty).a = value;
    } else {
      throw ConfigError("sweep axis a needs a gauss-markov source or neg_mi_gauss penalty");
    }
  } else if (axis == "q") {
    if (cfg.source && std::holds_alternative<BinaryMarkov>(*cfg.source)) {
      std::get<BinaryMarkov>(*cfg.source).q = value;
      rederive();
    } else if (std::holds_alternative<NegMutualInfoBinaryPenalty>(cfg.penalty)) {
      std::get<NegMutualInfoBinaryPenalty>(cfg.penalty).q = value;
    } else {
      throw ConfigError("sweep axis q needs a binary-markov source or neg_mi_binary penalty");
    }
  } else {
    throw ConfigError("unknown sweep axis \"" + axis + "\"");
  }
  // re-validate the retuned specs
  try {
    PenaltyFn check_p(cfg.penalty);
    ServiceDist check_s(cfg.service);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace ageopt
