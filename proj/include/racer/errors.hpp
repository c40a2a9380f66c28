#pragma once

#include <stdexcept>
#include <string>

namespace racer {

/// Violated precondition or interface contract (caller bug).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Track/config file failed to parse or validate.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config error [" + field + "]: " + what), field(field) {}
  std::string field;
};

/// Graph search found a layer with no feasible edges.
struct PlanningError : std::runtime_error {
  PlanningError(int layer, const std::string& what)
      : std::runtime_error("planning failed at layer " + std::to_string(layer) + ": " + what),
        layer(layer) {}
  int layer;
};

/// No acceleration scale reaches the requested total time.
struct StretchError : std::runtime_error {
  StretchError(double nearest_time, const std::string& what)
      : std::runtime_error(what), nearest_time(nearest_time) {}
  double nearest_time;  // closest achievable total time [s]
};

/// Simulation state became non-finite.
struct SimDivergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace racer
