#pragma once

#include <stdexcept>
#include <string>

namespace edgeflight {

/// Invalid or inconsistent configuration values, or an unreadable config file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario generation could not satisfy its placement constraints; reseed.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The planner found no admissible move from the current cell.
class StuckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edgeflight
