#pragma once

#include <stdexcept>
#include <string>

namespace ppcsim {

// Error taxonomy shared across the library. Everything derives from SimError
// so callers can catch broadly at the CLI boundary.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Event scheduled before the current clock.
struct PastEventError : SimError {
  using SimError::SimError;
};

// Invalid distribution moments (mean <= 0 or cv < 0).
struct BadMomentError : SimError {
  using SimError::SimError;
};

// Planned shop load not achievable (load <= setup share or >= 1).
struct BadLoadError : SimError {
  using SimError::SimError;
};

// Structure cannot be calibrated (e.g. a machine with no routed SKU).
struct InfeasibleError : SimError {
  using SimError::SimError;
};

struct UnknownSkuError : SimError {
  using SimError::SimError;
};

// Result requested before the run reached its horizon.
struct IncompleteRunError : SimError {
  using SimError::SimError;
};

// Summary requested over a store that is missing runs for the queried scope.
struct IncompleteScopeError : SimError {
  using SimError::SimError;
};

// Malformed scenario/plan/config input.
struct ConfigError : SimError {
  using SimError::SimError;
};

}  // namespace ppcsim
