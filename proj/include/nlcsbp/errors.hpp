#pragma once

#include <stdexcept>
#include <string>

namespace nlcsbp {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An integral or series that does not converge.
struct DivergesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Explosion or non-explosion was required but the regime says otherwise.
struct NonExplosiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HorizonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nlcsbp
