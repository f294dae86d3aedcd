#pragma once

#include <stdexcept>
#include <string>

namespace npfs {

/// Invalid configuration or input data (bad file, inadmissible parameters,
/// failed structural validation). Maps to exit code 1 in the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runtime numerical failure (solver non-convergence, non-finite values).
/// Maps to exit code 2 in the CLI.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace npfs
