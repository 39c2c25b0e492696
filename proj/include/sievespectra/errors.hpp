#pragma once

#include <stdexcept>
#include <string>

namespace sievespectra {

// Invalid user input (bad flag value, out-of-range parameter). CLI exit code 2.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A computation was rejected because it exceeds the configured size caps. CLI exit code 3.
struct resource_guard_error : std::runtime_error {
    explicit resource_guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative numerical procedure failed to reach its tolerance. CLI exit code 4.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sievespectra
