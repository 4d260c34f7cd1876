#pragma once

#include <stdexcept>
#include <string>

namespace burst {

// Error taxonomy mirrors the CLI exit codes: data/config/geometry problems
// map to exit 2, numerical failures to exit 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct GeometryError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

}  // namespace burst
