#pragma once
#include <stdexcept>

namespace cogsim {

// Schema or syntax problem in a configuration file; message carries file:line.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File system failure (open, read, write).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cogsim
