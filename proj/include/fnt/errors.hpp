#pragma once

#include <stdexcept>
#include <string>

namespace fnt {

// Unreadable or malformed input data (missing file, bad CSV cell, bad model
// document). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration value. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fnt
