#pragma once

#include <stdexcept>
#include <string>

namespace qkdcoex {

// Raised for malformed or inconsistent configuration input. Carries the
// field path (e.g. "comb.total_power_dbm") so operators see exactly which
// entry is wrong.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace qkdcoex
