// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace offerset {

// Invalid or out-of-range configuration (bad config file, bad CLI value).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A resource guard tripped (instance too large, hash width over the cap).
struct GuardError : std::runtime_error {
  explicit GuardError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input bytes (vector files, index blobs).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace offerset
