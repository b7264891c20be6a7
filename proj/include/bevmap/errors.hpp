#pragma once

#include <stdexcept>
#include <string>

namespace bevmap {

// Input file could not be read or failed to parse. Messages carry the path
// and, where known, the line or byte offset. CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or bad arguments at the API boundary. Exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated internal contract. Exit code 3.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define BEVMAP_CHECK(cond, msg)                                  \
  do {                                                           \
    if (!(cond)) {                                               \
      throw ::bevmap::InternalError(std::string("check failed: ") + (msg)); \
    }                                                            \
  } while (0)

}  // namespace bevmap
