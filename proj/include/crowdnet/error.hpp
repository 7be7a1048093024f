#pragma once

#include <stdexcept>
#include <string>

namespace crowdnet {

/// Base for all library failures. Analysis-level problems (bad data,
/// degenerate graphs) map to exit status 1 in the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files or records.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Graph preconditions violated (unknown node, edgeless graph, ...).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration or arguments; exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace crowdnet
