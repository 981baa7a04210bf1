#pragma once

#include <stdexcept>
#include <string>

namespace subseg {

/// Malformed or inconsistent input data (files, ids, alignments).
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or settings supplied by the caller.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace subseg
