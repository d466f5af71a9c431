#pragma once

#include <stdexcept>
#include <string>

namespace cavkin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// An iterative method missed its tolerance; the message carries the diagnostics.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Requested dense materialization exceeds the allowed size.
class SizeError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cavkin
