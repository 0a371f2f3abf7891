#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: scenario syntax, bad numbers, dangling references.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A domain object violates one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Lookup of a state or transition that the model does not define.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// No interface satisfies the rate and quality requirements.
class NoViableInterface : public Error {
 public:
  using Error::Error;
};

}  // namespace hotspot
