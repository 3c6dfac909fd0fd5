#pragma once

#include <stdexcept>
#include <string>

namespace b12scope {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source missing or unreadable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input does not follow the declared format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Loaded data violates a table invariant (missing cell, unknown food, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// A statistic is undefined for the given input (constant vector, n too small).
class StatError : public Error {
 public:
  using Error::Error;
};

}  // namespace b12scope
