#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dsop/model.hpp"

namespace dsop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance text. `location` is "line N" and/or a field path.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& message)
      : Error(location + ": " + message), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class NoFeasibleSolution : public Error {
 public:
  using Error::Error;
};

/// Search budget exhausted; carries the best solution found so far.
class Timeout : public Error {
 public:
  Timeout(const std::string& message, Solution best) : Error(message), best_(std::move(best)) {}
  const Solution& best() const { return best_; }

 private:
  Solution best_;
};

/// An instance generator could not satisfy its postcondition.
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsop
