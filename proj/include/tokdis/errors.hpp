#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tokdis {

// A protocol broadcast something it does not know, or more than b tokens.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An adversary emitted a graph that breaks the scenario's connectivity promise.
class PromiseViolation : public std::runtime_error {
 public:
  PromiseViolation(std::size_t round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
  std::size_t round() const noexcept { return round_; }

 private:
  std::size_t round_;
};

// An adversary construction reached a state its invariants rule out.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tokdis
