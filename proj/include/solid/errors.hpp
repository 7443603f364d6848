#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solid {

/// Argument outside the mathematical domain of an operation (r >= R, m <= 0, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Structural precondition failure on input data (non-monotone partition, bad blocks).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coefficient support not covered by the block partition.
class coverage_error : public std::out_of_range {
 public:
  coverage_error(const std::string& what, long long first_uncovered)
      : std::out_of_range(what), first_uncovered_(first_uncovered) {}
  long long first_uncovered() const noexcept { return first_uncovered_; }

 private:
  long long first_uncovered_;
};

/// A numerical procedure failed to bracket or converge.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Greedy exponent search exceeded its cap.
class search_failure : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

/// Malformed weight specification or data file.
class parse_error : public std::invalid_argument {
 public:
  parse_error(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace solid
