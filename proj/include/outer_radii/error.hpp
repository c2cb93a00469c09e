#pragma once

#include <stdexcept>
#include <string>

namespace outer_radii {

enum class ErrorKind {
  RankDeficient,
  DimensionMismatch,
  NotEnclosing,
  NotASimplex,
  NotAHyperplane,
  InvalidJ,
  NegativeRadicand,
  DegenerateValues,
  SingularDenominator,
  MalformedSolution,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace outer_radii
