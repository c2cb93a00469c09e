#include "outer_radii/error.hpp"

namespace outer_radii {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotEnclosing: return "NotEnclosing";
    case ErrorKind::NotASimplex: return "NotASimplex";
    case ErrorKind::NotAHyperplane: return "NotAHyperplane";
    case ErrorKind::InvalidJ: return "InvalidJ";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::DegenerateValues: return "DegenerateValues";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::MalformedSolution: return "MalformedSolution";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace outer_radii
