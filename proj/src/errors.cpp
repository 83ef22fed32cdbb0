#include "spinwave/errors.hpp"

namespace spinwave {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UndefinedHarmonic: return "UndefinedHarmonic";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::PoleInChart: return "PoleInChart";
    case ErrorKind::ScaleTooCoarse: return "ScaleTooCoarse";
    case ErrorKind::BandLimitExceeded: return "BandLimitExceeded";
    case ErrorKind::DegenerateFilter: return "DegenerateFilter";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::ScaleMissing: return "ScaleMissing";
    case ErrorKind::DegenerateModel: return "DegenerateModel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ThresholdViolation: return "ThresholdViolation";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace spinwave
