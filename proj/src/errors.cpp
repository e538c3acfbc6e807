#include "fr3share/errors.hpp"

#include <fmt/format.h>

namespace fr3share {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::InfeasibleLink: return "InfeasibleLink";
    case ErrorCode::EmptyRun: return "EmptyRun";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

InfeasibleLink::InfeasibleLink(double p_rate_dbm, double p_inr_dbm)
    : Error(ErrorCode::InfeasibleLink,
            fmt::format("rate floor needs >= {:.3f} dBm but INR cap allows <= {:.3f} dBm", p_rate_dbm,
                        p_inr_dbm)),
      p_rate_(p_rate_dbm),
      p_inr_(p_inr_dbm) {}

}  // namespace fr3share
