#pragma once

#include <stdexcept>
#include <string>

namespace fr3share {

enum class ErrorCode {
  InvalidDimension,
  NotHermitian,
  ConvergenceFailure,
  InvalidArgument,
  EmptySample,
  DegenerateGeometry,
  NotNormalized,
  InfeasibleLink,
  EmptyRun,
  ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code lets
/// callers (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// No transmit power satisfies both the rate floor and the INR cap.
class InfeasibleLink : public Error {
 public:
  InfeasibleLink(double p_rate_dbm, double p_inr_dbm);

  /// Smallest power meeting the rate floor.
  double p_rate_dbm() const noexcept { return p_rate_; }
  /// Largest power meeting the INR cap.
  double p_inr_dbm() const noexcept { return p_inr_; }

 private:
  double p_rate_;
  double p_inr_;
};

}  // namespace fr3share
