#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

enum class ErrorCode {
  NonSkew,
  DimensionMismatch,
  NonFinite,
  HormanderFails,
  BadP,
  HypothesisFails,
  NotAligned,
  OutOfDomain,
  BoundaryNotFound,
  FitDegenerate,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace carnot
