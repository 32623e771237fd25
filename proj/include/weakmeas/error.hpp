#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weakmeas {

enum class ErrorCode {
  DimMismatch,
  ZeroVector,
  NotNormalized,
  NotHermitian,
  NotOrthonormal,
  UnknownOutcome,
  UndefinedWeakValue,
  InvalidModel,
  ShuntUndefined,
  NotRealRepresentable,
  ZeroInformation,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a stable, machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace weakmeas
