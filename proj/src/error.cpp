#include "weakmeas/error.hpp"

namespace weakmeas {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::UndefinedWeakValue: return "UndefinedWeakValue";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::ShuntUndefined: return "ShuntUndefined";
    case ErrorCode::NotRealRepresentable: return "NotRealRepresentable";
    case ErrorCode::ZeroInformation: return "ZeroInformation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace weakmeas
