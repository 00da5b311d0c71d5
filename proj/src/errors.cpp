#include "hwr/errors.hpp"

namespace hwr {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::OrderOutOfRange: return "OrderOutOfRange";
    case Errc::BadTranslation: return "BadTranslation";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::EmptyFamily: return "EmptyFamily";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::Underdetermined: return "Underdetermined";
    case Errc::DegenerateSelection: return "DegenerateSelection";
    case Errc::UnknownName: return "UnknownName";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hwr
