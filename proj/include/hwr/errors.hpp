#pragma once

#include <stdexcept>
#include <string>

namespace hwr {

enum class Errc {
  OrderOutOfRange,
  BadTranslation,
  SizeOverflow,
  EmptyFamily,
  DimensionMismatch,
  LengthMismatch,
  NonFiniteInput,
  EmptySubset,
  ZeroVariance,
  Underdetermined,
  DegenerateSelection,
  UnknownName,
  InvalidArgument,
  ParseError,
  IoError,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hwr
