#pragma once

#include <stdexcept>
#include <string>

namespace renlp {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct ZeroOperator : Error { using Error::Error; };
struct InvalidExponent : Error { using Error::Error; };
struct NotInSpace : Error { using Error::Error; };
struct ExponentMismatch : Error { using Error::Error; };
struct ZeroElement : Error { using Error::Error; };
struct OutOfStrip : Error { using Error::Error; };
struct InvalidEta : Error { using Error::Error; };
struct InvalidAlpha : Error { using Error::Error; };
struct ZeroFunctional : Error { using Error::Error; };
struct StructureMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct InvalidWeight : Error { using Error::Error; };
struct PositivityClassTooWeak : Error { using Error::Error; };
struct HypothesisNotMet : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace renlp
