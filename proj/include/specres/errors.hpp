#pragma once

#include <stdexcept>
#include <string>

namespace specres {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct NotDefinite : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct BadSpectralFamily : Error { using Error::Error; };
struct ComplexAlpha : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct NegativeJump : Error { using Error::Error; };
struct NotMonotone : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct UnknownClaim : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace specres
