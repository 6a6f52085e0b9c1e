#pragma once

#include <stdexcept>
#include <string>

namespace pend3d {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct NonSkewInput : Error { using Error::Error; };
struct TooFarFromSO3 : Error { using Error::Error; };
struct NotUnit : Error { using Error::Error; };

// dynamics
struct NotAxisymmetric : Error { using Error::Error; };

// equilibria
struct SingularAlpha : Error { using Error::Error; };
struct NonDiagonalInertia : Error { using Error::Error; };

// linearization
struct BalancedBody : Error { using Error::Error; };
struct NotAnEquilibrium : Error { using Error::Error; };

// reduction
struct InitialMismatch : Error { using Error::Error; };
struct NotClosed : Error { using Error::Error; };
struct NotVerticalRotation : Error { using Error::Error; };

// integrate
struct StepBlowup : Error { using Error::Error; };
struct EmptySection : Error { using Error::Error; };
struct NoCrossings : Error { using Error::Error; };

// cli
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace pend3d
