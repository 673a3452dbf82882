#ifndef LOOPFORGE_ERRORS_HPP
#define LOOPFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loopforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape and construction errors
struct DimensionMismatch : Error { using Error::Error; };
struct DimensionTooSmall : Error { using Error::Error; };
struct ShapeViolation : Error { using Error::Error; };
struct SpecMismatch : Error { using Error::Error; };

// Group / pattern certification errors
struct MembershipViolation : Error { using Error::Error; };
struct PatternViolation : Error { using Error::Error; };
struct StructureViolation : Error { using Error::Error; };

// Numerical failures (Iwasawa cell boundary signals)
struct SingularD : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct HermitianityViolation : Error { using Error::Error; };

// Analysis / integration errors
struct QuadratureFailure : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct NormalizationFailure : Error { using Error::Error; };

// Configuration and I/O
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace loopforge

#endif
