#ifndef LOOPFORGE_GEOMETRY_HPP
#define LOOPFORGE_GEOMETRY_HPP

#include <span>

#include "loopforge/algebra.hpp"

namespace loopforge {

/// Pulled-back frame samples F(z) = Ptilde * Ftilde(z, lambda) * Ptilde^{-1}
/// on a rectangular grid with uniform spacing h, at a fixed unit lambda.
/// Frames are real up to round-off and Lorentz-orthogonal.
struct FrameField {
    int nx = 0, ny = 0;
    Complex origin;   // z at grid index (0, 0)
    double h = 0.0;   // spacing in both the real and imaginary directions
    Complex lambda;
    std::vector<CMatrix> frames; // row-major: iy * nx + ix

    Complex z_at(int ix, int iy) const { return origin + Complex(ix * h, iy * h); }
    const CMatrix& frame_at(int ix, int iy) const {
        return frames[static_cast<size_t>(iy) * nx + ix];
    }

    double reality_residual() const;
    double membership_residual_so1q() const;
};

/// Maurer-Cartan diagnostics from central differences on a stack of frame
/// fields sharing one grid (one field per lambda sample, lambda equispaced on
/// the unit circle). Derivatives use the inner ring of the grid; the
/// Richardson estimate compares spacing h against 2h and GridTooCoarse is
/// thrown when that estimate exceeds pattern_tol.
struct McReport {
    double lambda0_prohibited = 0.0;      // off-pattern blocks of the lambda^0 part
    double lambda_minus1_prohibited = 0.0; // off-pattern blocks of the lambda^{-1} part
    double degree_excess = 0.0;           // coefficient norms at |degree| > 1
    double fd_error_estimate = 0.0;
    double a12_residual = 0.0;            // || d(phi1+phi2)/dz - a12 (phi1+phi2) ||
    double duplicated_rows = 0.0;         // F-side B1 rows: row2 = row1, row4 = i row3
    double a1_structure = 0.0;            // F-side A1 shape defect
    Complex a12;
};

McReport maurer_cartan(std::span<const FrameField> fields, const ConstantSet& C,
                       double pattern_tol);

struct LightlikeResult {
    std::vector<double> v;       // normalized mean direction, length 2m
    double const_residual = 0.0; // max_z ||v(z) - mean|| / ||mean||
    double isotropy_residual = 0.0;
};

enum class VectorNormalization { FirstCoordinate, UnitNorm };

/// Direction of the first two frame columns' sum. The default normalization
/// divides by the first coordinate (NormalizationFailure when it degenerates);
/// UnitNorm uses the Euclidean norm with the sign fixed by the first
/// coordinate, giving the same projective class.
LightlikeResult constant_lightlike(
    const FrameField& field, const ConstantSet& C,
    VectorNormalization norm = VectorNormalization::FirstCoordinate);

enum class CausalClass { Lightlike, Timelike, Spacelike };

struct ConstVectorReport {
    double span_residual = 0.0; // component outside the first four columns
    double quadratic_form = 0.0;
    CausalClass causal = CausalClass::Lightlike;
};

/// Checks that v stays inside the span of the first four frame columns at
/// every grid point and classifies its causal type.
ConstVectorReport constant_vector_check(const FrameField& field,
                                        std::span<const double> v, const ConstantSet& C,
                                        double class_tol = 1e-9);

} // namespace loopforge

#endif
