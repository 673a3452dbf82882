#ifndef LOOPFORGE_CONSTANTS_HPP
#define LOOPFORGE_CONSTANTS_HPP

#include "loopforge/cmatrix.hpp"

namespace loopforge {

/// The fixed matrices of the size-2m setting: the anti-diagonal pairing J,
/// the reality conjugator S, Jhat = S*J, the Lorentz form I_{1,2m-1}, the
/// symmetric-space involution matrices D and D0, the change-of-basis Ptilde
/// realizing the group isometry, and the 2x2 corner units E1..E4.
struct ConstantSet {
    int m = 0;

    CMatrix J;           // antidiagonal ones, 2m x 2m
    CMatrix S;           // blockdiag(1, J_{2m-2}, 1)
    CMatrix Jhat;        // S * J; symmetric involution
    CMatrix I1q;         // diag(-1, 1, ..., 1), 2m x 2m
    CMatrix I13;         // diag(-1, 1, 1, 1)
    CMatrix D;           // diag(-I4, I_{2m-4})
    CMatrix D0;          // diag(-1, -1, I_{2m-4}, -1, -1)
    CMatrix Ptilde;      // unitary change of basis
    CMatrix Ptilde_inv;  // = adjoint(Ptilde)
    CMatrix E1, E2, E3, E4;

    int dim() const { return 2 * m; }
    /// Width of the middle block: 2m - 4.
    int n() const { return 2 * m - 4; }
};

/// Constructs the constant set for a given m >= 3. Throws DimensionTooSmall
/// for m < 3 and StructureViolation if the reconstructed Ptilde fails the
/// certifying identity Ptilde^t * I_{1,2m-1} * Ptilde = J beyond 1e-14.
ConstantSet build_constants(int m);

} // namespace loopforge

#endif
