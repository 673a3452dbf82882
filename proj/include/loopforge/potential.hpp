#ifndef LOOPFORGE_POTENTIAL_HPP
#define LOOPFORGE_POTENTIAL_HPP

#include <span>
#include <variant>

#include "loopforge/constants.hpp"
#include "loopforge/matpoly.hpp"

namespace loopforge {

/// Canonical potential families. The block matrix eta_{-1} built from the
/// 4 x (2m-4) matrix Bhat encodes one of three constant-vector classes, or the
/// pipeline-native duplicated-row family, or raw user data.
struct LightlikeData {
    struct Column {
        PolyZ f0, f1, f3; // column = f0 * (f1, -f1, f3, i f3)^t
    };
    std::vector<Column> columns; // one per column, 2m-4 of them
};

struct TimelikeData {
    PolyZ g0;            // shared across columns
    std::vector<PolyZ> g; // column j = g_j * (0, 2 g0, 1 - g0^2, i (1 + g0^2))^t
};

struct SpacelikeData {
    PolyZ h0;
    std::vector<PolyZ> h; // column j = h_j * (2 i h0, 0, 1 - h0^2, i (1 + h0^2))^t
};

struct MinimalNPData {
    struct ColumnPair {
        PolyZ f1, f2, f3, f4; // columns (f1, f1, f3, i f3)^t and (f2, f2, f4, i f4)^t
    };
    std::vector<ColumnPair> pairs; // m-2 of them
};

struct RawData {
    MatPolyZ B; // explicit 4 x (2m-4)
};

struct PotentialSpec {
    enum class Kind { Lightlike, Timelike, Spacelike, MinimalNP, Raw };

    int m = 3;
    std::variant<LightlikeData, TimelikeData, SpacelikeData, MinimalNPData, RawData> data;

    Kind kind() const { return static_cast<Kind>(data.index()); }
    int n() const { return 2 * m - 4; }
};

/// Assembles the 4 x (2m-4) matrix Bhat for the family; throws SpecMismatch
/// on wrong column counts.
MatPolyZ build_Bhat(const PotentialSpec& spec);

/// Applies the row-2 sign flip converting the lightlike-family convention
/// (rows 1,2 opposite) into the duplicated-row pipeline convention.
MatPolyZ gauge_to_native(const MatPolyZ& B);
/// Inverse of gauge_to_native (the same row flip).
MatPolyZ gauge_to_lightlike(const MatPolyZ& B);

/// max over samples of || B(z)^t I_{1,3} B(z) ||_F.
double isotropy_residual(const MatPolyZ& B, std::span<const Complex> z_samples);

/// eta_{-1}(z) = [[0, B], [-B^t I_{1,3}, 0]], a 2m x 2m polynomial matrix.
MatPolyZ to_loop_potential(const MatPolyZ& B, const ConstantSet& C);

/// Conjugates eta_{-1} by the group isometry, certifies the three-block
/// nilpotent pattern [[0, ft, 0], [0, 0, -ft^sharp], [0, 0, 0]] in the
/// (2, 2m-4, 2) partition, and returns ft as an exact 2 x (2m-4) polynomial
/// matrix. Throws PatternViolation when the pattern fails (the potential is
/// not in the duplicated-row family).
MatPolyZ extract_ftilde(const MatPolyZ& eta_minus1, const ConstantSet& C,
                        double pattern_tol = 1e-12);

/// sharp: M (2 x n) -> J_n M^t J_2; sharp_inv: M (n x 2) -> J_2 M^t J_n.
CMatrix sharp(const CMatrix& M, const ConstantSet& C);
CMatrix sharp_inv(const CMatrix& M, const ConstantSet& C);
MatPolyZ sharp(const MatPolyZ& M, const ConstantSet& C);
MatPolyZ sharp_inv(const MatPolyZ& M, const ConstantSet& C);

struct RankProfile {
    std::vector<int> point_ranks;
    int max_rank = 0;
    bool minimal_candidate = false; // max rank <= 1
    bool willmore_excluded = false; // max rank == 2
};

/// Numeric rank of B(z) at each sample (threshold 1e-10 relative to the top
/// singular value) with the structural verdict flags.
RankProfile rank_profile(const MatPolyZ& B, std::span<const Complex> z_samples);

} // namespace loopforge

#endif
