#ifndef LOOPFORGE_PIPELINE_HPP
#define LOOPFORGE_PIPELINE_HPP

#include <optional>
#include <string>

#include "loopforge/geometry.hpp"
#include "loopforge/iwasawa.hpp"
#include "loopforge/potential.hpp"

namespace loopforge {

struct GridSpec {
    Complex center{0.0, 0.0};
    double radius = 0.5;
    int n = 21; // odd, so the grid contains the center
};

struct Tolerances {
    double invert = 1e-8;
    double residual = 1e-7;
    double pattern = 1e-5;
};

struct OutputPaths {
    std::string report_path = "report.json";
    std::string frames_path = "frames.csv";
    std::string fields_path = "fields.csv";
};

enum class BranchMode { Principal, Continued };

struct RunSpec {
    int m = 3;
    PotentialSpec potential;
    GridSpec grid;
    int lambda_count = 8;
    Tolerances tolerances;
    double fd_step = 1e-3;
    BranchMode branch_mode = BranchMode::Principal;
    OutputPaths outputs;
    int parallelism = 1;
};

/// Parses and validates a JSON config file. ParseError on malformed JSON or
/// fields, ValidationError naming the violated invariant, IoError on missing
/// files.
RunSpec load_config(const std::string& path);
RunSpec parse_config_text(const std::string& text);

struct PointRecord {
    Complex z;
    bool ok = false;
    std::string failure;
    Complex l11;
    Complex d00, d01, q00, q01, u00, u01;
    double cond_d = 0.0;
    double residual_F = 0.0;
    double residual_F_bound = 0.0; // 1e-10 * (1 + ||f||)^2 at this point
    double iwasawa = 0.0, reality = 0.0, membership = 0.0, twist = 0.0;
    double degree_bound = 0.0, plus_positivity = 0.0;
    int rank = 0;
};

struct RunReport {
    double iwasawa = 0.0;
    double reality = 0.0;
    double membership = 0.0;
    double twist = 0.0;
    double degree_bound = 0.0;
    double plus_positivity = 0.0;
    double mc_pattern = 0.0;
    double a12_residual = 0.0;
    double lightlike_const = 0.0;
    double lightlike_isotropy = 0.0;
    double residual_F_max = 0.0;
    double consequence_ratio = 0.0; // max residual_F / (1 + ||f||)^2
    double frame_reality = 0.0;     // pulled-back imaginary norm
    double frame_membership = 0.0;  // pulled-back Lorentz residual

    int max_rank = 0;
    std::vector<int> rank_counts; // histogram indexed by rank

    std::string verdict;
    std::vector<std::string> failures;
    int failed_points = 0;

    bool numerical_failure() const { return failed_points > 0; }
    bool residual_above_tolerance(const Tolerances& tol) const;
};

struct RunArtifacts {
    int grid_n = 0;
    double grid_h = 0.0;
    std::vector<Complex> lambdas;
    std::vector<PointRecord> points; // grid order, iy major
    std::vector<CMatrix> frames;     // frames[p * lambdas.size() + l]
};

/// Runs the full chain: potential -> conjugated nilpotent data -> closed-form
/// frame -> per-point factorization -> real frame -> pulled-back diagnostics.
/// Per-point numerical failures are recorded and skipped; only config/shape
/// errors propagate. Deterministic for any parallelism degree.
RunReport run_pipeline(const RunSpec& spec, RunArtifacts* artifacts = nullptr);

/// Writes the JSON report plus the frames and fields CSVs.
void export_outputs(const RunReport& report, const RunArtifacts& artifacts,
                    const RunSpec& spec);

std::string report_to_json_string(const RunReport& report, const RunSpec& spec);

} // namespace loopforge

#endif
