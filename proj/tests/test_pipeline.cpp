#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "loopforge/pipeline.hpp"
#include "test_support.hpp"

using namespace loopforge;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

RunSpec small_spec(const std::string& tag, int grid_n = 5) {
    RunSpec s = parse_config_text(R"({
        "m": 3,
        "potential": {"kind": "minimal_np", "pairs": [{"f1": [[1,0]]}]},
        "grid": {"center": [0,0], "radius": 0.4, "n": 5},
        "lambda_count": 8
    })");
    s.grid.n = grid_n;
    s.outputs.report_path = "/tmp/lf_" + tag + "_report.json";
    s.outputs.frames_path = "/tmp/lf_" + tag + "_frames.csv";
    s.outputs.fields_path = "/tmp/lf_" + tag + "_fields.csv";
    return s;
}

} // namespace

TEST_CASE("load_config: minimal config takes defaults") {
    RunSpec s = parse_config_text(R"({"m": 3})");
    CHECK(s.grid.n == 21);
    CHECK(s.grid.radius == 0.5);
    CHECK(s.lambda_count == 8);
    CHECK(s.tolerances.invert == 1e-8);
    CHECK(s.fd_step == 1e-3);
    CHECK(s.parallelism == 1);
    CHECK(s.potential.kind() == PotentialSpec::Kind::MinimalNP);
    CHECK(build_Bhat(s.potential).is_zero());
}

TEST_CASE("load_config: invariants enforced with named errors") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"m": 3, "grid": {"n": 20}})"),
                         "grid.n must be odd", ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"m": 2})"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"m": 3, "lambda_count": 2})"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"m": 3, "tolerances": {"invert": 2.0}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config_text("{not json"), ParseError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"m": 3, "potential": {"kind": "minimal_np", "pairs": [{"f1": [1]}]}})"),
        ParseError);
}

TEST_CASE("load_config: lightlike column example maps to the canonical column") {
    RunSpec s = parse_config_text(R"({
        "m": 3,
        "potential": {"kind": "lightlike", "columns": [
            {"f0": [[1,0]], "f1": [[1,0]], "f3": [[0,0]]},
            {}
        ]}
    })");
    MatPolyZ B = build_Bhat(s.potential);
    CHECK(B.at(0, 0) == PolyZ::constant(1.0));
    CHECK(B.at(1, 0) == PolyZ::constant(-1.0));
    CHECK(B.at(2, 0).is_zero());
    CHECK(B.at(3, 0).is_zero());
}

TEST_CASE("run_pipeline: zero potential is trivial everywhere") {
    RunSpec s = parse_config_text(R"({
        "m": 3,
        "grid": {"center": [0,0], "radius": 0.4, "n": 5},
        "lambda_count": 8
    })");
    RunReport rep = run_pipeline(s);
    CHECK(rep.failed_points == 0);
    CHECK(rep.iwasawa == 0.0);
    CHECK(rep.reality == 0.0);
    CHECK(rep.membership < 1e-14);
    CHECK(rep.twist < 1e-14);
    CHECK(rep.degree_bound == 0.0);
    CHECK(rep.lightlike_const < 1e-15);
    CHECK(rep.max_rank == 0);
    CHECK(rep.verdict == "minimal-surface candidate");
}

TEST_CASE("run_pipeline: rank-1 input certifies the lightlike direction") {
    RunSpec s = small_spec("rank1");
    RunArtifacts art;
    RunReport rep = run_pipeline(s, &art);
    CHECK(rep.failed_points == 0);
    CHECK(rep.max_rank == 1);
    CHECK(rep.lightlike_const < 1e-7);
    CHECK(rep.lightlike_isotropy < 1e-9);
    CHECK(rep.verdict == "minimal-surface candidate");
    CHECK(rep.mc_pattern < 1e-5);
    CHECK(rep.a12_residual < 1e-5);
    CHECK(art.points.size() == 25);
    CHECK(art.frames.size() == 25 * 8);
}

TEST_CASE("run_pipeline: rank-2 input excludes a Willmore correspondence") {
    RunSpec s = parse_config_text(R"({
        "m": 3,
        "potential": {"kind": "minimal_np",
                      "pairs": [{"f1": [[1,0]], "f4": [[0.5,0]]}]},
        "grid": {"center": [0,0], "radius": 0.4, "n": 5},
        "lambda_count": 8
    })");
    RunReport rep = run_pipeline(s);
    CHECK(rep.failed_points == 0);
    CHECK(rep.max_rank == 2);
    CHECK(rep.verdict == "no Willmore surface");
    // the constant lightlike vector is still present for this family
    CHECK(rep.lightlike_const < 1e-7);
}

TEST_CASE("run_pipeline: timelike potential is outside the pipeline family") {
    RunSpec s = parse_config_text(R"({
        "m": 3,
        "potential": {"kind": "timelike", "g0": [[0,0],[1,0]], "g": [[[1,0]], []]},
        "grid": {"n": 3}
    })");
    CHECK_THROWS_AS(run_pipeline(s), PatternViolation);
}

TEST_CASE("run_pipeline: cell-boundary points are recorded, not fatal") {
    RunSpec s = parse_config_text(R"({
        "m": 3,
        "potential": {"kind": "minimal_np", "pairs": [{"f3": [[1,0]]}]},
        "grid": {"center": [0,0], "radius": 0.4, "n": 5},
        "lambda_count": 8
    })");
    s.outputs.report_path = "/tmp/lf_cells_report.json";
    s.outputs.frames_path = "/tmp/lf_cells_frames.csv";
    s.outputs.fields_path = "/tmp/lf_cells_fields.csv";
    s.tolerances.invert = 0.9; // cond(d) = 1 + |z|^2 > 1/0.9 away from the origin
    RunReport rep = run_pipeline(s);
    CHECK(rep.failed_points > 0);
    CHECK(rep.verdict == "cell-boundary encountered");
    CHECK(rep.numerical_failure());
}

TEST_CASE("run_pipeline and exports are deterministic across parallelism") {
    RunSpec s1 = small_spec("par1");
    s1.parallelism = 1;
    RunArtifacts a1;
    RunReport r1 = run_pipeline(s1, &a1);
    export_outputs(r1, a1, s1);

    RunSpec s4 = small_spec("par4");
    s4.parallelism = 4;
    RunArtifacts a4;
    RunReport r4 = run_pipeline(s4, &a4);
    export_outputs(r4, a4, s4);

    CHECK(report_to_json_string(r1, s1) == report_to_json_string(r4, s4));
    CHECK(slurp(s1.outputs.frames_path) == slurp(s4.outputs.frames_path));
    CHECK(slurp(s1.outputs.fields_path) == slurp(s4.outputs.fields_path));

    // re-running the identical spec reproduces the report byte for byte
    RunArtifacts a1b;
    RunReport r1b = run_pipeline(s1, &a1b);
    CHECK(report_to_json_string(r1, s1) == report_to_json_string(r1b, s1));
}

TEST_CASE("export_outputs: row counts match the grid") {
    RunSpec s = small_spec("rows", 5);
    RunArtifacts art;
    RunReport rep = run_pipeline(s, &art);
    export_outputs(rep, art, s);
    CHECK(count_lines(slurp(s.outputs.frames_path)) == 1 + 25 * 8);
    CHECK(count_lines(slurp(s.outputs.fields_path)) == 1 + 25);

    RunSpec s1 = small_spec("single", 1);
    RunArtifacts art1;
    RunReport rep1 = run_pipeline(s1, &art1);
    export_outputs(rep1, art1, s1);
    CHECK(count_lines(slurp(s1.outputs.frames_path)) == 1 + 8);
    CHECK(count_lines(slurp(s1.outputs.fields_path)) == 1 + 1);
}

TEST_CASE("run_pipeline: continued branch mode is inert when the corner root is 1") {
    RunSpec s = small_spec("branch");
    RunReport r1 = run_pipeline(s);
    s.branch_mode = BranchMode::Continued;
    RunReport r2 = run_pipeline(s);
    // a11 = 1 across this family, so the continuation never flips the sign
    CHECK(report_to_json_string(r2, s) == report_to_json_string(r1, s));
}

TEST_CASE("report flags drive the exit-code semantics") {
    RunSpec s = small_spec("flags");
    RunReport rep = run_pipeline(s);
    CHECK_FALSE(rep.numerical_failure());
    CHECK_FALSE(rep.residual_above_tolerance(s.tolerances));

    Tolerances tight;
    tight.residual = 1e-16;
    CHECK(rep.residual_above_tolerance(tight));
}
