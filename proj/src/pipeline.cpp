#include "loopforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace loopforge {

namespace {

using json = nlohmann::ordered_json;
const Complex kI(0.0, 1.0);

PolyZ parse_poly(const json& j, const std::string& where) {
    if (!j.is_array())
        throw ParseError(where + ": polynomial must be an array of [re, im] pairs");
    std::vector<Complex> c;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
            throw ParseError(where + ": coefficient must be a [re, im] pair");
        c.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    return PolyZ(std::move(c));
}

PolyZ parse_poly_field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) return {};
    return parse_poly(obj.at(key), where + "." + key);
}

Complex parse_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(where + ": expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

PotentialSpec parse_potential(const json& j, int m) {
    PotentialSpec spec;
    spec.m = m;
    const int n = spec.n();
    if (j.is_null()) {
        MinimalNPData d;
        d.pairs.resize(m - 2);
        spec.data = std::move(d);
        return spec;
    }
    std::string kind = j.value("kind", std::string("minimal_np"));
    if (kind == "minimal_np") {
        MinimalNPData d;
        if (j.contains("pairs")) {
            for (size_t p = 0; p < j.at("pairs").size(); ++p) {
                const auto& jp = j.at("pairs")[p];
                const std::string where = "potential.pairs[" + std::to_string(p) + "]";
                MinimalNPData::ColumnPair cp;
                cp.f1 = parse_poly_field(jp, "f1", where);
                cp.f2 = parse_poly_field(jp, "f2", where);
                cp.f3 = parse_poly_field(jp, "f3", where);
                cp.f4 = parse_poly_field(jp, "f4", where);
                d.pairs.push_back(std::move(cp));
            }
        } else {
            d.pairs.resize(m - 2);
        }
        spec.data = std::move(d);
    } else if (kind == "lightlike") {
        LightlikeData d;
        if (j.contains("columns")) {
            for (size_t c = 0; c < j.at("columns").size(); ++c) {
                const auto& jc = j.at("columns")[c];
                const std::string where = "potential.columns[" + std::to_string(c) + "]";
                LightlikeData::Column col;
                col.f0 = parse_poly_field(jc, "f0", where);
                col.f1 = parse_poly_field(jc, "f1", where);
                col.f3 = parse_poly_field(jc, "f3", where);
                d.columns.push_back(std::move(col));
            }
        } else {
            d.columns.resize(n);
        }
        spec.data = std::move(d);
    } else if (kind == "timelike") {
        TimelikeData d;
        d.g0 = parse_poly_field(j, "g0", "potential");
        if (j.contains("g"))
            for (size_t c = 0; c < j.at("g").size(); ++c)
                d.g.push_back(parse_poly(j.at("g")[c], "potential.g[" + std::to_string(c) + "]"));
        else
            d.g.resize(n);
        spec.data = std::move(d);
    } else if (kind == "spacelike") {
        SpacelikeData d;
        d.h0 = parse_poly_field(j, "h0", "potential");
        if (j.contains("h"))
            for (size_t c = 0; c < j.at("h").size(); ++c)
                d.h.push_back(parse_poly(j.at("h")[c], "potential.h[" + std::to_string(c) + "]"));
        else
            d.h.resize(n);
        spec.data = std::move(d);
    } else if (kind == "raw") {
        RawData d;
        if (!j.contains("entries")) throw ParseError("potential.entries missing for raw kind");
        const auto& rows = j.at("entries");
        if (rows.size() != 4) throw ParseError("potential.entries must have 4 rows");
        d.B = MatPolyZ(4, n);
        for (int i = 0; i < 4; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw ParseError("potential.entries rows must have 2m-4 columns");
            for (int c = 0; c < n; ++c)
                d.B.at(i, c) = parse_poly(rows[i][c], "potential.entries");
        }
        spec.data = std::move(d);
    } else {
        throw ParseError("potential.kind must be one of minimal_np, lightlike, timelike, spacelike, raw");
    }
    return spec;
}

void validate(const RunSpec& s) {
    if (s.m < 3) throw ValidationError("m must be >= 3");
    if (s.grid.n < 1 || s.grid.n % 2 == 0) throw ValidationError("grid.n must be odd");
    if (!(s.grid.radius > 0.0)) throw ValidationError("grid.radius must be positive");
    if (s.lambda_count < 4) throw ValidationError("lambda_count must be >= 4");
    for (double t : {s.tolerances.invert, s.tolerances.residual, s.tolerances.pattern})
        if (!(t > 0.0 && t < 1.0)) throw ValidationError("tolerances must lie in (0, 1)");
    if (!(s.fd_step > 0.0)) throw ValidationError("fd_step must be positive");
    if (s.parallelism < 1) throw ValidationError("parallelism must be >= 1");
}

} // namespace

RunSpec parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    RunSpec s;
    try {
        s.m = j.value("m", 3);
        s.potential = parse_potential(j.contains("potential") ? j.at("potential") : json(nullptr), s.m);
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("center")) s.grid.center = parse_complex(g.at("center"), "grid.center");
            s.grid.radius = g.value("radius", 0.5);
            s.grid.n = g.value("n", 21);
        }
        s.lambda_count = j.value("lambda_count", 8);
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            s.tolerances.invert = t.value("invert", 1e-8);
            s.tolerances.residual = t.value("residual", 1e-7);
            s.tolerances.pattern = t.value("pattern", 1e-5);
        }
        s.fd_step = j.value("fd_step", 1e-3);
        std::string branch = j.value("branch_mode", std::string("principal"));
        if (branch == "principal")
            s.branch_mode = BranchMode::Principal;
        else if (branch == "continued")
            s.branch_mode = BranchMode::Continued;
        else
            throw ParseError("branch_mode must be 'principal' or 'continued'");
        if (j.contains("outputs")) {
            const auto& o = j.at("outputs");
            s.outputs.report_path = o.value("report_path", s.outputs.report_path);
            s.outputs.frames_path = o.value("frames_path", s.outputs.frames_path);
            s.outputs.fields_path = o.value("fields_path", s.outputs.fields_path);
        }
        s.parallelism = j.value("parallelism", 1);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    validate(s);
    return s;
}

RunSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace {

struct PointOutput {
    PointRecord rec;
    std::vector<CMatrix> pulled; // one per lambda
    LaurentLoop Ftilde{0};
};

PointOutput process_point(Complex z, const MeromorphicFrame& frame, const ConstantSet& C,
                          const RunSpec& spec, std::span<const Complex> lambdas,
                          const BranchConfig& branch) {
    PointOutput out;
    out.rec.z = z;
    const int N = C.dim();
    const CMatrix fval = frame.f.eval(z);
    const CMatrix gval = frame.g.eval(z);
    out.rec.residual_F_bound = 1e-10 * std::pow(1.0 + fval.norm(), 2);
    try {
        IwasawaPointFactors fac = solve_point(fval, gval, C, spec.tolerances.invert);
        fac.L0 = factor_L0(fac, C, branch);
        LaurentLoop H = frame.H_at(z, C);
        FramePair fp = assemble_frame(H, fac, fac.L0, C);
        FrameResiduals res = frame_residuals(fp.F, fp.Fplus, H, C, lambdas);

        out.rec.ok = true;
        out.rec.l11 = fac.L0(0, 0);
        out.rec.cond_d = fac.cond_d;
        out.rec.residual_F = fac.residual_F;
        out.rec.d00 = fac.d(0, 0);
        out.rec.d01 = fac.d(0, 1);
        out.rec.q00 = fac.q(0, 0);
        out.rec.q01 = fac.q(0, 1);
        out.rec.u00 = fac.u(0, 0);
        out.rec.u01 = fac.u(0, 1);
        out.rec.iwasawa = res.iwasawa;
        out.rec.reality = res.reality;
        out.rec.membership = res.membership;
        out.rec.degree_bound = res.degree_bound;
        out.rec.plus_positivity = res.plus_positivity;
        out.rec.twist = sigma_twist_residual(fp.F, C, lambdas);

        out.Ftilde = fp.F;
        out.pulled.reserve(lambdas.size());
        for (Complex lam : lambdas)
            out.pulled.push_back(conjugate_P(fp.F.eval(lam), C, ConjugateDirection::Backward));
    } catch (const Error& e) {
        out.rec.ok = false;
        out.rec.failure = e.what();
        out.pulled.assign(lambdas.size(), CMatrix::zero(N, N));
    }
    return out;
}

std::vector<Complex> unit_roots(int count) {
    std::vector<Complex> out(count);
    for (int k = 0; k < count; ++k)
        out[k] = std::exp(kI * (2.0 * std::numbers::pi * k / count));
    return out;
}

} // namespace

bool RunReport::residual_above_tolerance(const Tolerances& tol) const {
    const double r = tol.residual;
    if (iwasawa > r || reality > r || membership > r || twist > r || degree_bound > r ||
        plus_positivity > r || lightlike_const > r || lightlike_isotropy > r)
        return true;
    if (mc_pattern > tol.pattern || a12_residual > tol.pattern) return true;
    if (consequence_ratio > 1e-10) return true;
    return false;
}

RunReport run_pipeline(const RunSpec& spec, RunArtifacts* artifacts) {
    validate(spec);
    const ConstantSet C = build_constants(spec.m);

    MatPolyZ B = build_Bhat(spec.potential);
    MatPolyZ native = spec.potential.kind() == PotentialSpec::Kind::Lightlike
                          ? gauge_to_native(B)
                          : B;
    MatPolyZ eta = to_loop_potential(native, C);
    MatPolyZ ftilde = extract_ftilde(eta, C);
    MeromorphicFrame frame = integrate_meromorphic_frame(ftilde, C);

    const int gn = spec.grid.n;
    const double h = gn > 1 ? 2.0 * spec.grid.radius / (gn - 1) : 0.0;
    const Complex corner = spec.grid.center - Complex(spec.grid.radius, spec.grid.radius);
    std::vector<Complex> zs;
    zs.reserve(static_cast<size_t>(gn) * gn);
    for (int iy = 0; iy < gn; ++iy)
        for (int ix = 0; ix < gn; ++ix)
            zs.push_back(gn > 1 ? corner + Complex(ix * h, iy * h) : spec.grid.center);

    const std::vector<Complex> lambdas = unit_roots(spec.lambda_count);

    RunReport rep;
    std::vector<PointOutput> outputs(zs.size(), PointOutput{});

    BranchConfig branch;
    branch.mode = spec.branch_mode == BranchMode::Continued ? BranchConfig::Mode::Continued
                                                            : BranchConfig::Mode::Principal;

    const int threads = std::max(1, spec.parallelism);
    if (threads == 1 || spec.branch_mode == BranchMode::Continued) {
        // serpentine walk so the continued branch rule sees adjacent points
        BranchConfig walk = branch;
        for (int iy = 0; iy < gn; ++iy)
            for (int k = 0; k < gn; ++k) {
                const int ix = (iy % 2 == 0) ? k : gn - 1 - k;
                const size_t p = static_cast<size_t>(iy) * gn + ix;
                outputs[p] = process_point(zs[p], frame, C, spec, lambdas, walk);
                if (branch.mode == BranchConfig::Mode::Continued && outputs[p].rec.ok)
                    walk.previous_l11 = outputs[p].rec.l11;
            }
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (size_t p = t; p < zs.size(); p += threads)
                    outputs[p] = process_point(zs[p], frame, C, spec, lambdas, branch);
            });
        for (auto& th : pool) th.join();
    }

    // deterministic reductions in grid order
    RankProfile rp = rank_profile(native, zs);
    rep.max_rank = rp.max_rank;
    rep.rank_counts.assign(static_cast<size_t>(rp.max_rank) + 1, 0);
    for (size_t p = 0; p < zs.size(); ++p) {
        outputs[p].rec.rank = rp.point_ranks[p];
        ++rep.rank_counts[rp.point_ranks[p]];
    }

    for (const PointOutput& o : outputs) {
        if (!o.rec.ok) {
            ++rep.failed_points;
            char buf[64];
            std::snprintf(buf, sizeof buf, "z=(%.6g,%.6g): ", o.rec.z.real(), o.rec.z.imag());
            rep.failures.push_back(buf + o.rec.failure);
            continue;
        }
        rep.iwasawa = std::max(rep.iwasawa, o.rec.iwasawa);
        rep.reality = std::max(rep.reality, o.rec.reality);
        rep.membership = std::max(rep.membership, o.rec.membership);
        rep.twist = std::max(rep.twist, o.rec.twist);
        rep.degree_bound = std::max(rep.degree_bound, o.rec.degree_bound);
        rep.plus_positivity = std::max(rep.plus_positivity, o.rec.plus_positivity);
        rep.residual_F_max = std::max(rep.residual_F_max, o.rec.residual_F);
        rep.consequence_ratio =
            std::max(rep.consequence_ratio, o.rec.residual_F * 1e-10 / o.rec.residual_F_bound);
    }

    // pulled-back fields per lambda: reality, Lorentz membership, lightlike vector
    if (rep.failed_points == 0) {
        for (size_t l = 0; l < lambdas.size(); ++l) {
            FrameField field;
            field.nx = gn;
            field.ny = gn;
            field.origin = gn > 1 ? corner : spec.grid.center;
            field.h = h;
            field.lambda = lambdas[l];
            field.frames.reserve(zs.size());
            for (const PointOutput& o : outputs) field.frames.push_back(o.pulled[l]);

            rep.frame_reality = std::max(rep.frame_reality, field.reality_residual());
            rep.frame_membership =
                std::max(rep.frame_membership, field.membership_residual_so1q());

            try {
                LightlikeResult lr = constant_lightlike(field, C);
                rep.lightlike_const = std::max(rep.lightlike_const, lr.const_residual);
                rep.lightlike_isotropy = std::max(rep.lightlike_isotropy, lr.isotropy_residual);
            } catch (const Error& e) {
                rep.failures.push_back(std::string("lightlike: ") + e.what());
                rep.lightlike_const = std::numeric_limits<double>::infinity();
            }
        }

        // Maurer-Cartan probes: 5x5 stencils at fd_step around interior points.
        const std::vector<Complex> probes = {
            spec.grid.center,
            spec.grid.center + Complex(0.35 * spec.grid.radius, 0.0),
            spec.grid.center + Complex(0.0, -0.35 * spec.grid.radius)};
        const std::vector<Complex> mc_lambdas = unit_roots(16);
        for (Complex probe : probes) {
            std::vector<FrameField> fields(mc_lambdas.size());
            bool probe_ok = true;
            std::vector<PointOutput> pts(25);
            for (int iy = 0; iy < 5 && probe_ok; ++iy)
                for (int ix = 0; ix < 5 && probe_ok; ++ix) {
                    Complex zp = probe + Complex((ix - 2) * spec.fd_step, (iy - 2) * spec.fd_step);
                    pts[iy * 5 + ix] = process_point(zp, frame, C, spec, mc_lambdas, branch);
                    if (!pts[iy * 5 + ix].rec.ok) {
                        rep.failures.push_back("mc probe: " + pts[iy * 5 + ix].rec.failure);
                        ++rep.failed_points;
                        probe_ok = false;
                    }
                }
            if (!probe_ok) continue;
            for (size_t l = 0; l < mc_lambdas.size(); ++l) {
                FrameField& f = fields[l];
                f.nx = f.ny = 5;
                f.h = spec.fd_step;
                f.origin = probe - Complex(2 * spec.fd_step, 2 * spec.fd_step);
                f.lambda = mc_lambdas[l];
                for (int p = 0; p < 25; ++p) f.frames.push_back(pts[p].pulled[l]);
            }
            try {
                McReport mc = maurer_cartan(fields, C, spec.tolerances.pattern);
                double pattern = std::max({mc.lambda0_prohibited, mc.lambda_minus1_prohibited,
                                           mc.degree_excess, mc.a1_structure, mc.duplicated_rows});
                rep.mc_pattern = std::max(rep.mc_pattern, pattern);
                rep.a12_residual = std::max(rep.a12_residual, mc.a12_residual);
            } catch (const GridTooCoarse& e) {
                rep.failures.push_back(std::string("mc probe: ") + e.what());
                rep.mc_pattern = std::numeric_limits<double>::infinity();
            }
        }
    }

    if (rep.failed_points > 0)
        rep.verdict = "cell-boundary encountered";
    else if (rep.max_rank >= 2)
        rep.verdict = "no Willmore surface";
    else if (rep.lightlike_const <= spec.tolerances.residual)
        rep.verdict = "minimal-surface candidate";
    else
        rep.verdict = "inconclusive (lightlike residual above tolerance)";

    if (artifacts) {
        artifacts->grid_n = gn;
        artifacts->grid_h = h;
        artifacts->lambdas = lambdas;
        artifacts->points.clear();
        artifacts->frames.clear();
        artifacts->points.reserve(outputs.size());
        artifacts->frames.reserve(outputs.size() * lambdas.size());
        for (PointOutput& o : outputs) {
            artifacts->points.push_back(o.rec);
            for (size_t l = 0; l < lambdas.size(); ++l)
                artifacts->frames.push_back(std::move(o.pulled[l]));
        }
    }
    return rep;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << text;
    if (!out) throw IoError("failed writing output file: " + path);
}

} // namespace

std::string report_to_json_string(const RunReport& rep, const RunSpec& spec) {
    json j;
    j["m"] = spec.m;
    j["grid"] = {{"center", {spec.grid.center.real(), spec.grid.center.imag()}},
                 {"radius", spec.grid.radius},
                 {"n", spec.grid.n}};
    j["lambda_count"] = spec.lambda_count;
    json res;
    res["iwasawa"] = rep.iwasawa;
    res["reality"] = rep.reality;
    res["membership"] = rep.membership;
    res["twist"] = rep.twist;
    res["degree_bound"] = rep.degree_bound;
    res["plus_positivity"] = rep.plus_positivity;
    res["mc_pattern"] = rep.mc_pattern;
    res["a12"] = rep.a12_residual;
    res["lightlike_const"] = rep.lightlike_const;
    res["lightlike_isotropy"] = rep.lightlike_isotropy;
    res["residual_F_max"] = rep.residual_F_max;
    res["consequence_ratio"] = rep.consequence_ratio;
    res["frame_reality"] = rep.frame_reality;
    res["frame_membership"] = rep.frame_membership;
    j["residuals"] = res;
    j["rank"] = {{"max", rep.max_rank}, {"counts", rep.rank_counts}};
    j["verdict"] = rep.verdict;
    j["failed_points"] = rep.failed_points;
    j["failures"] = rep.failures;
    return j.dump(2) + "\n";
}

void export_outputs(const RunReport& report, const RunArtifacts& artifacts,
                    const RunSpec& spec) {
    write_text(spec.outputs.report_path, report_to_json_string(report, spec));

    const int N = artifacts.frames.empty() ? 0 : artifacts.frames[0].rows();
    std::string frames;
    frames += "z_re,z_im,lambda_re,lambda_im";
    for (int i = 0; i < N; ++i)
        for (int jc = 0; jc < N; ++jc) {
            frames += ",entry_" + std::to_string(i) + std::to_string(jc) + "_re";
            frames += ",entry_" + std::to_string(i) + std::to_string(jc) + "_im";
        }
    frames += "\n";
    const size_t L = artifacts.lambdas.size();
    for (size_t p = 0; p < artifacts.points.size(); ++p) {
        for (size_t l = 0; l < L; ++l) {
            const CMatrix& F = artifacts.frames[p * L + l];
            frames += fmt_double(artifacts.points[p].z.real()) + "," +
                      fmt_double(artifacts.points[p].z.imag()) + "," +
                      fmt_double(artifacts.lambdas[l].real()) + "," +
                      fmt_double(artifacts.lambdas[l].imag());
            for (int i = 0; i < N; ++i)
                for (int jc = 0; jc < N; ++jc) {
                    frames += "," + fmt_double(F(i, jc).real());
                    frames += "," + fmt_double(F(i, jc).imag());
                }
            frames += "\n";
        }
    }
    write_text(spec.outputs.frames_path, frames);

    std::string fields =
        "z_re,z_im,ok,rank,cond_d,residual_F,iwasawa,reality,membership,twist,"
        "degree_bound,d00_re,d00_im,d01_re,d01_im,q00_re,q00_im,q01_re,q01_im,"
        "u00_re,u00_im,u01_re,u01_im,failure\n";
    for (const PointRecord& r : artifacts.points) {
        std::string failure = r.failure;
        for (char& c : failure)
            if (c == ',' || c == '\n') c = ';';
        fields += fmt_double(r.z.real()) + "," + fmt_double(r.z.imag()) + "," +
                  (r.ok ? "1" : "0") + "," + std::to_string(r.rank) + "," +
                  fmt_double(r.cond_d) + "," + fmt_double(r.residual_F) + "," +
                  fmt_double(r.iwasawa) + "," + fmt_double(r.reality) + "," +
                  fmt_double(r.membership) + "," + fmt_double(r.twist) + "," +
                  fmt_double(r.degree_bound) + "," + fmt_double(r.d00.real()) + "," +
                  fmt_double(r.d00.imag()) + "," + fmt_double(r.d01.real()) + "," +
                  fmt_double(r.d01.imag()) + "," + fmt_double(r.q00.real()) + "," +
                  fmt_double(r.q00.imag()) + "," + fmt_double(r.q01.real()) + "," +
                  fmt_double(r.q01.imag()) + "," + fmt_double(r.u00.real()) + "," +
                  fmt_double(r.u00.imag()) + "," + fmt_double(r.u01.real()) + "," +
                  fmt_double(r.u01.imag()) + "," + failure + "\n";
    }
    write_text(spec.outputs.fields_path, fields);
}

} // namespace loopforge
