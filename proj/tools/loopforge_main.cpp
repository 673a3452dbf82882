#include <cstdlib>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "loopforge/pipeline.hpp"

namespace {

using namespace loopforge;

int resolve_threads(int cli_threads, int spec_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("LOOPFORGE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return spec_threads;
}

int cmd_run(const std::string& config_path, int cli_threads, bool quiet) {
    RunSpec spec;
    try {
        spec = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    spec.parallelism = resolve_threads(cli_threads, spec.parallelism);

    RunArtifacts artifacts;
    RunReport rep;
    try {
        rep = run_pipeline(spec, &artifacts);
        export_outputs(rep, artifacts, spec);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const PatternViolation& e) {
        std::cerr << "config error: potential is outside the pipeline family: " << e.what()
                  << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (!quiet) {
        std::cout << "verdict: " << rep.verdict << "\n";
        std::cout << "max rank: " << rep.max_rank << "\n";
        std::cout << "residuals:\n";
        std::cout << "  iwasawa            " << rep.iwasawa << "\n";
        std::cout << "  reality            " << rep.reality << "\n";
        std::cout << "  membership         " << rep.membership << "\n";
        std::cout << "  twist              " << rep.twist << "\n";
        std::cout << "  degree_bound       " << rep.degree_bound << "\n";
        std::cout << "  mc_pattern         " << rep.mc_pattern << "\n";
        std::cout << "  a12                " << rep.a12_residual << "\n";
        std::cout << "  lightlike_const    " << rep.lightlike_const << "\n";
        std::cout << "  lightlike_isotropy " << rep.lightlike_isotropy << "\n";
        std::cout << "  consequence_ratio  " << rep.consequence_ratio << "\n";
        if (!rep.failures.empty()) {
            std::cout << "failures (" << rep.failures.size() << "):\n";
            for (const std::string& f : rep.failures) std::cout << "  " << f << "\n";
        }
        std::cout << "report: " << spec.outputs.report_path << "\n";
    }

    if (rep.numerical_failure()) return 2;
    if (rep.residual_above_tolerance(spec.tolerances)) return 3;
    return 0;
}

int cmd_verify_oracle(bool quiet) {
    const ConstantSet C = build_constants(3);
    std::mt19937_64 rng(20240917ULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto rc = [&] { return Complex(unif(rng), unif(rng)); };

    double worst = 0.0;
    // pinned case: f3 = 1, f4 = 0 gives q = diag(2, 1/2)
    {
        Oracle2m6 o = oracle_2m6(0, 0, 1, 0, 0, 0, 0, 0);
        CMatrix expect(2, 2, {2.0, 0.0, 0.0, 0.5});
        worst = std::max(worst, (o.q - expect).norm());
        CMatrix f(2, 2, {0, 0, 1, 0}), g(2, 2, {0, 0, 0, 0});
        IwasawaPointFactors fac = solve_point(f, g, C);
        worst = std::max(worst, (fac.q - o.q).norm());
        worst = std::max(worst, (fac.d - o.d).norm());
    }
    for (int trial = 0; trial < 100; ++trial) {
        Complex f1 = rc(), f2 = rc(), f3 = rc(), f4 = rc();
        Complex g2 = -f1 * f2, g3 = -f3 * f4;
        Complex g1 = 0.5 * (-f1 * f4 - f2 * f3), g4 = g1;
        Oracle2m6 o = oracle_2m6(f1, f2, f3, f4, g1, g2, g3, g4);
        CMatrix f(2, 2, {f1, f2, f3, f4}), g(2, 2, {g1, g2, g3, g4});
        IwasawaPointFactors fac = solve_point(f, g, C);
        worst = std::max(worst, (fac.d - o.d).norm());
        worst = std::max(worst, (fac.q - o.q).norm());
        worst = std::max(worst, std::abs(fac.u(0, 2 - 2) - o.u(0, 0)));
        worst = std::max(worst, (fac.u - o.u).norm());
        worst = std::max(worst, (fac.u_sharp - o.u_sharp).norm());
    }
    bool pass = worst <= 1e-10;
    if (!quiet)
        std::cout << (pass ? "PASS" : "FAIL")
                  << " oracle cross-check (100 random points + pinned case), worst defect "
                  << worst << "\n";
    return pass ? 0 : 1;
}

int cmd_selftest(bool quiet) {
    int failures = 0;
    auto check = [&](const char* name, bool ok, double value) {
        if (!ok) ++failures;
        if (!quiet)
            std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << value << ")\n";
    };
    std::mt19937_64 rng(41ULL);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto rc = [&] { return Complex(unif(rng), unif(rng)); };

    for (int m : {3, 4, 5}) {
        const ConstantSet C = build_constants(m);
        const int N = C.dim();
        check("constants certified", true, 0.0);

        // tau_hat involution on a random loop
        LaurentLoop L(N);
        for (int k = -2; k <= 0; ++k) {
            CMatrix M(N, N);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) M(i, j) = rc();
            L.set_coeff(k, M);
        }
        double inv = (tau_hat(tau_hat(L, C), C) - L).coeff_norm();
        check("tau_hat involution", inv <= 1e-15 * (1.0 + L.coeff_norm()), inv);

        // conjugate_P round trip
        double rt = (conjugate_P(conjugate_P(L, C, ConjugateDirection::Forward), C,
                                 ConjugateDirection::Backward) -
                     L)
                        .coeff_norm();
        check("conjugate_P round trip", rt <= 1e-13 * (1.0 + L.coeff_norm()), rt);

        // nilpotent inverse on an admissible loop
        CMatrix u(2, C.n()), g(2, 2);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < C.n(); ++j) u(i, j) = rc();
            for (int j = 0; j < 2; ++j) g(i, j) = rc();
        }
        CMatrix W1 = CMatrix::zero(N, N), W2 = CMatrix::zero(N, N);
        W1.set_block(0, 2, u);
        W1.set_block(2, N - 2, -sharp(u, C));
        W2.set_block(0, N - 2, g);
        LaurentLoop W = LaurentLoop::identity(N);
        W.set_coeff(-1, W1);
        W.set_coeff(-2, W2);
        double ni = (W * nilpotent_inverse(W, C) - LaurentLoop::identity(N)).coeff_norm();
        check("nilpotent inverse", ni <= 1e-13 * (1.0 + W.coeff_norm()), ni);

        // end-to-end point residuals on a random degree-2 potential
        MatPolyZ ft(2, C.n());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < C.n(); ++j) ft.at(i, j) = PolyZ({rc(), rc(), rc()});
        MeromorphicFrame fr = integrate_meromorphic_frame(ft, C);
        Complex z(0.31, -0.17);
        IwasawaPointFactors fac = solve_point(fr.f.eval(z), fr.g.eval(z), C);
        CMatrix L0 = factor_L0(fac, C);
        LaurentLoop H = fr.H_at(z, C);
        FramePair fp = assemble_frame(H, fac, L0, C);
        std::vector<Complex> lams;
        for (int k = 0; k < 8; ++k)
            lams.push_back(std::exp(Complex(0, 1) * (std::acos(-1.0) / 4 * k)));
        FrameResiduals res = frame_residuals(fp.F, fp.Fplus, H, C, lams);
        check("frame iwasawa", res.iwasawa <= 1e-9, res.iwasawa);
        check("frame reality", res.reality <= 1e-10, res.reality);
        check("frame membership", res.membership <= 1e-9, res.membership);
        check("frame degree bound", res.degree_bound == 0.0, res.degree_bound);
    }
    if (!quiet) std::cout << (failures == 0 ? "selftest OK\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"loopforge: explicit Iwasawa factorization of nilpotent-potential loop frames"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run the grid pipeline from a JSON config");
    run->add_option("config", config_path, "path to config JSON")->required();
    run->add_option("--threads", threads, "worker threads (overrides config and env)");
    run->add_flag("--quiet", quiet, "suppress the summary");

    CLI::App* oracle = app.add_subcommand("verify-oracle", "closed-form cross-check suite");
    oracle->add_flag("--quiet", quiet, "suppress output");

    CLI::App* selftest = app.add_subcommand("selftest", "invariant self-tests");
    selftest->add_flag("--quiet", quiet, "suppress output");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, threads, quiet);
    if (oracle->parsed()) return cmd_verify_oracle(quiet);
    return cmd_selftest(quiet);
}
