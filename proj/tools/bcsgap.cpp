// Command-line front end for the BCS gap-equation solver: config-driven
// solves with grid/report export, and tables from the closed-form scalar
// theory (phi, s*, constant-matrix patterns).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bcs/config.hpp"
#include "bcs/io.hpp"
#include "bcs/oracle.hpp"
#include "bcs/solver.hpp"

namespace {

constexpr const char* kVersion = "bcsgap 1.0.0";

bcs::GapField initial_field(const bcs::RunConfig& cfg,
                            const bcs::SplineBasis& basis) {
    if (cfg.init != "file")
        return bcs::make_initial_field(basis, cfg.k, cfg.init, cfg.seed);

    bcs::GapField f(basis, cfg.k);
    for (int a = 0; a < cfg.k; ++a)
        for (int b = 0; b < cfg.k; ++b) {
            const std::string path =
                bcs::io::component_path(cfg.init_file, cfg.k, a, b);
            const auto grid = bcs::io::read_grid(path);
            if (grid.d != cfg.d || grid.n != cfg.n)
                throw bcs::io::IoError("init grid shape mismatch: " + path);
            const auto coeffs =
                bcs::io::coefficients_from_samples(basis, grid.samples);
            std::copy(coeffs.begin(), coeffs.end(), f.component(a, b));
        }
    return f;
}

int run_solve(const std::string& config_path, bool validate_only) {
    bcs::RunConfig cfg;
    try {
        cfg = bcs::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    if (validate_only) {
        std::cout << "config ok\n";
        return 0;
    }

    try {
        const bcs::Lattice lat = cfg.lattice();
        const bcs::SplineBasis basis = cfg.basis();
        const bcs::KernelSpec spec = cfg.kernel();
        bcs::GapField f0 = initial_field(cfg, basis);

        auto [f, report] = bcs::iterate(lat, basis, spec, cfg.solver,
                                        std::move(f0));

        for (int a = 0; a < cfg.k; ++a)
            for (int b = 0; b < cfg.k; ++b) {
                const auto samples =
                    bcs::sample_on_grid(basis, f.component(a, b), 0.5);
                const std::string path =
                    bcs::io::component_path(cfg.solution_path, cfg.k, a, b);
                if (cfg.format == "binary")
                    bcs::io::write_grid_binary(path, basis, cfg.k, a, b,
                                               samples);
                else
                    bcs::io::write_grid_text(path, basis, cfg.k, a, b,
                                             samples);
            }
        bcs::io::write_report(cfg.report_path, report);
        if (!cfg.spectrum_path.empty())
            bcs::io::write_spectrum(cfg.spectrum_path,
                                    bcs::assemble_A(basis, spec));

        std::cout << "converged: " << (report.converged ? "true" : "false")
                  << "  iterations: " << report.iterations
                  << "  classification: " << report.classification
                  << "  residual: " << report.discrete_residual << "\n";
        return report.converged ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    }
}

int run_oracle_phi(double smin, double smax, int num, int dim) {
    std::printf("# s phi(s)  d=%d\n", dim);
    const double ratio = std::pow(smax / smin, 1.0 / std::max(1, num - 1));
    double s = smin;
    for (int i = 0; i < num; ++i, s *= ratio)
        std::printf("%.17g %.17g\n", s, bcs::oracle::phi(s, dim));
    return 0;
}

int run_oracle_sstar(const std::vector<double>& c1s, int dim) {
    std::printf("# C1 s_star residual\n");
    for (double c1 : c1s) {
        const auto fp = bcs::oracle::solve_scalar_constant(c1, dim);
        std::printf("%.17g %.17g %.3g\n", fp.C1, fp.s_star, fp.residual);
    }
    return 0;
}

int run_oracle_classify(double c1, bool constrained, int dim) {
    const auto patterns =
        bcs::oracle::classify_constant_matrix(c1, constrained, dim);
    std::printf("# sigma1 sigma2 form\n");
    for (const auto& p : patterns)
        std::printf("%.17g %.17g %s\n", p.sigma1, p.sigma2,
                    p.antisymmetric_form ? "antisymmetric" : "diagonal");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear BCS gap-equation solver on periodic lattices"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    std::string config_path;
    bool validate_only = false;
    auto* solve = app.add_subcommand("solve", "run a solve from a config file");
    solve->add_option("config", config_path, "config file path")->required();
    solve->add_flag("--validate", validate_only, "parse the config and exit");

    auto* oracle = app.add_subcommand("oracle", "closed-form scalar theory");
    oracle->require_subcommand(1);

    double smin = 1e-4, smax = 1e2;
    int num = 25, dim = 1;
    auto* phi_cmd = oracle->add_subcommand("phi", "print a phi(s) table");
    phi_cmd->add_option("--smin", smin, "smallest s (log grid)");
    phi_cmd->add_option("--smax", smax, "largest s");
    phi_cmd->add_option("--num", num, "number of samples");
    phi_cmd->add_option("--dim", dim, "torus dimension (1 or 2)");

    std::vector<double> c1s;
    int sdim = 1;
    auto* sstar_cmd = oracle->add_subcommand("sstar", "nontrivial roots s*(C1)");
    sstar_cmd->add_option("--C1", c1s, "coupling values")->required();
    sstar_cmd->add_option("--dim", sdim, "torus dimension (1 or 2)");

    double cc1 = 1.0;
    bool constrained = false;
    int cdim = 1;
    auto* cls_cmd =
        oracle->add_subcommand("classify", "constant 2x2 matrix solutions");
    cls_cmd->add_option("--C1", cc1, "coupling")->required();
    cls_cmd->add_flag("--constrained", constrained,
                      "apply the fermionic antisymmetry constraint");
    cls_cmd->add_option("--dim", cdim, "torus dimension (1 or 2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(config_path, validate_only);
        if (phi_cmd->parsed()) return run_oracle_phi(smin, smax, num, dim);
        if (sstar_cmd->parsed()) return run_oracle_sstar(c1s, sdim);
        if (cls_cmd->parsed()) return run_oracle_classify(cc1, constrained, cdim);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout << app.help();
    return 1;
}
