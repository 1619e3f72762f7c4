// blc_lab: bi-log-concavity certification, isoperimetric constants and
// convolution analyses from JSON distribution specs.

#include <blc/cli.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    blc::cli::RunConfig cfg;
    CLI::App app{"Certify bi-log-concavity and compute isoperimetric, concentration and convolution diagnostics"};
    app.add_option("command", cfg.command, "certify | iso | convolve | criterion | smooth | project | scan-nd")
        ->required()
        ->check(CLI::IsMember(blc::cli::commands()));
    app.add_option("-s,--spec", cfg.spec, "Distribution spec JSON (1-D, or d-D mixture for project/scan-nd)");
    app.add_option("--x", cfg.x, "Spec of X for convolve/criterion");
    app.add_option("--y", cfg.y, "Spec of Y for convolve/criterion");
    app.add_option("-o,--out", cfg.out, "Directory for CSV/JSON artifacts");
    app.add_option("--n", cfg.n, "Grid resolution")->check(CLI::Range(std::size_t{64}, std::size_t{1} << 22));
    double tol = 0.0;
    auto* tol_opt = app.add_option("--tol", tol, "Certification tolerance")->check(CLI::NonNegativeNumber);
    app.add_option("--directions", cfg.directions, "Number of scan directions");
    app.add_option("--pgrid", cfg.pgrid, "Probability grid start:stop:count");
    app.add_option("--rgrid", cfg.rgrid, "Concentration radii start:stop:count or a comma list");
    app.add_option("--sigmas", cfg.sigmas, "Decreasing smoothing scales, e.g. 1,0.5,0.25");
    app.add_option("--u", cfg.u, "Projection direction for project, e.g. 1,0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return blc::cli::kExitUsage;
    }
    if (*tol_opt) cfg.tol = tol;

    try {
        return blc::cli::run(cfg, std::cout);
    } catch (const blc::SpecError& e) {
        std::cerr << "blc_lab: " << e.what() << '\n';
        return blc::cli::kExitUsage;
    } catch (const blc::cli::UsageError& e) {
        std::cerr << "blc_lab: " << e.what() << '\n';
        return blc::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "blc_lab: error: " << e.what() << '\n';
        return blc::cli::kExitRuntime;
    }
}
