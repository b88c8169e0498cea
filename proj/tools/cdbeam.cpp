// cdbeam: batch front end for the canonical dual FEM / PD-SDP beam solver.

#include "cdbeam/output.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Canonical dual FEM and PD-SDP post-buckling solver for the nonlinear Gao beam"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "solve the configured load case(s) and write CSV, JSON and plot files");
    std::string config_path;
    std::string branches;
    std::string sweep;
    cdbeam::RunOptions opt;
    int elements = 0;
    run->add_option("--config", config_path, "run configuration (YAML)")->required()->check(CLI::ExistingFile);
    run->add_option("--branches", branches, "all, or a comma list of global,localmax,localmin");
    run->add_option("--elements", elements, "element count (overrides the config)")->check(CLI::PositiveNumber);
    run->add_option("--sweep", sweep, "lambda sweep a:b:n, e.g. lambda=0.005:0.015:3");
    run->add_flag("--oracle", opt.oracle, "also enumerate critical points by multistart Newton");
    run->add_flag("--allow-partial", opt.allow_partial, "exit 0 even if a requested branch fails");
    run->add_option("--jobs", opt.jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
    run->add_option("--out", opt.out_dir, "output directory")->required();
    run->add_flag("--dump-sdp", opt.dump_sdp, "write the first-step SDPs in SDPA sparse format");

    CLI11_PARSE(app, argc, argv);

    try {
        const cdbeam::RunConfig cfg = cdbeam::parse_config(config_path);
        if (!branches.empty()) opt.branches = cdbeam::parse_branches(branches);
        if (!sweep.empty()) opt.sweep = cdbeam::parse_lambda_sweep(sweep);
        if (elements > 0) opt.elements = elements;
        return cdbeam::run_and_emit(cfg, opt, std::cout);
    } catch (const cdbeam::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cdbeam::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
