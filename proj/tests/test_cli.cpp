#include "cdbeam/output.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cdbeam;
namespace fs = std::filesystem;

namespace {

const std::string kBase = R"(beam:
  E: 1000
  mu: 0.3
  L: 1
  height: 0.1
load:
  type: uniform
  magnitude: 0.1
  lambda: 0.01
support: simply_supported
elements: 8
)";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cdbeam_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ConfigError parse_error(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no ConfigError for:\n" << text;
    return ConfigError("", 0, "", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(ParseConfig, BundledSimplySupportedCase) {
    const auto cfg = parse_config(std::string(CDBEAM_SOURCE_DIR) + "/configs/ss_uniform.cfg");
    EXPECT_EQ(cfg.E, 1000.0);
    EXPECT_EQ(cfg.mu, 0.3);
    EXPECT_EQ(cfg.L, 1.0);
    EXPECT_EQ(cfg.height, 0.1);
    EXPECT_EQ(cfg.props().h, 0.05);
    EXPECT_EQ(cfg.load.axial_lambda, 0.01);
    ASSERT_TRUE(std::holds_alternative<UniformLoad>(cfg.load.lateral));
    EXPECT_EQ(cfg.load.magnitude(), 0.1);
    EXPECT_EQ(cfg.support.kind, SupportKind::SimplySupported);
    EXPECT_EQ(cfg.elements, std::vector<int>{40});
    EXPECT_EQ(cfg.branches.size(), 3u);
}

TEST(ParseConfig, OptionalSections) {
    const auto cfg = parse_config_text(kBase + R"(branches: [global, localmin]
symmetry: none
sweep:
  lambda: {from: 0.005, to: 0.015, steps: 3}
solver:
  outer_tol: 1e-9
  global_sdp: frozen
oracle:
  starts: 12
output: somewhere
)");
    EXPECT_EQ(cfg.branches, (std::set<BranchKind>{BranchKind::GlobalMin, BranchKind::LocalMin}));
    EXPECT_EQ(cfg.symmetry, SymmetryPolicy::None);
    ASSERT_TRUE(cfg.lambda_sweep.has_value());
    const auto v = cfg.lambda_sweep->values();
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NEAR(v[1], 0.01, 1e-15);
    EXPECT_EQ(cfg.settings.outer_tol, 1e-9);
    EXPECT_EQ(cfg.settings.global_form, GlobalSdpForm::Frozen);
    EXPECT_EQ(cfg.oracle.n_starts, 12);
    EXPECT_EQ(cfg.output_dir, "somewhere");
}

TEST(ParseConfig, MissingLambdaNamesKey) {
    const auto e = parse_error(replace(kBase, "  lambda: 0.01\n", ""));
    EXPECT_EQ(e.key(), "load.lambda");
    EXPECT_NE(std::string(e.what()).find("load.lambda"), std::string::npos);
}

TEST(ParseConfig, OddMeshWithPointLoad) {
    const auto e = parse_error(replace(replace(kBase, "uniform", "point"), "elements: 8", "elements: 9"));
    EXPECT_EQ(e.key(), "elements");
    EXPECT_NE(std::string(e.what()).find("center"), std::string::npos);
    EXPECT_EQ(e.line(), 11);
}

TEST(ParseConfig, UnknownKeyReportsLine) {
    const auto e = parse_error(replace(kBase, "  L: 1\n", "  L: 1\n  width: 3\n"));
    EXPECT_EQ(e.key(), "beam.width");
    EXPECT_EQ(e.line(), 5);
    const auto top = parse_error(kBase + "colour: red\n");
    EXPECT_EQ(top.key(), "colour");
    EXPECT_EQ(top.line(), 12);
}

TEST(ParseConfig, RejectsInvalidValues) {
    EXPECT_EQ(parse_error(replace(kBase, "mu: 0.3", "mu: 0.5")).key(), "beam");
    EXPECT_EQ(parse_error(replace(kBase, "lambda: 0.01", "lambda: -1")).key(), "load.lambda");
    EXPECT_EQ(parse_error(replace(kBase, "E: 1000", "E: stiff")).key(), "beam.E");
    EXPECT_EQ(parse_error(replace(kBase, "simply_supported", "hinged")).key(), "support");
    EXPECT_EQ(parse_error(kBase + "solver:\n  outer_max_iter: 0\n").key(), "solver");
    EXPECT_EQ(parse_error(kBase + "branches: sideways\n").key(), "branches");
    EXPECT_EQ(parse_error("beam: [1, 2\n").line(), 2);
    EXPECT_THROW(parse_config("/nonexistent/cdbeam.cfg"), ConfigError);
}

TEST(ParseConfig, CustomSupport) {
    const auto cfg = parse_config_text(replace(kBase, "support: simply_supported", "support: custom\nsupport_dofs: [0, 1]"));
    EXPECT_EQ(cfg.support.kind, SupportKind::Custom);
    EXPECT_EQ(cfg.support.fixed_dofs(8), (std::vector<int>{0, 1}));
    EXPECT_EQ(parse_error(replace(kBase, "support: simply_supported", "support: custom\nsupport_dofs: [0, 99]")).key(),
              "elements");
}

TEST(ParseBranches, Lists) {
    EXPECT_EQ(parse_branches("all").size(), 3u);
    EXPECT_EQ(parse_branches("global"), std::set<BranchKind>{BranchKind::GlobalMin});
    EXPECT_EQ(parse_branches("localmax,localmin"), (std::set<BranchKind>{BranchKind::LocalMax, BranchKind::LocalMin}));
    EXPECT_THROW(parse_branches("global,upward"), DomainError);
    EXPECT_THROW(parse_branches(""), DomainError);
}

TEST(ParseLambdaSweep, Forms) {
    const auto s = parse_lambda_sweep("lambda=0.005:0.015:3");
    EXPECT_EQ(s.from, 0.005);
    EXPECT_EQ(s.to, 0.015);
    EXPECT_EQ(s.steps, 3);
    EXPECT_EQ(parse_lambda_sweep("lambda=0.01:0.01:1").values(), std::vector<double>{0.01});
    EXPECT_THROW(parse_lambda_sweep("mu=0:1:2"), DomainError);
    EXPECT_THROW(parse_lambda_sweep("lambda=0.1:0.2"), DomainError);
    EXPECT_THROW(parse_lambda_sweep("lambda=0.1:0.2:0"), DomainError);
}

TEST(RunAndEmit, WritesAllArtifacts) {
    const auto dir = scratch("all");
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.allow_partial = true;
    std::ostringstream log;
    EXPECT_EQ(run_and_emit(parse_config_text(kBase), opt, log), 0);
    for (const char* f : {"branch_global_min.csv", "branch_local_max.csv", "branch_local_min.csv", "summary.json",
                          "convergence.log", "plot.gp"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    EXPECT_EQ(slurp(dir / "branch_global_min.csv").substr(0, 17), "x,w,theta,sigma,u");
    const auto plot = slurp(dir / "plot.gp");
    EXPECT_NE(plot.find("branch_global_min.csv"), std::string::npos);
    EXPECT_NE(plot.find("red"), std::string::npos);
    EXPECT_NE(plot.find("green"), std::string::npos);
    EXPECT_NE(plot.find("blue"), std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_TRUE(summary.contains("lambda_cr"));
    EXPECT_TRUE(summary["lambda_cr"].contains("rayleigh"));
    EXPECT_TRUE(summary["lambda_cr"].contains("scaled"));
    for (const char* k : {"global_min", "local_max", "local_min"}) {
        const auto& b = summary["branches"][k];
        for (const char* field : {"Pi_p", "Pi_d", "gap_quadratic", "duality_gap", "res_equilibrium", "res_constitutive"})
            EXPECT_TRUE(b["energy"].contains(field)) << k << "." << field;
        EXPECT_TRUE(b.contains("iterations"));
        EXPECT_TRUE(b.contains("classification"));
    }
}

TEST(RunAndEmit, GlobalOnlyWritesOneCsv) {
    const auto dir = scratch("global");
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.branches = parse_branches("global");
    std::ostringstream log;
    EXPECT_EQ(run_and_emit(parse_config_text(kBase), opt, log), 0);
    int csv = 0;
    for (const auto& e : fs::directory_iterator(dir)) csv += e.path().extension() == ".csv";
    EXPECT_EQ(csv, 1);
    EXPECT_TRUE(fs::exists(dir / "branch_global_min.csv"));
}

TEST(RunAndEmit, FailedBranchSetsExitStatus) {
    // The local branches do not converge for this case; see the acceptance report.
    const auto dir = scratch("partial");
    RunOptions opt;
    opt.out_dir = dir.string();
    std::ostringstream log;
    const int strict = run_and_emit(parse_config_text(kBase), opt, log);
    opt.allow_partial = true;
    EXPECT_EQ(run_and_emit(parse_config_text(kBase), opt, log), 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    bool all = true;
    for (const char* k : {"global_min", "local_max", "local_min"}) all = all && summary["branches"][k]["converged"].get<bool>();
    EXPECT_EQ(strict, all ? 0 : 1);
}

TEST(RunAndEmit, CsvRoundTripReproducesResiduals) {
    const auto dir = scratch("roundtrip");
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.allow_partial = true;
    std::ostringstream log;
    const auto cfg = parse_config_text(kBase);
    run_and_emit(cfg, opt, log);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    const auto req = cfg.request(8, 0.01);
    const auto full = assemble(req.props, req.load, req.support, req.mesh);
    for (BranchKind k : {BranchKind::GlobalMin, BranchKind::LocalMax, BranchKind::LocalMin}) {
        const auto rows = read_branch_csv((dir / branch_file_name(k)).string());
        ASSERT_EQ(rows.size(), 9u);
        Vector sigma(9);
        for (int i = 0; i < 9; ++i) sigma[i] = rows[i].sigma;
        const Vector w = full.reduction.restrict(deflection_from_csv(rows));
        const auto r = gap_and_residuals(w, sigma, full);
        const auto& e = summary["branches"][to_string(k)]["energy"];
        EXPECT_NEAR(r.res_equilibrium, e["res_equilibrium"].get<double>(), 1e-12) << to_string(k);
        EXPECT_NEAR(r.res_constitutive, e["res_constitutive"].get<double>(), 1e-12) << to_string(k);
        EXPECT_NEAR(r.Pi_p, e["Pi_p"].get<double>(), 1e-12) << to_string(k);
        EXPECT_NEAR(r.gap_quadratic, e["gap_quadratic"].get<double>(), 1e-12) << to_string(k);
    }
}

TEST(RunAndEmit, Deterministic) {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    std::ostringstream log;
    RunOptions opt;
    opt.allow_partial = true;
    opt.oracle = true;
    const auto cfg = parse_config_text(kBase);
    opt.out_dir = a.string();
    run_and_emit(cfg, opt, log);
    opt.out_dir = b.string();
    opt.jobs = 3;
    run_and_emit(cfg, opt, log);
    for (const auto& e : fs::directory_iterator(a)) {
        const auto name = e.path().filename();
        EXPECT_EQ(slurp(e.path()), slurp(b / name)) << name;
    }
}

TEST(RunAndEmit, SweepWritesPerPointDirectories) {
    const auto dir = scratch("sweep");
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.allow_partial = true;
    opt.branches = parse_branches("global");
    opt.sweep = parse_lambda_sweep("lambda=0.005:0.015:3");
    opt.jobs = 2;
    std::ostringstream log;
    EXPECT_EQ(run_and_emit(parse_config_text(kBase), opt, log), 0);
    EXPECT_TRUE(fs::exists(dir / "sweep_summary.csv"));
    int dirs = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_directory()) continue;
        ++dirs;
        EXPECT_TRUE(fs::exists(e.path() / "summary.json"));
    }
    EXPECT_EQ(dirs, 3);
}

TEST(RunAndEmit, DumpSdpWritesSdpaFiles) {
    const auto dir = scratch("dump");
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.allow_partial = true;
    opt.dump_sdp = true;
    std::ostringstream log;
    run_and_emit(parse_config_text(kBase), opt, log);
    EXPECT_TRUE(fs::exists(dir / "sdp_dual.dat-s"));
    EXPECT_TRUE(fs::exists(dir / "sdp_global_min_step1.dat-s"));
}
