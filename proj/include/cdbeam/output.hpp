#pragma once

#include "cdbeam/config.hpp"

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cdbeam {

struct RunOptions {
    std::string out_dir;
    std::optional<int> elements;
    std::optional<LambdaSweep> sweep;
    std::optional<std::set<BranchKind>> branches;
    bool oracle = false;
    bool allow_partial = false;
    bool dump_sdp = false;
    int jobs = 1;
};

struct CsvNode {
    double x = 0.0;
    double w = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    double u = 0.0;
};

/// One solved (m, lambda) point of a run.
struct PointResult {
    TrialityReport report;
    std::optional<std::vector<CriticalPoint>> oracle;
    std::string dir;
};

std::string branch_file_name(BranchKind kind);

void write_branch_csv(const std::string& path, const BranchSolution& sol, const AssembledSystem& sys);
std::vector<CsvNode> read_branch_csv(const std::string& path);

/// Full-length nodal deflection vector rebuilt from CSV rows.
Vector deflection_from_csv(const std::vector<CsvNode>& rows);

std::string summary_json(const PointResult& point);
void write_convergence_log(const std::string& path, const TrialityReport& report);
void write_plot_script(const std::string& path, const TrialityReport& report);
void write_sweep_table(const std::string& path, const std::vector<PointResult>& points);

/// Writes every artifact of one point into `point.dir`.
void emit_point(const PointResult& point, bool dump_sdp);

/// Runs every configured point and writes its artifacts. Returns the process exit status.
int run_and_emit(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);

}  // namespace cdbeam
