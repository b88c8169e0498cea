#pragma once

#include "cdbeam/oracle.hpp"
#include "cdbeam/solver.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdbeam {

/// Parse or validation failure; `line` is 1-based (0 when not tied to a line).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& key, const std::string& what);

    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

struct LambdaSweep {
    double from = 0.0;
    double to = 0.0;
    int steps = 1;

    std::vector<double> values() const;
};

struct RunConfig {
    double E = 0.0;
    double mu = 0.0;
    double L = 0.0;
    double height = 0.0;  ///< full section height 2h
    LoadCase load;
    SupportSpec support;
    std::vector<int> elements;
    std::set<BranchKind> branches = {BranchKind::GlobalMin, BranchKind::LocalMax, BranchKind::LocalMin};
    SymmetryPolicy symmetry = SymmetryPolicy::Auto;
    std::optional<LambdaSweep> lambda_sweep;
    SolverSettings settings;
    OracleSettings oracle;
    std::string output_dir;
    std::string source;

    BeamProperties props() const;
    TrialityRequest request(int m, double lambda) const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");

/// Checks every model invariant (properties, mesh, load/mesh compatibility, solver settings).
void validate_config(const RunConfig& cfg);

/// "all" or a comma list of global, localmax, localmin.
std::set<BranchKind> parse_branches(const std::string& text);

/// "lambda=a:b:n".
LambdaSweep parse_lambda_sweep(const std::string& text);

}  // namespace cdbeam
