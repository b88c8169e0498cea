#pragma once

#include "cdbeam/branch_sdp.hpp"
#include "cdbeam/buckling.hpp"
#include "cdbeam/energy.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cdbeam {

enum class Classification { GlobalMin, LocalMax, LocalMin, Indeterminate };

std::string to_string(Classification c);

struct IterationRecord {
    int k = 0;
    LmiStatus sdp_status = LmiStatus::Optimal;
    int sdp_newton = 0;
    double sdp_objective = 0.0;
    double rel_change = 0.0;
    double w_norm = 0.0;
    double res_equilibrium = 0.0;
    double res_constitutive = 0.0;
};

/**
 * @brief One triality branch as produced by the PD-SDP loop.
 *
 * `w`, `sigma`, the inertia and Hessian fields refer to the solver space
 * (boundary-reduced, possibly mirror-reduced); `energy`, `inertia_G_full` and
 * `min_eig_hess_full` are re-evaluated on the boundary-reduced space without
 * the mirror restriction.
 */
struct BranchSolution {
    BranchKind kind = BranchKind::GlobalMin;
    Vector w;
    Vector sigma;
    int iterations = 0;
    bool outer_converged = false;  ///< relative change of w below outer_tol
    bool converged = false;        ///< outer_converged and both residuals within tolerance
    bool failed = false;           ///< SDP failure, singular G or divergence
    std::string message;
    EnergyReport energy;
    Classification classification = Classification::Indeterminate;
    Inertia inertia_G;
    Inertia inertia_G_full;
    double min_eig_hess = 0.0;
    double max_eig_hess = 0.0;
    double min_eig_hess_full = 0.0;
    std::vector<IterationRecord> history;
};

/// Runs the PD-SDP outer loop for one branch. `settings` must be resolved.
BranchSolution pdsdp_branch(BranchKind kind, const AssembledSystem& sys, const SolverSettings& settings,
                            const Vector& w0);

/// Triality class of a branch from G(sigma) inertia and the primal Hessian (fills the inertia fields).
Classification classify(BranchSolution& sol, const AssembledSystem& sys, const SolverSettings& settings);

enum class SymmetryPolicy { Auto, None };

std::string to_string(SymmetryPolicy s);

struct TrialityRequest {
    BeamProperties props;
    LoadCase load;
    SupportSpec support;
    Mesh mesh;
    SolverSettings settings;
    std::set<BranchKind> branches = {BranchKind::GlobalMin, BranchKind::LocalMax, BranchKind::LocalMin};
    SymmetryPolicy symmetry = SymmetryPolicy::Auto;
};

struct TrialityReport {
    TrialityRequest request;
    SolverSettings resolved_settings;
    bool mirror_reduced = false;
    CriticalLoad lambda_cr;
    std::optional<BranchSolution> global_min;
    std::optional<BranchSolution> local_max;
    std::optional<BranchSolution> local_min;
    std::vector<std::string> errors;

    const std::optional<BranchSolution>& branch(BranchKind k) const;
};

/// Solver-space system the request runs on (mirror-reduced under SymmetryPolicy::Auto when admissible).
AssembledSystem assemble_for(const TrialityRequest& req);

TrialityReport run_triality(const TrialityRequest& req);

/// Full nodal deflection (length 2(m+1)) of a solver-space vector.
Vector full_deflection(const Vector& w, const AssembledSystem& sys);

}  // namespace cdbeam
