#include "cdbeam/solver.hpp"

#include <cmath>
#include <future>
#include <sstream>

namespace cdbeam {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::GlobalMin: return "global_min";
        case Classification::LocalMax: return "local_max";
        case Classification::LocalMin: return "local_min";
        case Classification::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

std::string to_string(SymmetryPolicy s) {
    return s == SymmetryPolicy::Auto ? "auto" : "none";
}

const std::optional<BranchSolution>& TrialityReport::branch(BranchKind k) const {
    switch (k) {
        case BranchKind::GlobalMin: return global_min;
        case BranchKind::LocalMax: return local_max;
        case BranchKind::LocalMin: return local_min;
    }
    return global_min;
}

namespace {

// Newton on the dual stationarity b(G(sigma)^{-1} f) - K sigma - lam = 0 inside G(sigma) > 0.
Vector refine_dual(Vector sigma, const AssembledSystem& sys) {
    auto residual = [&](const Vector& s, Vector& w, Eigen::LLT<Matrix>& llt) {
        llt.compute(sys.gap_matrix(s));
        if (llt.info() != Eigen::Success) return false;
        w = llt.solve(sys.f_vec);
        return true;
    };
    Eigen::LLT<Matrix> llt;
    Vector w;
    if (!residual(sigma, w, llt)) return sigma;
    Vector F = constitutive_residual(w, sigma, sys);
    for (int it = 0; it < 30; ++it) {
        const double fn = F.norm();
        if (fn <= 1e-15 * (1.0 + (sys.K * sigma).norm())) break;
        const Matrix B = sys.stress_jacobian(w);
        const Matrix J = B.transpose() * llt.solve(B) + sys.K;
        const Vector d = Eigen::LLT<Matrix>(symmetrized(J)).solve(F);
        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-8; alpha *= 0.5) {
            const Vector s_new = sigma + alpha * d;
            Eigen::LLT<Matrix> llt_new;
            Vector w_new;
            if (!residual(s_new, w_new, llt_new)) continue;
            const Vector F_new = constitutive_residual(w_new, s_new, sys);
            if (F_new.norm() < fn) {
                sigma = s_new;
                w = w_new;
                F = F_new;
                llt = llt_new;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    return sigma;
}

}  // namespace

BranchSolution pdsdp_branch(BranchKind kind, const AssembledSystem& sys, const SolverSettings& settings,
                            const Vector& w0) {
    if (w0.size() != sys.n_red) throw DomainError("initial deflection has wrong length");
    BranchSolution sol;
    sol.kind = kind;
    const int ns = sys.stress_count();
    const double w0_norm = std::max(w0.norm(), 1e-300);
    const double f_norm = sys.f_vec.norm();

    LmiSettings ls;
    ls.tol = settings.sdp_tol;
    ls.max_iter = settings.sdp_max_iter;

    const bool exact_dual = kind == BranchKind::GlobalMin && settings.global_form == GlobalSdpForm::ExactDual;
    std::optional<LmiSolution> dual_cache;
    Vector dual_sigma;

    Vector w = w0;
    Vector sigma = Vector::Zero(ns);
    for (int k = 1; k <= settings.outer_max_iter; ++k) {
        LmiSolution lmi;
        if (exact_dual) {
            // The dual LMI does not involve w, so one solve serves every outer step.
            if (!dual_cache) {
                dual_cache = solve_lmi(build_dual_sdp(sys), ls);
                if (dual_cache->status == LmiStatus::Optimal) dual_sigma = refine_dual(dual_cache->x.head(ns), sys);
            }
            lmi = *dual_cache;
        } else {
            lmi = solve_lmi(build_branch_sdp(kind, w, sys, settings), ls);
        }

        IterationRecord rec;
        rec.k = k;
        rec.sdp_status = lmi.status;
        rec.sdp_newton = lmi.iterations;
        rec.sdp_objective = lmi.objective_value;
        sol.iterations = k;
        if (lmi.status != LmiStatus::Optimal) {
            sol.failed = true;
            sol.message = std::string("SDP ") + to_string(lmi.status) + " at outer step " + std::to_string(k);
            sol.history.push_back(rec);
            break;
        }
        sigma = exact_dual ? dual_sigma : Vector(lmi.x.head(ns));

        LdltFactorization fac(sys.gap_matrix(sigma));
        if (fac.singular()) {
            sol.failed = true;
            sol.message = "G(sigma) singular at outer step " + std::to_string(k);
            sol.history.push_back(rec);
            break;
        }
        const Vector w_new = fac.solve(sys.f_vec);
        const double wn = w_new.norm();
        rec.rel_change = wn > 0.0 ? (w_new - w).norm() / wn : (w_new - w).norm();
        rec.w_norm = wn;
        rec.res_equilibrium = equilibrium_residual(w_new, sigma, sys).norm();
        rec.res_constitutive = constitutive_residual(w_new, sigma, sys).norm();
        sol.history.push_back(rec);
        w = w_new;

        if (!std::isfinite(wn) || wn > 1e6 * w0_norm) {
            sol.failed = true;
            sol.message = "deflection diverged at outer step " + std::to_string(k);
            break;
        }
        if (rec.rel_change <= settings.outer_tol) {
            sol.outer_converged = true;
            break;
        }
    }

    sol.w = w;
    sol.sigma = sigma;
    sol.energy = gap_and_residuals(w, sigma, sys);
    sol.converged = !sol.failed && sol.outer_converged &&
                    sol.energy.res_equilibrium <= settings.outer_tol * (1.0 + f_norm) &&
                    sol.energy.res_constitutive <= settings.outer_tol;
    if (!sol.failed && !sol.outer_converged && sol.message.empty()) sol.message = "outer iteration limit reached";
    if (!sol.failed && sol.outer_converged && !sol.converged) sol.message = "stationarity residuals above tolerance";
    return sol;
}

Classification classify(BranchSolution& sol, const AssembledSystem& sys, const SolverSettings& settings) {
    const double tol = settings.classify_tol;
    sol.inertia_G = inertia(sys.gap_matrix(sol.sigma), tol);
    const SymEigen he = eig_sym(primal_hessian(sol.w, sys));
    sol.min_eig_hess = he.values[0];
    sol.max_eig_hess = he.values[he.values.size() - 1];

    Classification c = Classification::Indeterminate;
    if (sol.converged) {
        if (sol.inertia_G.negative == 0) c = Classification::GlobalMin;
        else if (sol.max_eig_hess <= tol) c = Classification::LocalMax;
        else if (sol.min_eig_hess >= -tol && sol.inertia_G.positive == 0 && sol.inertia_G.zero == 0)
            c = Classification::LocalMin;
    }
    sol.classification = c;
    return c;
}

AssembledSystem assemble_for(const TrialityRequest& req) {
    const bool mirror = req.symmetry == SymmetryPolicy::Auto && mirror_symmetric_problem(req.support, req.mesh);
    return assemble(req.props, req.load, req.support, req.mesh, mirror ? SymmetryMode::Mirror : SymmetryMode::None);
}

Vector full_deflection(const Vector& w, const AssembledSystem& sys) {
    return sys.reduction.expand(w);
}

namespace {

void finalize(BranchSolution& sol, const AssembledSystem& sys, const AssembledSystem& full,
              const SolverSettings& settings) {
    const Vector w_bc = full.reduction.restrict(full_deflection(sol.w, sys));
    sol.energy = gap_and_residuals(w_bc, sol.sigma, full);
    sol.converged = !sol.failed && sol.outer_converged &&
                    sol.energy.res_equilibrium <= settings.outer_tol * (1.0 + full.f_vec.norm()) &&
                    sol.energy.res_constitutive <= settings.outer_tol;
    classify(sol, sys, settings);
    sol.inertia_G_full = inertia(full.gap_matrix(sol.sigma), settings.classify_tol);
    sol.min_eig_hess_full = eig_sym(primal_hessian(w_bc, full)).values[0];
}

}  // namespace

TrialityReport run_triality(const TrialityRequest& req) {
    req.settings.validate();
    TrialityReport report;
    report.request = req;

    const AssembledSystem sys = assemble_for(req);
    report.mirror_reduced = sys.reduction.mode() == SymmetryMode::Mirror;
    const AssembledSystem full =
        report.mirror_reduced ? assemble(req.props, req.load, req.support, req.mesh, SymmetryMode::None) : sys;
    const SolverSettings settings = req.settings.resolved(max_abs(full.G0));
    report.resolved_settings = settings;
    report.lambda_cr = critical_load(req.props, req.support, req.mesh);

    const Vector w_bend = solve_sym(sys.G0, sys.f_vec);

    auto run = [&](BranchKind kind, const Vector& start) -> std::optional<BranchSolution> {
        BranchSolution sol = pdsdp_branch(kind, sys, settings, start);
        if (sol.failed) throw std::runtime_error(to_string(kind) + ": " + sol.message);
        finalize(sol, sys, full, settings);
        return sol;
    };
    auto guarded = [&](BranchKind kind, const Vector& start, std::string& error) -> std::optional<BranchSolution> {
        try {
            return run(kind, start);
        } catch (const std::exception& e) {
            error = e.what();
            return std::nullopt;
        }
    };

    std::string err_global, err_max, err_min;
    std::future<std::optional<BranchSolution>> local_max;
    if (req.branches.count(BranchKind::LocalMax)) {
        local_max = std::async(std::launch::async, [&] { return guarded(BranchKind::LocalMax, w_bend, err_max); });
    }
    const bool need_global = req.branches.count(BranchKind::GlobalMin) || req.branches.count(BranchKind::LocalMin);
    std::optional<BranchSolution> global;
    if (need_global) global = guarded(BranchKind::GlobalMin, w_bend, err_global);
    if (req.branches.count(BranchKind::GlobalMin)) report.global_min = global;
    if (local_max.valid()) report.local_max = local_max.get();
    if (req.branches.count(BranchKind::LocalMin)) {
        const Vector start = global ? Vector(-global->w) : Vector(-w_bend);
        report.local_min = guarded(BranchKind::LocalMin, start, err_min);
    }
    for (const auto* e : {&err_global, &err_max, &err_min}) {
        if (!e->empty()) report.errors.push_back(*e);
    }
    return report;
}

}  // namespace cdbeam
