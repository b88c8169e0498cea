#include "cdbeam/branch_sdp.hpp"

namespace cdbeam {

std::string to_string(BranchKind kind) {
    switch (kind) {
        case BranchKind::GlobalMin: return "global_min";
        case BranchKind::LocalMax: return "local_max";
        case BranchKind::LocalMin: return "local_min";
    }
    return "unknown";
}

int t_index(const AssembledSystem& sys) {
    return sys.stress_count();
}

int dual_t_index(const AssembledSystem& sys) {
    return sys.stress_count() + 1;
}

namespace {

// sign * G(sigma) - shift I in the top-left n x n corner of a block.
void add_gap_family(LmiBlock& blk, const AssembledSystem& sys, double sign, double shift) {
    const int n = sys.n_red;
    blk.A0.topLeftCorner(n, n) += sign * sys.G0 - shift * Matrix::Identity(n, n);
    for (int i = 0; i < sys.stress_count(); ++i) blk.A[i].add_dense(sign * sys.Hsens[i]);
}

// [[2K^{-1}, sigma], [sigma^T, corner]] with the corner filled by the caller.
LmiBlock schur_block(const AssembledSystem& sys, int variables) {
    const int ns = sys.stress_count();
    LmiBlock blk(ns + 1, variables);
    blk.A0.topLeftCorner(ns, ns) = 2.0 * symmetrized(sys.K_inv);
    for (int i = 0; i < ns; ++i) blk.A[i].add(i, ns, 1.0);
    return blk;
}

}  // namespace

LmiProblem build_branch_sdp(BranchKind kind, const Vector& w, const AssembledSystem& sys,
                            const SolverSettings& settings) {
    if (w.size() != sys.n_red) throw DomainError("frozen deflection has wrong length");
    const int ns = sys.stress_count();
    const int n = sys.n_red;
    const int p = ns + 1;
    const int t = t_index(sys);
    const double eps = settings.strictness_eps;
    const Vector b = sys.stress_quadratic(w);

    LmiProblem prob;
    prob.p = p;
    prob.objective = Vector::Zero(p);
    prob.objective[t] = 1.0;

    if (kind == BranchKind::LocalMin) {
        prob.sense = Sense::Minimize;
        LmiBlock neg(n, p);
        add_gap_family(neg, sys, -1.0, eps);
        prob.blocks.push_back(std::move(neg));

        LmiBlock cert(n + 1, p);
        add_gap_family(cert, sys, -2.0, 0.0);
        cert.A0.block(0, n, n, 1) = sys.f_vec;
        cert.A0.block(n, 0, 1, n) = sys.f_vec.transpose();
        cert.A0(n, n) = sys.c;
        // 1/2 w^T M(sigma) w = sum_i sigma_i b_i / 2
        for (int i = 0; i < ns; ++i) cert.A[i].add(n, n, 0.5 * b[i] + 0.5 * sys.lam_vec[i]);
        cert.A[t].add(n, n, 1.0);
        prob.blocks.push_back(std::move(cert));
        return prob;
    }

    prob.sense = Sense::Maximize;
    LmiBlock gap(n, p);
    if (kind == BranchKind::GlobalMin) add_gap_family(gap, sys, 1.0, 0.0);
    else add_gap_family(gap, sys, -1.0, eps);
    prob.blocks.push_back(std::move(gap));

    LmiBlock schur = schur_block(sys, p);
    schur.A0(ns, ns) = 0.5 * w.dot(sys.G0 * w) - sys.f_vec.dot(w) - sys.c;
    for (int i = 0; i < ns; ++i) schur.A[i].add(ns, ns, b[i] - sys.lam_vec[i]);
    schur.A[t].add(ns, ns, -1.0);
    prob.blocks.push_back(std::move(schur));
    return prob;
}

LmiProblem build_dual_sdp(const AssembledSystem& sys) {
    const int ns = sys.stress_count();
    const int n = sys.n_red;
    const int q = ns;
    const int t = dual_t_index(sys);
    const int p = ns + 2;

    LmiProblem prob;
    prob.p = p;
    prob.sense = Sense::Maximize;
    prob.objective = Vector::Zero(p);
    prob.objective[t] = 1.0;

    LmiBlock gap(n + 1, p);
    add_gap_family(gap, sys, 1.0, 0.0);
    gap.A0.block(0, n, n, 1) = sys.f_vec;
    gap.A0.block(n, 0, 1, n) = sys.f_vec.transpose();
    gap.A[q].add(n, n, 2.0);
    prob.blocks.push_back(std::move(gap));

    LmiBlock schur = schur_block(sys, p);
    schur.A0(ns, ns) = -sys.c;
    for (int i = 0; i < ns; ++i) schur.A[i].add(ns, ns, -sys.lam_vec[i]);
    schur.A[q].add(ns, ns, -1.0);
    schur.A[t].add(ns, ns, -1.0);
    prob.blocks.push_back(std::move(schur));
    return prob;
}

}  // namespace cdbeam
