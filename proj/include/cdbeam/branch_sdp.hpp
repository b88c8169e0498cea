#pragma once

#include "cdbeam/fem.hpp"
#include "cdbeam/lmi.hpp"

#include <string>

namespace cdbeam {

enum class BranchKind { GlobalMin, LocalMax, LocalMin };

std::string to_string(BranchKind kind);

/**
 * @brief SDP of one PD-SDP outer step with w frozen.
 *
 * Variables are (sigma_0..sigma_m, t). GlobalMin and LocalMax maximize t
 * under [[2K^{-1}, sigma], [sigma^T, phi - t]] >= 0 with
 * phi = 1/2 w^T G(sigma) w - lam^T sigma - f^T w - c, plus G(sigma) >= 0
 * (GlobalMin) or -G(sigma) - eps I >= 0 (LocalMax). LocalMin minimizes t
 * under -G - eps I >= 0 and [[-2G, f], [f^T, phi_hat + t]] >= 0 with
 * phi_hat = 1/2 w^T M(sigma) w + 1/2 lam^T sigma + c.
 *
 * `settings` must be resolved (strictness_eps set).
 */
LmiProblem build_branch_sdp(BranchKind kind, const Vector& w_frozen, const AssembledSystem& sys,
                            const SolverSettings& settings);

/**
 * SDP of max Pi_d(sigma) over G(sigma) >= 0 in variables (sigma, q, t):
 * [[G(sigma), f], [f^T, 2q]] >= 0 and [[2K^{-1}, sigma], [sigma^T, -q - lam^T sigma - c - t]] >= 0.
 * Its optimum t equals max Pi_d; it does not depend on any w iterate.
 */
LmiProblem build_dual_sdp(const AssembledSystem& sys);

/// Index of t in the variable vector of the problem built for `kind` / the dual SDP.
int t_index(const AssembledSystem& sys);
int dual_t_index(const AssembledSystem& sys);

}  // namespace cdbeam
