#pragma once

#include "cdbeam/energy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cdbeam {

enum class CriticalKind { Min, Max, Saddle };

std::string to_string(CriticalKind k);

struct CriticalPoint {
    Vector w;
    double Pi_p = 0.0;
    double grad_norm = 0.0;
    Inertia hess_inertia;
    CriticalKind kind = CriticalKind::Saddle;
};

struct PrimalDerivatives {
    Vector gradient;
    SymMatrix hessian;
};

PrimalDerivatives primal_derivatives(const Vector& w, const AssembledSystem& sys);

struct OracleSettings {
    int n_starts = 48;
    std::uint64_t seed = 0x5eed1234u;
    int max_newton = 200;
    double grad_tol = 1e-9;  ///< relative to 1 + |f|
    int jobs = 1;
};

/// Newton's method on grad Pi_p = 0 from one start. Returns false if it did not converge.
bool newton_critical_point(const AssembledSystem& sys, Vector w, int max_iter, double grad_tol, CriticalPoint& out,
                           double classify_tol);

/**
 * Distinct critical points of Pi_p found from deterministic seeds (bending
 * solution, its negation, zero, scaled buckling modes) followed by seeded
 * random starts. Sorted by Pi_p.
 */
std::vector<CriticalPoint> multistart_newton(const AssembledSystem& sys, const SolverSettings& settings,
                                             const OracleSettings& oracle);

/// Pi(w) from the quartic beam integrand, 5-point Gauss per element, on a full-length deflection vector.
double quartic_potential(const Vector& w_full, const BeamProperties& props, const LoadCase& load, const Mesh& mesh);

}  // namespace cdbeam
