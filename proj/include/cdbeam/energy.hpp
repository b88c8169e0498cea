#pragma once

#include "cdbeam/fem.hpp"

namespace cdbeam {

/// Raised when G(sigma) is singular, i.e. sigma lies outside the admissible dual set.
class InadmissibleStressError : public SingularMatrixError {
public:
    using SingularMatrixError::SingularMatrixError;
};

struct EnergyReport {
    double Pi_p = 0.0;
    double Xi = 0.0;
    double Pi_d = 0.0;
    bool Pi_d_defined = false;
    double gap_quadratic = 0.0;  ///< (1/2) w^T G(sigma) w
    double duality_gap = 0.0;    ///< Pi_p - Pi_d (0 when Pi_d is undefined)
    double res_equilibrium = 0.0;
    double res_constitutive = 0.0;
};

/// Canonical dual stress of a canonical strain: (2 E alpha / 3) eps - E lambda.
double canonical_stress(double eps, const BeamProperties& props, double lambda);

/// sigma_hat(w) = K^{-1}(b(w) - lam_vec).
Vector stationary_stress(const Vector& w, const AssembledSystem& sys);

/// Xi(w, sigma).
double total_complementary(const Vector& w, const Vector& sigma, const AssembledSystem& sys);

/// Pi_p(w) = Xi(w, sigma_hat(w)).
double total_potential(const Vector& w, const AssembledSystem& sys);

/// -1/2 f^T G^{-1} f - 1/2 sigma^T K sigma - lam^T sigma - c. Throws InadmissibleStressError if G is singular.
double pure_complementary(const Vector& sigma, const AssembledSystem& sys);

/// -1/2 f^T G^{-1} f - 1/2 w^T M(sigma) w - 1/2 lam^T sigma - c.
double reformulated_complementary(const Vector& sigma, const Vector& w, const AssembledSystem& sys);

EnergyReport gap_and_residuals(const Vector& w, const Vector& sigma, const AssembledSystem& sys);

/// Equilibrium residual G(sigma) w - f.
Vector equilibrium_residual(const Vector& w, const Vector& sigma, const AssembledSystem& sys);

/// Constitutive residual b(w) - K sigma - lam_vec.
Vector constitutive_residual(const Vector& w, const Vector& sigma, const AssembledSystem& sys);

/// Gradient G(sigma_hat(w)) w - f of Pi_p.
Vector primal_gradient(const Vector& w, const AssembledSystem& sys);

/// Hessian G(sigma_hat(w)) + B(w) K^{-1} B(w)^T of Pi_p.
SymMatrix primal_hessian(const Vector& w, const AssembledSystem& sys);

/**
 * Axial displacement at the nodes, anchored at u(0) = 0, from a full-length
 * deflection vector (use `sys.reduction.expand` first).
 */
Vector recover_axial(const Vector& w_full, const BeamProperties& props, double lambda, const Mesh& mesh);

}  // namespace cdbeam
