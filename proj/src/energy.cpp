#include "cdbeam/energy.hpp"

#include <array>
#include <cmath>

namespace cdbeam {

double canonical_stress(double eps, const BeamProperties& props, double lambda) {
    return 2.0 * props.E * props.alpha / 3.0 * eps - props.E * lambda;
}

Vector stationary_stress(const Vector& w, const AssembledSystem& sys) {
    return sys.K_inv * (sys.stress_quadratic(w) - sys.lam_vec);
}

double total_complementary(const Vector& w, const Vector& sigma, const AssembledSystem& sys) {
    const SymMatrix G = sys.gap_matrix(sigma);
    return 0.5 * w.dot(G * w) - 0.5 * sigma.dot(sys.K * sigma) - sys.lam_vec.dot(sigma) - sys.f_vec.dot(w) - sys.c;
}

double total_potential(const Vector& w, const AssembledSystem& sys) {
    return total_complementary(w, stationary_stress(w, sys), sys);
}

namespace {

Vector admissible_solve(const SymMatrix& G, const Vector& f) {
    LdltFactorization fac(G);
    if (fac.singular()) throw InadmissibleStressError("G(sigma) is singular: det G(sigma) = 0");
    return fac.solve(f);
}

}  // namespace

double pure_complementary(const Vector& sigma, const AssembledSystem& sys) {
    const Vector w = admissible_solve(sys.gap_matrix(sigma), sys.f_vec);
    return -0.5 * sys.f_vec.dot(w) - 0.5 * sigma.dot(sys.K * sigma) - sys.lam_vec.dot(sigma) - sys.c;
}

double reformulated_complementary(const Vector& sigma, const Vector& w, const AssembledSystem& sys) {
    const Vector u = admissible_solve(sys.gap_matrix(sigma), sys.f_vec);
    return -0.5 * sys.f_vec.dot(u) - 0.5 * w.dot(sys.geometric_matrix(sigma) * w) - 0.5 * sys.lam_vec.dot(sigma) - sys.c;
}

Vector equilibrium_residual(const Vector& w, const Vector& sigma, const AssembledSystem& sys) {
    return sys.gap_matrix(sigma) * w - sys.f_vec;
}

Vector constitutive_residual(const Vector& w, const Vector& sigma, const AssembledSystem& sys) {
    return sys.stress_quadratic(w) - sys.K * sigma - sys.lam_vec;
}

EnergyReport gap_and_residuals(const Vector& w, const Vector& sigma, const AssembledSystem& sys) {
    EnergyReport r;
    const SymMatrix G = sys.gap_matrix(sigma);
    r.Pi_p = total_potential(w, sys);
    r.Xi = total_complementary(w, sigma, sys);
    r.gap_quadratic = 0.5 * w.dot(G * w);
    r.res_equilibrium = (G * w - sys.f_vec).norm();
    r.res_constitutive = constitutive_residual(w, sigma, sys).norm();
    try {
        r.Pi_d = pure_complementary(sigma, sys);
        r.Pi_d_defined = true;
        r.duality_gap = r.Pi_p - r.Pi_d;
    } catch (const SingularMatrixError&) {
        r.Pi_d_defined = false;
    }
    return r;
}

Vector primal_gradient(const Vector& w, const AssembledSystem& sys) {
    return sys.gap_matrix(stationary_stress(w, sys)) * w - sys.f_vec;
}

SymMatrix primal_hessian(const Vector& w, const AssembledSystem& sys) {
    const Matrix B = sys.stress_jacobian(w);
    SymMatrix h = sys.gap_matrix(stationary_stress(w, sys)) + B * sys.K_inv * B.transpose();
    return 0.5 * (h + h.transpose());
}

Vector recover_axial(const Vector& w_full, const BeamProperties& props, double lambda, const Mesh& mesh) {
    if (w_full.size() != mesh.full_dofs()) throw DomainError("recover_axial needs a full-length deflection vector");
    // 3-point Gauss integrates the quartic w'^2 exactly.
    const std::array<double, 3> xg = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    const std::array<double, 3> wg = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double axial = lambda / (2.0 * props.h * (1.0 + props.mu));

    Vector u(mesh.m + 1);
    u[0] = 0.0;
    for (int e = 0; e < mesh.m; ++e) {
        const double Le = mesh.node_x[e + 1] - mesh.node_x[e];
        const Eigen::Vector4d we = w_full.segment<4>(2 * e);
        double integral = 0.0;
        for (int g = 0; g < 3; ++g) {
            const double slope = shape_functions(xg[g], Le).dNw.dot(we);
            integral += wg[g] * (0.5 * (1.0 + props.mu) * slope * slope + axial);
        }
        u[e + 1] = u[e] - 0.5 * Le * integral;
    }
    return u;
}

}  // namespace cdbeam
