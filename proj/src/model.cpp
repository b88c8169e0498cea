#include "cdbeam/model.hpp"

#include <algorithm>
#include <cmath>

namespace cdbeam {

BeamProperties derive_constants(double E, double mu, double L, double h) {
    if (!(E > 0.0)) throw DomainError("elastic modulus E must be positive");
    if (!(L > 0.0)) throw DomainError("beam length L must be positive");
    if (!(h > 0.0)) throw DomainError("half-height h must be positive");
    if (!(mu >= 0.0 && mu < 0.5)) throw DomainError("Poisson ratio mu must lie in [0, 0.5)");

    BeamProperties p;
    p.E = E;
    p.mu = mu;
    p.L = L;
    p.h = h;
    p.I = 2.0 * h * h * h / 3.0;
    p.alpha = 3.0 * h * (1.0 - mu * mu);
    return p;
}

double LoadCase::magnitude() const {
    return std::visit([](const auto& l) { return l.f; }, lateral);
}

std::vector<int> SupportSpec::fixed_dofs(int m) const {
    std::vector<int> fixed;
    switch (kind) {
        case SupportKind::SimplySupported:
            fixed = {0, 2 * m};
            break;
        case SupportKind::Clamped:
            fixed = {0, 1, 2 * m, 2 * m + 1};
            break;
        case SupportKind::Custom:
            fixed = custom_fixed;
            for (int d : fixed) {
                if (d < 0 || d >= 2 * (m + 1)) throw DomainError("custom support DOF out of range");
            }
            break;
    }
    std::sort(fixed.begin(), fixed.end());
    fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());
    return fixed;
}

bool SupportSpec::mirror_symmetric(int m) const {
    const auto fixed = fixed_dofs(m);
    for (int d : fixed) {
        const int node = d / 2;
        const int mirrored = 2 * (m - node) + d % 2;
        if (!std::binary_search(fixed.begin(), fixed.end(), mirrored)) return false;
    }
    return true;
}

std::string to_string(SupportKind kind) {
    switch (kind) {
        case SupportKind::SimplySupported: return "simply_supported";
        case SupportKind::Clamped: return "clamped";
        case SupportKind::Custom: return "custom";
    }
    return "unknown";
}

Mesh Mesh::uniform(double L, int m) {
    if (m < 2) throw DomainError("mesh needs at least 2 elements");
    if (!(L > 0.0)) throw DomainError("mesh length must be positive");
    Mesh mesh;
    mesh.m = m;
    mesh.Le = L / m;
    mesh.node_x.resize(m + 1);
    for (int k = 0; k <= m; ++k) mesh.node_x[k] = k * mesh.Le;
    return mesh;
}

void validate_load(const LoadCase& load, const Mesh& mesh) {
    if (!(load.axial_lambda >= 0.0)) throw DomainError("axial load parameter lambda must be non-negative");
    if (!std::isfinite(load.magnitude())) throw DomainError("lateral load must be finite");
    if (load.is_point_load() && mesh.m % 2 != 0) {
        throw DomainError("a center point load needs an even element count so the load sits on a node");
    }
}

SolverSettings SolverSettings::resolved(double g0_max_abs) const {
    SolverSettings s = *this;
    const double scale = 1.0 + g0_max_abs;
    if (!(s.strictness_eps > 0.0)) s.strictness_eps = 1e-8 * scale;
    if (!(s.classify_tol > 0.0)) s.classify_tol = 1e-9 * scale;
    return s;
}

void SolverSettings::validate() const {
    if (!(outer_tol > 0.0)) throw DomainError("outer_tol must be positive");
    if (!(sdp_tol > 0.0)) throw DomainError("sdp_tol must be positive");
    if (outer_max_iter < 1) throw DomainError("outer_max_iter must be at least 1");
    if (sdp_max_iter < 1) throw DomainError("sdp_max_iter must be at least 1");
    if (strictness_eps < 0.0) throw DomainError("strictness_eps must be positive (or 0 for the default)");
    if (classify_tol < 0.0) throw DomainError("classify_tol must be positive (or 0 for the default)");
}

}  // namespace cdbeam
