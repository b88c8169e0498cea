#include "cdbeam/buckling.hpp"

#include "cdbeam/fem.hpp"

namespace cdbeam {

CriticalLoad critical_load(const BeamProperties& props, const SupportSpec& support, const Mesh& mesh) {
    LoadCase load;
    load.lateral = UniformLoad{0.0};
    load.axial_lambda = 0.0;
    const AssembledSystem sys = assemble(props, load, support, mesh, SymmetryMode::None);

    // A uniform stress s contributes s * sum_i H_i; the Euler load is sigma = -E lambda.
    SymMatrix geo = SymMatrix::Zero(sys.n_red, sys.n_red);
    for (const auto& H : sys.Hsens) geo += H;
    geo *= props.E;

    if (inertia(geo, 1e-12 * max_abs(geo)).positive < sys.n_red)
        throw DomainError("geometric stiffness is not positive definite on the reduced space");

    CriticalLoad out;
    try {
        out.rayleigh = gen_eig_sym_min(sys.G0, geo);
    } catch (const SingularMatrixError&) {
        throw DomainError("geometric stiffness is not positive definite on the reduced space");
    }
    out.scaled = (1.0 + props.mu) * (1.0 - props.mu * props.mu) * out.rayleigh;
    return out;
}

}  // namespace cdbeam
