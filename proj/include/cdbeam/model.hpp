#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cdbeam {

/// Thrown when an input violates a physical or structural precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * @brief Material and geometry constants of the nonlinear (Gao) beam.
 *
 * `h` is the half-height of the cross-section; `I` and `alpha` are derived
 * from it and the Poisson ratio and are never set independently.
 */
struct BeamProperties {
    double E = 0.0;      ///< elastic modulus (Pa)
    double mu = 0.0;     ///< Poisson ratio
    double L = 0.0;      ///< beam length (m)
    double h = 0.0;      ///< half-height (m)
    double I = 0.0;      ///< second moment of area, 2h^3/3 (m^4)
    double alpha = 0.0;  ///< nonlinearity coefficient, 3h(1 - mu^2) (m)

    double EI() const { return E * I; }
};

/// Builds a validated BeamProperties. Throws DomainError on non-physical input.
BeamProperties derive_constants(double E, double mu, double L, double h);

struct UniformLoad {
    double f = 0.0;  ///< force per unit length (N/m)
};

struct CenterPointLoad {
    double f = 0.0;  ///< concentrated force (N) at midspan
};

using LateralLoad = std::variant<UniformLoad, CenterPointLoad>;

struct LoadCase {
    LateralLoad lateral = UniformLoad{};
    double axial_lambda = 0.0;  ///< compressive load parameter (m^2)

    double magnitude() const;
    bool is_point_load() const { return std::holds_alternative<CenterPointLoad>(lateral); }
};

enum class SupportKind { SimplySupported, Clamped, Custom };

/**
 * @brief Essential boundary conditions on the deflection DOFs.
 *
 * Global w-DOF numbering is node-major: DOF 2k is the deflection and 2k+1 the
 * rotation of node k. `custom_fixed` is only read for SupportKind::Custom.
 */
struct SupportSpec {
    SupportKind kind = SupportKind::SimplySupported;
    std::vector<int> custom_fixed;

    static SupportSpec simply_supported() { return {SupportKind::SimplySupported, {}}; }
    static SupportSpec clamped() { return {SupportKind::Clamped, {}}; }
    static SupportSpec custom(std::vector<int> fixed) { return {SupportKind::Custom, std::move(fixed)}; }

    /// Sorted list of fixed global DOF indices for a mesh of `m` elements.
    std::vector<int> fixed_dofs(int m) const;
    /// True when the fixed set is invariant under the mirror map x -> L - x.
    bool mirror_symmetric(int m) const;
};

std::string to_string(SupportKind kind);

struct Mesh {
    int m = 0;        ///< element count
    double Le = 0.0;  ///< element length
    std::vector<double> node_x;

    static Mesh uniform(double L, int m);
    int node_count() const { return m + 1; }
    int full_dofs() const { return 2 * (m + 1); }
};

/// Validates a load against a mesh (point loads need a center node).
void validate_load(const LoadCase& load, const Mesh& mesh);

/// Which SDP formulation drives the global-minimum branch.
enum class GlobalSdpForm {
    ExactDual,  ///< Schur-complement SDP of max Pi_d(sigma) s.t. G(sigma) >= 0
    Frozen      ///< w frozen at the previous outer iterate inside phi(sigma; w)
};

struct SolverSettings {
    double outer_tol = 1e-8;
    int outer_max_iter = 100;
    double sdp_tol = 1e-10;
    int sdp_max_iter = 200;
    /// Margins for strict definiteness; a non-positive value means "derive from G0".
    double strictness_eps = 0.0;
    double classify_tol = 0.0;
    GlobalSdpForm global_form = GlobalSdpForm::ExactDual;

    /// Returns a copy where unset scale-dependent tolerances are filled from max|G0_ij|.
    SolverSettings resolved(double g0_max_abs) const;
    void validate() const;
};

}  // namespace cdbeam
