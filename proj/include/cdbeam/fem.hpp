#pragma once

#include "cdbeam/linalg.hpp"
#include "cdbeam/model.hpp"

#include <optional>
#include <vector>

namespace cdbeam {

/// Hermite-cubic deflection and linear stress shape functions on one element.
struct ShapeValues {
    Eigen::Vector4d Nw;    ///< deflection shape functions (w_e, theta_e, w_e+1, theta_e+1)
    Eigen::Vector4d dNw;   ///< d/dx
    Eigen::Vector4d d2Nw;  ///< d^2/dx^2
    Eigen::Vector2d Nsig;  ///< stress shape functions
};

/// Evaluates shape functions at the reference coordinate xi = 2(x - x_e)/Le - 1.
ShapeValues shape_functions(double xi, double Le);

/// Nodal dual stress pair of one element.
struct ElementStress {
    double left = 0.0;
    double right = 0.0;
};

/// Bending stiffness EI * int N''N''^T dx of one element.
Eigen::Matrix4d element_bending_matrix(double Le, double EI);

/// Element gap matrix G^e: bending stiffness plus the stress-weighted int sigma N'N'^T dx.
Eigen::Matrix4d element_gap_matrix(const ElementStress& es, double Le, double EI);

/// M^e, half of the stress-weighted part of G^e.
Eigen::Matrix4d element_geometric_matrix(const ElementStress& es, double Le);

struct ElementStaticParts {
    Eigen::Matrix2d Ke;
    Eigen::Vector2d lam_e;
    double c_e = 0.0;
};

ElementStaticParts element_static_parts(const BeamProperties& props, double lambda, double Le);

struct NodalForce {
    int dof = 0;  ///< global w-DOF index
    double value = 0.0;
};

struct ElementLoad {
    Eigen::Vector4d fe = Eigen::Vector4d::Zero();
    std::optional<NodalForce> nodal;
};

/**
 * Consistent load vector of element `e`. A center point load produces a zero
 * element vector; element m/2 (whose left node is the center) carries the
 * nodal force on the center deflection DOF.
 */
ElementLoad element_load(const LoadCase& load, double Le, int e, const Mesh& mesh);

enum class SymmetryMode {
    None,   ///< boundary conditions only
    Mirror  ///< restrict w to fields symmetric about midspan
};

/**
 * @brief Map between full w-DOFs and the reduced coordinates the solver works in.
 *
 * The reduced space is spanned by orthonormal columns of `basis()`, so
 * `restrict(expand(r)) == r` and norms/spectra of restricted operators are
 * those of the operator on the subspace.
 */
class DofReduction {
public:
    DofReduction() = default;
    DofReduction(int n_full, std::vector<int> fixed, Matrix basis, SymmetryMode mode);

    int full_size() const { return n_full_; }
    int reduced_size() const { return static_cast<int>(basis_.cols()); }
    const std::vector<int>& fixed() const { return fixed_; }
    const Matrix& basis() const { return basis_; }
    SymmetryMode mode() const { return mode_; }

    Vector expand(const Vector& reduced) const;
    Vector restrict(const Vector& full) const;
    SymMatrix restrict(const SymMatrix& full) const;

private:
    int n_full_ = 0;
    std::vector<int> fixed_;
    Matrix basis_;
    SymmetryMode mode_ = SymmetryMode::None;
};

DofReduction make_reduction(const SupportSpec& support, const Mesh& mesh, SymmetryMode mode);

/// True when support and lateral load are both mirror symmetric about midspan.
bool mirror_symmetric_problem(const SupportSpec& support, const Mesh& mesh);

/**
 * @brief Global mixed finite element system.
 *
 * G(sigma) = G0 + sum_i sigma_i Hsens[i] acts on reduced w-coordinates;
 * K, lam_vec and c act on the m+1 nodal stresses, which carry no essential
 * conditions.
 */
struct AssembledSystem {
    BeamProperties props;
    LoadCase load;
    SupportSpec support;
    Mesh mesh;
    DofReduction reduction;

    int n_full = 0;
    int n_red = 0;
    SymMatrix G0;
    std::vector<SymMatrix> Hsens;
    SymMatrix K;
    Matrix K_inv;
    Vector lam_vec;
    Vector f_vec;
    double c = 0.0;

    int stress_count() const { return mesh.m + 1; }

    /// G(sigma).
    SymMatrix gap_matrix(const Vector& sigma) const;
    /// M(sigma) = (1/2) sum_i sigma_i Hsens[i].
    SymMatrix geometric_matrix(const Vector& sigma) const;
    /// b(w)_i = (1/2) w^T Hsens[i] w.
    Vector stress_quadratic(const Vector& w) const;
    /// Columns Hsens[i] w; the Jacobian of b(w) is its transpose.
    Matrix stress_jacobian(const Vector& w) const;
};

AssembledSystem assemble(const BeamProperties& props, const LoadCase& load, const SupportSpec& support,
                         const Mesh& mesh, SymmetryMode symmetry = SymmetryMode::None);

}  // namespace cdbeam
