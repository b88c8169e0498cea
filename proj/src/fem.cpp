#include "cdbeam/fem.hpp"

#include <algorithm>
#include <cmath>

namespace cdbeam {

ShapeValues shape_functions(double xi, double Le) {
    if (!(Le > 0.0)) throw DomainError("element length must be positive");
    if (std::abs(xi) > 1.0 + 1e-12) throw DomainError("reference coordinate outside [-1, 1]");

    const double a = 1.0 - xi, b = 1.0 + xi;
    const double jac = 2.0 / Le;  // d xi / dx
    ShapeValues s;
    s.Nw << 0.25 * a * a * (2.0 + xi),
            Le / 8.0 * a * a * b,
            0.25 * b * b * (2.0 - xi),
            Le / 8.0 * b * b * (xi - 1.0);
    // d/dxi
    Eigen::Vector4d d1;
    d1 << -0.75 * (1.0 - xi * xi),
          Le / 8.0 * (a * (-2.0 * b + a)),
          0.75 * (1.0 - xi * xi),
          Le / 8.0 * (b * (2.0 * (xi - 1.0) + b));
    Eigen::Vector4d d2;
    d2 << 1.5 * xi,
          Le / 8.0 * (6.0 * xi - 2.0),
          -1.5 * xi,
          Le / 8.0 * (6.0 * xi + 2.0);
    s.dNw = jac * d1;
    s.d2Nw = jac * jac * d2;
    s.Nsig << 0.5 * a, 0.5 * b;
    return s;
}

Eigen::Matrix4d element_bending_matrix(double Le, double EI) {
    const double L2 = Le * Le;
    Eigen::Matrix4d k;
    k << 12.0, 6.0 * Le, -12.0, 6.0 * Le,
         6.0 * Le, 4.0 * L2, -6.0 * Le, 2.0 * L2,
         -12.0, -6.0 * Le, 12.0, -6.0 * Le,
         6.0 * Le, 2.0 * L2, -6.0 * Le, 4.0 * L2;
    return (EI / (L2 * Le)) * k;
}

Eigen::Matrix4d element_gap_matrix(const ElementStress& es, double Le, double EI) {
    if (!(Le > 0.0)) throw DomainError("element length must be positive");
    const double s1 = es.left, s2 = es.right;
    const double L2 = Le * Le, L3 = L2 * Le;
    Eigen::Matrix4d g;
    g(0, 0) = 3.0 * (s1 + s2) / (5.0 * Le) + 12.0 * EI / L3;
    g(0, 1) = s2 / 10.0 + 6.0 * EI / L2;
    g(0, 2) = -g(0, 0);
    g(0, 3) = s1 / 10.0 + 6.0 * EI / L2;
    g(1, 1) = Le * (s1 / 10.0 + s2 / 30.0) + 4.0 * EI / Le;
    g(1, 2) = -g(0, 1);
    g(1, 3) = -Le / 60.0 * (s1 + s2) + 2.0 * EI / Le;
    g(2, 2) = g(0, 0);
    g(2, 3) = -g(0, 3);
    g(3, 3) = Le * (s1 / 30.0 + s2 / 10.0) + 4.0 * EI / Le;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
}

Eigen::Matrix4d element_geometric_matrix(const ElementStress& es, double Le) {
    if (!(Le > 0.0)) throw DomainError("element length must be positive");
    const double s1 = es.left, s2 = es.right;
    Eigen::Matrix4d m;
    m(0, 0) = 3.0 / (10.0 * Le) * (s1 + s2);
    m(0, 1) = s2 / 20.0;
    m(0, 2) = -m(0, 0);
    m(0, 3) = s1 / 20.0;
    m(1, 1) = Le / 60.0 * (3.0 * s1 + s2);
    m(1, 2) = -m(0, 1);
    m(1, 3) = -Le / 120.0 * (s1 + s2);
    m(2, 2) = m(0, 0);
    m(2, 3) = -m(0, 3);
    m(3, 3) = Le / 60.0 * (s1 + 3.0 * s2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) m(i, j) = m(j, i);
    return m;
}

ElementStaticParts element_static_parts(const BeamProperties& props, double lambda, double Le) {
    if (!(Le > 0.0)) throw DomainError("element length must be positive");
    ElementStaticParts p;
    p.Ke << 0.5, 0.25, 0.25, 0.5;
    p.Ke *= Le / (props.E * props.alpha);
    p.lam_e.setConstant(0.75 * lambda * Le / props.alpha);
    p.c_e = 3.0 * props.E * Le * lambda * lambda / (4.0 * props.alpha);
    return p;
}

ElementLoad element_load(const LoadCase& load, double Le, int e, const Mesh& mesh) {
    ElementLoad out;
    if (const auto* u = std::get_if<UniformLoad>(&load.lateral)) {
        const double f = u->f;
        out.fe << f * Le / 2.0, f * Le * Le / 12.0, f * Le / 2.0, -f * Le * Le / 12.0;
    } else {
        const auto& p = std::get<CenterPointLoad>(load.lateral);
        if (mesh.m % 2 != 0) throw DomainError("a center point load needs an even element count");
        if (e == mesh.m / 2) out.nodal = NodalForce{2 * (mesh.m / 2), p.f};
    }
    return out;
}

DofReduction::DofReduction(int n_full, std::vector<int> fixed, Matrix basis, SymmetryMode mode)
    : n_full_(n_full), fixed_(std::move(fixed)), basis_(std::move(basis)), mode_(mode) {}

Vector DofReduction::expand(const Vector& reduced) const {
    return basis_ * reduced;
}

Vector DofReduction::restrict(const Vector& full) const {
    return basis_.transpose() * full;
}

SymMatrix DofReduction::restrict(const SymMatrix& full) const {
    if (mode_ == SymmetryMode::None) {
        // Selection basis: plain row/column elimination.
        const int n = reduced_size();
        SymMatrix r(n, n);
        std::vector<int> keep(n);
        for (int j = 0; j < n; ++j) {
            Eigen::Index idx;
            basis_.col(j).maxCoeff(&idx);
            keep[j] = static_cast<int>(idx);
        }
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) r(i, j) = full(keep[i], keep[j]);
        return r;
    }
    return basis_.transpose() * full * basis_;
}

DofReduction make_reduction(const SupportSpec& support, const Mesh& mesh, SymmetryMode mode) {
    const int m = mesh.m;
    const int n = mesh.full_dofs();
    const auto fixed = support.fixed_dofs(m);
    auto is_fixed = [&](int d) { return std::binary_search(fixed.begin(), fixed.end(), d); };

    std::vector<Vector> cols;
    if (mode == SymmetryMode::None) {
        for (int d = 0; d < n; ++d) {
            if (is_fixed(d)) continue;
            Vector v = Vector::Zero(n);
            v[d] = 1.0;
            cols.push_back(v);
        }
    } else {
        if (!support.mirror_symmetric(m)) throw DomainError("mirror reduction needs a mirror-symmetric support");
        // Under x -> L - x deflections map to deflections, rotations flip sign.
        for (int d = 0; d < n; ++d) {
            if (is_fixed(d)) continue;
            const int node = d / 2;
            const bool rotation = d % 2 == 1;
            const int image = 2 * (m - node) + d % 2;
            if (image < d) continue;
            Vector v = Vector::Zero(n);
            if (image == d) {
                if (rotation) continue;  // center rotation is antisymmetric
                v[d] = 1.0;
            } else {
                v[d] = 1.0 / std::sqrt(2.0);
                v[image] = (rotation ? -1.0 : 1.0) / std::sqrt(2.0);
            }
            cols.push_back(v);
        }
    }
    Matrix basis(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = cols[j];
    return DofReduction(n, fixed, std::move(basis), mode);
}

bool mirror_symmetric_problem(const SupportSpec& support, const Mesh& mesh) {
    // Both supported lateral load types are symmetric about midspan.
    return support.mirror_symmetric(mesh.m);
}

SymMatrix AssembledSystem::gap_matrix(const Vector& sigma) const {
    SymMatrix g = G0;
    for (int i = 0; i < stress_count(); ++i) {
        if (sigma[i] != 0.0) g.noalias() += sigma[i] * Hsens[i];
    }
    return g;
}

SymMatrix AssembledSystem::geometric_matrix(const Vector& sigma) const {
    SymMatrix mm = SymMatrix::Zero(n_red, n_red);
    for (int i = 0; i < stress_count(); ++i) {
        if (sigma[i] != 0.0) mm.noalias() += (0.5 * sigma[i]) * Hsens[i];
    }
    return mm;
}

Vector AssembledSystem::stress_quadratic(const Vector& w) const {
    Vector b(stress_count());
    for (int i = 0; i < stress_count(); ++i) b[i] = 0.5 * w.dot(Hsens[i] * w);
    return b;
}

Matrix AssembledSystem::stress_jacobian(const Vector& w) const {
    Matrix B(n_red, stress_count());
    for (int i = 0; i < stress_count(); ++i) B.col(i) = Hsens[i] * w;
    return B;
}

AssembledSystem assemble(const BeamProperties& props, const LoadCase& load, const SupportSpec& support,
                         const Mesh& mesh, SymmetryMode symmetry) {
    validate_load(load, mesh);
    const int m = mesh.m;
    const int n = mesh.full_dofs();
    const double EI = props.EI();

    SymMatrix G0 = SymMatrix::Zero(n, n);
    std::vector<SymMatrix> H(m + 1, SymMatrix::Zero(n, n));
    SymMatrix K = SymMatrix::Zero(m + 1, m + 1);
    Vector lam = Vector::Zero(m + 1);
    Vector f = Vector::Zero(n);
    double c = 0.0;

    for (int e = 0; e < m; ++e) {
        const double Le = mesh.node_x[e + 1] - mesh.node_x[e];
        const int d0 = 2 * e;
        G0.block<4, 4>(d0, d0) += element_gap_matrix({0.0, 0.0}, Le, EI);
        // dG^e/d sigma = 2 dM^e/d sigma.
        H[e].block<4, 4>(d0, d0) += 2.0 * element_geometric_matrix({1.0, 0.0}, Le);
        H[e + 1].block<4, 4>(d0, d0) += 2.0 * element_geometric_matrix({0.0, 1.0}, Le);

        const auto sp = element_static_parts(props, load.axial_lambda, Le);
        K.block<2, 2>(e, e) += sp.Ke;
        lam.segment<2>(e) += sp.lam_e;
        c += sp.c_e;

        const auto el = element_load(load, Le, e, mesh);
        f.segment<4>(d0) += el.fe;
        if (el.nodal) f[el.nodal->dof] += el.nodal->value;
    }

    AssembledSystem sys;
    sys.props = props;
    sys.load = load;
    sys.support = support;
    sys.mesh = mesh;
    sys.reduction = make_reduction(support, mesh, symmetry);
    sys.n_full = n;
    sys.n_red = sys.reduction.reduced_size();
    sys.G0 = sys.reduction.restrict(G0);
    sys.Hsens.reserve(m + 1);
    for (const auto& Hi : H) sys.Hsens.push_back(sys.reduction.restrict(Hi));
    sys.K = K;
    sys.K_inv = Eigen::LLT<Matrix>(K).solve(Matrix::Identity(m + 1, m + 1));
    sys.lam_vec = lam;
    sys.f_vec = sys.reduction.restrict(f);
    sys.c = c;
    return sys;
}

}  // namespace cdbeam
