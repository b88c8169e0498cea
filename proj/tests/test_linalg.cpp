#include "cdbeam/fem.hpp"
#include "cdbeam/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cdbeam;

namespace {

Matrix random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
    return Eigen::HouseholderQR<Matrix>(a).householderQ();
}

SymMatrix from_spectrum(const Vector& lambda, std::mt19937_64& rng) {
    const Matrix q = random_orthogonal(static_cast<int>(lambda.size()), rng);
    return symmetrized(q * lambda.asDiagonal() * q.transpose());
}

// Plain Gaussian elimination with partial pivoting.
Vector gauss_solve(Matrix a, Vector b) {
    const int n = static_cast<int>(a.rows());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        a.row(k).swap(a.row(p));
        std::swap(b[k], b[p]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a.row(i) -= f * a.row(k);
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (int i = n - 1; i >= 0; --i) x[i] = (b[i] - a.row(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / a(i, i);
    return x;
}

}  // namespace

TEST(SolveSym, Identity) {
    const Vector b = Vector::LinSpaced(5, -1.0, 3.0);
    EXPECT_LE((solve_sym(Matrix::Identity(5, 5), b) - b).norm(), 1e-15);
}

TEST(SolveSym, IndefiniteDiagonal) {
    SymMatrix a = Matrix::Zero(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = -3.0;
    const Vector x = solve_sym(a, Vector(Eigen::Vector2d(4.0, 6.0)));
    EXPECT_NEAR(x[0], 2.0, 1e-15);
    EXPECT_NEAR(x[1], -2.0, 1e-15);
}

TEST(SolveSym, BendingStiffnessMatchesGaussianElimination) {
    LoadCase load;
    load.lateral = UniformLoad{0.1};
    const auto sys = assemble(derive_constants(1000, 0.3, 1, 0.05), load, SupportSpec::simply_supported(),
                              Mesh::uniform(1.0, 2));
    const Vector x = solve_sym(sys.G0, sys.f_vec);
    const Vector y = gauss_solve(sys.G0, sys.f_vec);
    EXPECT_LE((x - y).lpNorm<Eigen::Infinity>(), 1e-12 * (1.0 + y.lpNorm<Eigen::Infinity>()));
}

TEST(SolveSym, ResidualOnRandomIndefiniteSystems) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 30;
        Vector spec(n);
        for (int i = 0; i < n; ++i) spec[i] = (u(rng) < 0 ? -1.0 : 1.0) * (0.5 + std::abs(u(rng)));
        const SymMatrix a = from_spectrum(spec, rng);
        Vector b(n);
        for (int i = 0; i < n; ++i) b[i] = u(rng);
        const Vector x = solve_sym(a, b);
        EXPECT_LE((a * x - b).norm(), 1e-10 * (1.0 + b.norm()));
    }
}

TEST(SolveSym, NegativeDefiniteAndZeroDiagonal) {
    // Zero diagonal forces a 2x2 pivot.
    SymMatrix a(3, 3);
    a << 0, 1, 2, 1, 0, 3, 2, 3, 0;
    const Vector b(Eigen::Vector3d(1, -2, 0.5));
    EXPECT_LE((a * solve_sym(a, b) - b).norm(), 1e-14);
    const SymMatrix n = -Matrix::Identity(4, 4) * 5.0;
    EXPECT_LE((solve_sym(n, Vector::Ones(4)) + Vector::Constant(4, 0.2)).norm(), 1e-15);
}

TEST(SolveSym, SingularMatrixThrows) {
    SymMatrix a(2, 2);
    a << 1, 1, 1, 1;
    EXPECT_THROW(solve_sym(a, Vector::Ones(2)), SingularMatrixError);
}

TEST(Inertia, Diagonal) {
    SymMatrix a = Vector(Eigen::Vector3d(1, 2, 3)).asDiagonal();
    EXPECT_EQ(inertia(a, 1e-12), (Inertia{3, 0, 0}));
    a = Vector(Eigen::Vector3d(1, 0, -1)).asDiagonal();
    EXPECT_EQ(inertia(a, 1e-12), (Inertia{1, 1, 1}));
}

TEST(Inertia, KnownSpectrum) {
    std::mt19937_64 rng(11);
    Vector spec(6);
    spec << -2.0, -1e-3, 0.0, 1e-14, 0.5, 4.0;
    const SymMatrix a = from_spectrum(spec, rng);
    EXPECT_EQ(inertia(a, 1e-9), (Inertia{2, 2, 2}));
}

TEST(Inertia, AgreesWithEigenvalueSigns) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 30);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = dim(rng);
        SymMatrix a(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = j; i < n; ++i) a(i, j) = a(j, i) = u(rng);
        const double tol = 1e-10;
        const Vector ev = eig_sym(a).values;
        Inertia expected;
        for (int i = 0; i < n; ++i) {
            if (ev[i] > tol) ++expected.positive;
            else if (ev[i] < -tol) ++expected.negative;
            else ++expected.zero;
        }
        ASSERT_EQ(inertia(a, tol), expected) << "trial " << trial;
    }
}

TEST(EigSym, SmallExamples) {
    SymMatrix a = Vector(Eigen::Vector3d(3, 1, 2)).asDiagonal();
    const auto e = eig_sym(a);
    EXPECT_NEAR(e.values[0], 1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 2.0, 1e-14);
    EXPECT_NEAR(e.values[2], 3.0, 1e-14);
    SymMatrix b(2, 2);
    b << 0, 1, 1, 0;
    const auto f = eig_sym(b);
    EXPECT_NEAR(f.values[0], -1.0, 1e-14);
    EXPECT_NEAR(f.values[1], 1.0, 1e-14);
}

TEST(EigSym, ReconstructionAndOrthonormality) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int n : {1, 4, 17, 60}) {
        SymMatrix a(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = j; i < n; ++i) a(i, j) = a(j, i) = u(rng);
        const auto e = eig_sym(a);
        const double scale = max_abs(a);
        for (int k = 0; k < n; ++k) {
            EXPECT_LE((a * e.vectors.col(k) - e.values[k] * e.vectors.col(k)).norm(), 1e-9 * scale);
            if (k > 0) EXPECT_LE(e.values[k - 1], e.values[k]);
        }
        EXPECT_LE(max_abs(e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)), 1e-10);
        EXPECT_LE(max_abs(e.vectors * e.values.asDiagonal() * e.vectors.transpose() - a), 1e-9 * scale);
    }
}

TEST(GenEig, ProportionalAndDiagonal) {
    std::mt19937_64 rng(3);
    Vector spec(4);
    spec << 0.5, 1, 2, 3;
    const SymMatrix b = from_spectrum(spec, rng);
    EXPECT_NEAR(gen_eig_sym_min(2.0 * b, b), 2.0, 1e-12);
    SymMatrix a = Vector(Eigen::Vector2d(4, 9)).asDiagonal();
    EXPECT_NEAR(gen_eig_sym_min(a, Matrix::Identity(2, 2)), 4.0, 1e-13);
}

TEST(GenEig, MatchesCongruenceOracle) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial;
        Vector sa(n), sb(n);
        for (int i = 0; i < n; ++i) {
            sa[i] = u(rng);
            sb[i] = u(rng);
        }
        const SymMatrix a = from_spectrum(sa, rng);
        const SymMatrix b = from_spectrum(sb, rng);
        // B^{-1/2} A B^{-1/2} via the eigen-decomposition of B.
        const auto eb = eig_sym(b);
        const Matrix bih = eb.vectors * eb.values.cwiseSqrt().cwiseInverse().asDiagonal() * eb.vectors.transpose();
        const double expected = eig_sym(symmetrized(bih * a * bih)).values[0];
        EXPECT_NEAR(gen_eig_sym_min(a, b), expected, 1e-10 * std::abs(expected));
    }
}

TEST(GenEig, RequiresPositiveDefiniteB) {
    SymMatrix b = Vector(Eigen::Vector2d(1, -1)).asDiagonal();
    EXPECT_THROW(gen_eig_sym_min(Matrix::Identity(2, 2), b), SingularMatrixError);
}
