#include "cdbeam/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

namespace cdbeam {

namespace {

// Bunch-Kaufman growth constant (1 + sqrt(17)) / 8.
const double kBunchKaufmanAlpha = (1.0 + std::sqrt(17.0)) / 8.0;

void swap_symmetric(Matrix& a, int i, int j) {
    if (i == j) return;
    a.row(i).swap(a.row(j));
    a.col(i).swap(a.col(j));
}

}  // namespace

double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

SymMatrix symmetrized(const Matrix& a) {
    SymMatrix s = a.triangularView<Eigen::Lower>();
    s.triangularView<Eigen::StrictlyUpper>() = a.triangularView<Eigen::StrictlyLower>().transpose();
    return s;
}

LdltFactorization::LdltFactorization(const SymMatrix& a_in, double rel_pivot_tol) {
    if (a_in.rows() != a_in.cols()) throw std::invalid_argument("LDL^T needs a square matrix");
    const int n = static_cast<int>(a_in.rows());
    Matrix a = symmetrized(a_in);
    const double tol = rel_pivot_tol * std::max(max_abs(a), 1e-300);

    l_ = Matrix::Identity(n, n);
    d_.assign(n, 0.0);
    off_.assign(n, 0.0);
    block_.assign(n, 0);
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;

    int k = 0;
    auto interchange = [&](int i, int j) {
        if (i == j) return;
        swap_symmetric(a, i, j);
        // Rows of L already computed (columns < current pivot) follow the permutation.
        std::swap(perm_[i], perm_[j]);
        for (int c = 0; c < k; ++c) std::swap(l_(i, c), l_(j, c));
    };

    while (k < n) {
        double colmax = 0.0;
        int r = k;
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > colmax) {
                colmax = std::abs(a(i, k));
                r = i;
            }
        }
        const double akk = std::abs(a(k, k));

        if (std::max(akk, colmax) == 0.0) {
            d_[k] = 0.0;
            block_[k] = 1;
            singular_ = true;
            ++k;
            continue;
        }

        int size = 1;
        if (akk < kBunchKaufmanAlpha * colmax) {
            double rowmax = 0.0;
            for (int j = k; j < n; ++j) {
                if (j != r) rowmax = std::max(rowmax, std::abs(a(r, j)));
            }
            if (akk * rowmax >= kBunchKaufmanAlpha * colmax * colmax) {
                size = 1;
            } else if (std::abs(a(r, r)) >= kBunchKaufmanAlpha * rowmax) {
                interchange(k, r);
                size = 1;
            } else {
                interchange(k + 1, r);
                size = 2;
            }
        }

        if (size == 1) {
            const double d = a(k, k);
            d_[k] = d;
            block_[k] = 1;
            if (std::abs(d) <= tol) singular_ = true;
            if (d != 0.0) {
                for (int i = k + 1; i < n; ++i) l_(i, k) = a(i, k) / d;
                for (int j = k + 1; j < n; ++j) {
                    for (int i = j; i < n; ++i) {
                        a(i, j) -= l_(i, k) * a(j, k);
                        a(j, i) = a(i, j);
                    }
                }
            }
            k += 1;
        } else {
            const double d11 = a(k, k), d21 = a(k + 1, k), d22 = a(k + 1, k + 1);
            const double det = d11 * d22 - d21 * d21;
            d_[k] = d11;
            d_[k + 1] = d22;
            off_[k] = d21;
            block_[k] = 2;
            block_[k + 1] = 0;
            // Smallest eigenvalue magnitude of the 2x2 pivot decides singularity.
            const double tr = 0.5 * (d11 + d22);
            const double disc = std::sqrt(0.25 * (d11 - d22) * (d11 - d22) + d21 * d21);
            if (std::min(std::abs(tr - disc), std::abs(tr + disc)) <= tol) singular_ = true;
            if (det != 0.0) {
                for (int i = k + 2; i < n; ++i) {
                    const double ai1 = a(i, k), ai2 = a(i, k + 1);
                    l_(i, k) = (ai1 * d22 - ai2 * d21) / det;
                    l_(i, k + 1) = (ai2 * d11 - ai1 * d21) / det;
                }
                for (int j = k + 2; j < n; ++j) {
                    for (int i = j; i < n; ++i) {
                        a(i, j) -= l_(i, k) * a(j, k) + l_(i, k + 1) * a(j, k + 1);
                        a(j, i) = a(i, j);
                    }
                }
            }
            k += 2;
        }
    }
}

Inertia LdltFactorization::pivot_inertia() const {
    Inertia in;
    const int n = size();
    for (int k = 0; k < n; ++k) {
        if (block_[k] == 1) {
            if (d_[k] > 0.0) ++in.positive;
            else if (d_[k] < 0.0) ++in.negative;
            else ++in.zero;
        } else if (block_[k] == 2) {
            const double det = d_[k] * d_[k + 1] - off_[k] * off_[k];
            const double tr = d_[k] + d_[k + 1];
            if (det < 0.0) {
                ++in.positive;
                ++in.negative;
            } else if (det > 0.0) {
                if (tr > 0.0) in.positive += 2;
                else in.negative += 2;
            } else {
                ++in.zero;
                if (tr > 0.0) ++in.positive;
                else if (tr < 0.0) ++in.negative;
                else ++in.zero;
            }
        }
    }
    return in;
}

Vector LdltFactorization::solve(const Vector& b) const {
    const int n = size();
    if (b.size() != n) throw std::invalid_argument("right-hand side size mismatch");
    if (singular_) throw SingularMatrixError("symmetric matrix is singular to working precision");

    Vector y(n);
    for (int i = 0; i < n; ++i) y[i] = b[perm_[i]];
    // L z = y
    for (int i = 0; i < n; ++i) {
        double s = y[i];
        for (int j = 0; j < i; ++j) s -= l_(i, j) * y[j];
        y[i] = s;
    }
    // D u = z
    for (int k = 0; k < n;) {
        if (block_[k] == 1) {
            y[k] /= d_[k];
            k += 1;
        } else {
            const double d11 = d_[k], d21 = off_[k], d22 = d_[k + 1];
            const double det = d11 * d22 - d21 * d21;
            const double z1 = y[k], z2 = y[k + 1];
            y[k] = (d22 * z1 - d21 * z2) / det;
            y[k + 1] = (d11 * z2 - d21 * z1) / det;
            k += 2;
        }
    }
    // L^T v = u
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= l_(j, i) * y[j];
        y[i] = s;
    }
    Vector x(n);
    for (int i = 0; i < n; ++i) x[perm_[i]] = y[i];
    return x;
}

Vector solve_sym(const SymMatrix& a, const Vector& b) {
    return LdltFactorization(a).solve(b);
}

Inertia inertia(const SymMatrix& a, double tol) {
    const int n = static_cast<int>(a.rows());
    const Matrix id = Matrix::Identity(n, n);
    // Sylvester: eigenvalues > tol are the positive pivots of A - tol I, those < -tol
    // the negative pivots of A + tol I.
    const Inertia upper = LdltFactorization(symmetrized(a) - tol * id, 0.0).pivot_inertia();
    const Inertia lower = LdltFactorization(symmetrized(a) + tol * id, 0.0).pivot_inertia();
    Inertia in;
    in.positive = upper.positive;
    in.negative = lower.negative;
    in.zero = n - in.positive - in.negative;
    return in;
}

SymEigen eig_sym(const SymMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a));
    if (solver.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double gen_eig_sym_min(const SymMatrix& a, const SymMatrix& b) {
    const SymMatrix bs = symmetrized(b);
    Eigen::LLT<Matrix> llt(bs);
    if (llt.info() != Eigen::Success) throw SingularMatrixError("generalized eigenproblem: B is not positive definite");
    // Congruence C = L^{-1} A L^{-T} keeps the spectrum of the pencil (A, B).
    Matrix c = llt.matrixL().solve(symmetrized(a));
    c = llt.matrixL().solve(c.transpose()).transpose();
    return eig_sym(symmetrized(c)).values[0];
}

}  // namespace cdbeam
