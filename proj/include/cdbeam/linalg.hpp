#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace cdbeam {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Routines in this header read the lower triangle only.
using SymMatrix = Eigen::MatrixXd;

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Largest absolute entry.
double max_abs(const Matrix& a);

/// Copies the lower triangle into the upper one.
SymMatrix symmetrized(const Matrix& a);

/**
 * @brief Symmetric-indefinite factorization P A P^T = L D L^T.
 *
 * Bunch-Kaufman partial pivoting with 1x1 and 2x2 diagonal blocks, so
 * negative-definite and indefinite matrices factor as stably as SPD ones.
 */
class LdltFactorization {
public:
    /// Factors A. Pivots whose magnitude falls below `rel_pivot_tol * max|A|` mark A singular.
    explicit LdltFactorization(const SymMatrix& a, double rel_pivot_tol = 1e-14);

    int size() const { return static_cast<int>(perm_.size()); }
    bool singular() const { return singular_; }

    /// Sign counts of the block pivots (exactly zero pivots are counted as zero).
    Inertia pivot_inertia() const;

    /// Solves A x = b. Throws SingularMatrixError if the factorization is singular.
    Vector solve(const Vector& b) const;

private:
    Matrix l_;                 // unit lower triangular factor (permuted order)
    std::vector<double> d_;    // diagonal of D
    std::vector<double> off_;  // off_[k] = D(k+1,k) when a 2x2 block starts at k
    std::vector<int> block_;   // 1 or 2 at the first index of each block, 0 inside a 2x2
    std::vector<int> perm_;    // row k of the permuted matrix is row perm_[k] of A
    bool singular_ = false;
};

/// Solves A x = b for symmetric (possibly indefinite) A.
Vector solve_sym(const SymMatrix& a, const Vector& b);

/// Eigenvalue sign counts; eigenvalues with |value| <= tol count as zero.
Inertia inertia(const SymMatrix& a, double tol);

struct SymEigen {
    Vector values;   ///< ascending
    Matrix vectors;  ///< orthonormal columns
};

SymEigen eig_sym(const SymMatrix& a);

/// Smallest Lambda with A v = Lambda B v; B must be positive definite.
double gen_eig_sym_min(const SymMatrix& a, const SymMatrix& b);

}  // namespace cdbeam
