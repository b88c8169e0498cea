#pragma once

#include "cdbeam/linalg.hpp"

#include <iosfwd>
#include <vector>

namespace cdbeam {

/// Sparse symmetric coefficient matrix; off-diagonal entries are stored once per triangle.
class SparseSym {
public:
    struct Entry {
        int row;
        int col;
        double value;
    };

    /// Adds v at (r, c) and, for r != c, at (c, r).
    void add(int r, int c, double v);
    /// Adds every entry of a dense symmetric matrix above `drop` in magnitude, offset by (r0, r0).
    void add_dense(const SymMatrix& a, int r0 = 0, double drop = 0.0);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    void add_to(Matrix& target, double scale) const;

private:
    std::vector<Entry> entries_;  // full (both triangles) expansion
};

/// One affine constraint A0 + sum_i x_i A_i >= 0.
struct LmiBlock {
    int dim = 0;
    SymMatrix A0;
    std::vector<SparseSym> A;  ///< one per problem variable (may be empty)

    LmiBlock() = default;
    LmiBlock(int dim, int variables);
    SymMatrix value(const Vector& x) const;
};

enum class Sense { Maximize, Minimize };

struct LmiProblem {
    int p = 0;
    Vector objective;
    Sense sense = Sense::Maximize;
    std::vector<LmiBlock> blocks;

    void validate() const;
};

enum class LmiStatus { Optimal, Infeasible, IterationLimit, NumericalFailure };

const char* to_string(LmiStatus s);

struct LmiSettings {
    double tol = 1e-10;      ///< relative barrier gap target
    int max_iter = 200;      ///< Newton steps per phase
    double mu_factor = 0.2;  ///< barrier parameter reduction per outer step
    double box = 1e7;        ///< |x_i| <= box * (1 + |x_start|_inf) keeps the barrier bounded
    std::ostream* trace = nullptr;
};

struct LmiSolution {
    LmiStatus status = LmiStatus::NumericalFailure;
    Vector x;
    double objective_value = 0.0;
    std::vector<double> min_block_eigs;
    int iterations = 0;  ///< Newton steps over both phases
};

/**
 * @brief Log-det barrier path-following solver for small dense LMIs.
 *
 * Without a strictly feasible `x_start`, a big-M phase minimizes a common
 * slack s in A(x) + sI >= 0 until s < 0.
 */
LmiSolution solve_lmi(const LmiProblem& prob, const LmiSettings& settings, const Vector* x_start = nullptr);

/// SDPA sparse format (minimization form, blocks as F_i >= 0 with the sign convention F(x) = -F0 + sum x_i F_i).
void write_sdpa(const LmiProblem& prob, std::ostream& out);

}  // namespace cdbeam
