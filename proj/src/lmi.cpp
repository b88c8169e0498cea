#include "cdbeam/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <iostream>
#include <stdexcept>

namespace cdbeam {

void SparseSym::add(int r, int c, double v) {
    if (v == 0.0) return;
    entries_.push_back({r, c, v});
    if (r != c) entries_.push_back({c, r, v});
}

void SparseSym::add_dense(const SymMatrix& a, int r0, double drop) {
    for (int c = 0; c < a.cols(); ++c) {
        for (int r = c; r < a.rows(); ++r) {
            const double v = a(r, c);
            if (std::abs(v) > drop) add(r0 + r, r0 + c, v);
        }
    }
}

void SparseSym::add_to(Matrix& target, double scale) const {
    for (const auto& e : entries_) target(e.row, e.col) += scale * e.value;
}

LmiBlock::LmiBlock(int d, int variables) : dim(d), A0(SymMatrix::Zero(d, d)), A(variables) {}

SymMatrix LmiBlock::value(const Vector& x) const {
    SymMatrix v = A0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (x[static_cast<Eigen::Index>(i)] != 0.0) A[i].add_to(v, x[static_cast<Eigen::Index>(i)]);
    }
    return v;
}

void LmiProblem::validate() const {
    if (p < 1) throw std::invalid_argument("LMI problem needs at least one variable");
    if (objective.size() != p) throw std::invalid_argument("objective length differs from variable count");
    for (const auto& b : blocks) {
        if (b.A0.rows() != b.dim || b.A0.cols() != b.dim) throw std::invalid_argument("block constant has wrong size");
        if (static_cast<int>(b.A.size()) != p) throw std::invalid_argument("block coefficient list has wrong length");
        if (max_abs(b.A0 - b.A0.transpose()) > 0.0) throw std::invalid_argument("block constant is not symmetric");
        for (const auto& a : b.A) {
            for (const auto& e : a.entries()) {
                if (e.row < 0 || e.col < 0 || e.row >= b.dim || e.col >= b.dim)
                    throw std::invalid_argument("block coefficient index out of range");
            }
        }
    }
}

const char* to_string(LmiStatus s) {
    switch (s) {
        case LmiStatus::Optimal: return "optimal";
        case LmiStatus::Infeasible: return "infeasible";
        case LmiStatus::IterationLimit: return "iteration_limit";
        case LmiStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

namespace {

// Internal form: minimize c^T x subject to every block >= 0.
struct Barrier {
    const std::vector<LmiBlock>& blocks;
    Vector c;
    int p;
    int total_dim = 0;

    Barrier(const std::vector<LmiBlock>& b, Vector cost) : blocks(b), c(std::move(cost)), p(static_cast<int>(c.size())) {
        for (const auto& blk : blocks) total_dim += blk.dim;
    }

    // log det of every block, or nullopt-like false when some block is not positive definite.
    bool logdet(const Vector& x, double& value, std::vector<Matrix>* inverses) const {
        value = 0.0;
        if (inverses) inverses->clear();
        for (const auto& blk : blocks) {
            const SymMatrix v = blk.value(x);
            Eigen::LLT<Matrix> llt(v);
            if (llt.info() != Eigen::Success) return false;
            const auto& L = llt.matrixLLT();
            double ld = 0.0;
            for (int i = 0; i < blk.dim; ++i) {
                const double d = L(i, i);
                if (!(d > 0.0) || !std::isfinite(d)) return false;
                ld += 2.0 * std::log(d);
            }
            value += ld;
            if (inverses) inverses->push_back(llt.solve(Matrix::Identity(blk.dim, blk.dim)));
        }
        return true;
    }

    // Gradient and Hessian of -sum log det at x, given block inverses.
    void derivatives(const std::vector<Matrix>& W, Vector& g, Matrix& H) const {
        g = Vector::Zero(p);
        H = Matrix::Zero(p, p);
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const auto& blk = blocks[j];
            const Matrix& Wj = W[j];
            std::vector<int> active;
            for (int i = 0; i < p; ++i) {
                if (blk.A[i].empty()) continue;
                active.push_back(i);
                double tr = 0.0;
                for (const auto& e : blk.A[i].entries()) tr += e.value * Wj(e.col, e.row);
                g[i] -= tr;
            }
            for (std::size_t a = 0; a < active.size(); ++a) {
                const auto& Ai = blk.A[active[a]].entries();
                for (std::size_t b = a; b < active.size(); ++b) {
                    const auto& Ak = blk.A[active[b]].entries();
                    // Tr(W A_i W A_k) = sum A_i(r,s) W(s,u) A_k(u,v) W(v,r)
                    double s = 0.0;
                    for (const auto& ei : Ai) {
                        for (const auto& ek : Ak) s += ei.value * ek.value * Wj(ei.col, ek.row) * Wj(ek.col, ei.row);
                    }
                    H(active[a], active[b]) += s;
                    if (a != b) H(active[b], active[a]) += s;
                }
            }
        }
    }
};

enum class PhaseEnd { Converged, EarlyStop, IterationLimit, Failure };

struct PhaseResult {
    PhaseEnd end = PhaseEnd::Failure;
    Vector x;
    int newton_steps = 0;
};

// Path following from a strictly feasible x. `stop` may end the phase early (phase-1 success test).
template <class Stop>
PhaseResult follow_path(const Barrier& bar, Vector x, const LmiSettings& st, Stop stop) {
    PhaseResult res;
    std::vector<Matrix> W;
    double ld = 0.0;
    if (!bar.logdet(x, ld, &W)) {
        res.x = x;
        return res;
    }
    Vector g;
    Matrix H;
    bar.derivatives(W, g, H);

    // Initial barrier weight: best least-squares match of t c against the barrier gradient.
    const double cc = bar.c.squaredNorm();
    double t = 1.0;
    if (cc > 0.0) {
        const double match = -bar.c.dot(g) / cc;
        t = match > 0.0 ? match : 1.0 / (1.0 + std::abs(bar.c.dot(x)));
    }
    const double n_total = static_cast<double>(bar.total_dim);

    enum class Centering { Done, Stopped, Limit, Failure };
    // Damped Newton on t c^T x - log det until the squared decrement drops below `target`.
    auto center = [&](double target, int budget) {
        for (int used = 0;; ++used) {
            if (used >= budget) return Centering::Done;
            if (stop(x)) return Centering::Stopped;
            if (res.newton_steps >= st.max_iter) return Centering::Limit;
            const Vector grad = t * bar.c + g;
            // Jacobi scaling keeps the Newton system usable when the barrier Hessian is badly scaled.
            const Vector d = H.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
            const Matrix Hs = d.asDiagonal() * H * d.asDiagonal();
            if (!Hs.allFinite()) {
                if (st.trace) *st.trace << "non-finite barrier Hessian\n";
                return Centering::Failure;
            }
            // Hs has unit diagonal; roundoff can leave it slightly indefinite, so regularize if needed.
            Eigen::LLT<Matrix> llt(Hs);
            for (double reg = 1e-14; llt.info() != Eigen::Success && reg < 1e-4; reg *= 100.0)
                llt.compute(Hs + reg * Matrix::Identity(Hs.rows(), Hs.cols()));
            if (llt.info() != Eigen::Success) {
                if (st.trace) *st.trace << "barrier Hessian factorization failed\n";
                return Centering::Failure;
            }
            const Vector dx = d.asDiagonal() * llt.solve(-(d.asDiagonal() * grad));
            if (!dx.allFinite()) {
                if (st.trace) *st.trace << "non-finite Newton step\n";
                return Centering::Failure;
            }
            const double slope = grad.dot(dx);
            const double decrement2 = -slope;
            if (!(decrement2 > target)) return Centering::Done;
            ++res.newton_steps;
            if (st.trace) {
                *st.trace << "newton " << res.newton_steps << " t " << t << " obj " << bar.c.dot(x) << " dec2 "
                          << decrement2 << "\n";
            }

            double alpha = 1.0;
            bool accepted = false;
            std::vector<Matrix> W_new;
            double ld_new = 0.0;
            for (int ls = 0; ls < 34; ++ls) {
                const Vector xn = x + alpha * dx;
                if (bar.logdet(xn, ld_new, &W_new)) {
                    // Change in t c^T x - log det, formed without the large absolute values.
                    const double df = alpha * t * bar.c.dot(dx) - (ld_new - ld);
                    if (df <= 0.25 * alpha * slope) {
                        accepted = true;
                        x = xn;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted) return Centering::Done;  // stalled at roundoff level for this t
            ld = ld_new;
            W.swap(W_new);
            bar.derivatives(W, g, H);
            if (alpha < 1e-4) return Centering::Done;
        }
    };
    auto finish = [&](Centering c, PhaseEnd done) {
        res.x = x;
        res.end = c == Centering::Stopped ? PhaseEnd::EarlyStop
                : c == Centering::Limit   ? PhaseEnd::IterationLimit
                : c == Centering::Failure ? PhaseEnd::Failure
                                          : done;
        return res;
    };

    while (true) {
        const Centering c = center(0.1, st.max_iter);
        if (c != Centering::Done) return finish(c, PhaseEnd::Failure);
        if (n_total / t <= st.tol * (1.0 + std::abs(bar.c.dot(x)))) {
            const Centering f = center(1e-8, 20);
            if (f == Centering::Limit) return finish(Centering::Done, PhaseEnd::Converged);
            return finish(f, PhaseEnd::Converged);
        }
        t /= st.mu_factor;
    }
}

void add_box(std::vector<LmiBlock>& blocks, int p, int boxed, double M) {
    // Diagonal block: M - x_i >= 0 and M + x_i >= 0 for the first `boxed` variables.
    LmiBlock box(2 * boxed, p);
    for (int i = 0; i < boxed; ++i) {
        box.A0(i, i) = M;
        box.A0(boxed + i, boxed + i) = M;
        box.A[i].add(i, i, -1.0);
        box.A[i].add(boxed + i, boxed + i, 1.0);
    }
    blocks.push_back(std::move(box));
}

double min_eig_all(const std::vector<LmiBlock>& blocks, const Vector& x, std::vector<double>* per_block) {
    double mn = std::numeric_limits<double>::infinity();
    if (per_block) per_block->clear();
    for (const auto& b : blocks) {
        const double e = eig_sym(b.value(x)).values[0];
        if (per_block) per_block->push_back(e);
        mn = std::min(mn, e);
    }
    return mn;
}

}  // namespace

LmiSolution solve_lmi(const LmiProblem& prob, const LmiSettings& settings, const Vector* x_start) {
    prob.validate();
    const int p = prob.p;
    LmiSolution sol;
    sol.x = x_start ? *x_start : Vector::Zero(p);
    if (sol.x.size() != p) throw std::invalid_argument("starting point has wrong length");

    const Vector c = prob.sense == Sense::Maximize ? Vector(-prob.objective) : prob.objective;
    const double M = settings.box * (1.0 + sol.x.lpNorm<Eigen::Infinity>());

    std::vector<LmiBlock> blocks = prob.blocks;
    add_box(blocks, p, p, M);

    Vector x = sol.x;
    double ld = 0.0;
    if (!Barrier(blocks, c).logdet(x, ld, nullptr)) {
        // Phase 1: minimize s subject to block + s I >= 0, bounded box on (x, s).
        const double s0 = std::max(0.0, -min_eig_all(prob.blocks, x, nullptr));
        const double scale = 1.0 + s0;
        std::vector<LmiBlock> ph1;
        for (const auto& b : prob.blocks) {
            LmiBlock nb(b.dim, p + 1);
            nb.A0 = b.A0;
            for (int i = 0; i < p; ++i) nb.A[i] = b.A[i];
            for (int r = 0; r < b.dim; ++r) nb.A[p].add(r, r, 1.0);
            ph1.push_back(std::move(nb));
        }
        add_box(ph1, p + 1, p, M);
        // s <= 2 s_start keeps the slack from drifting to infinity at small barrier weight.
        const double s_start = s0 + 0.1 * scale;
        LmiBlock upper(1, p + 1);
        upper.A0(0, 0) = 2.0 * s_start + scale;
        upper.A[p].add(0, 0, -1.0);
        ph1.push_back(std::move(upper));

        Vector c1 = Vector::Zero(p + 1);
        c1[p] = 1.0;
        Vector y(p + 1);
        y << x, s_start;
        Barrier b1(ph1, c1);
        LmiSettings st1 = settings;
        const auto r1 = follow_path(b1, y, st1, [&](const Vector& v) {
            if (v[p] >= 0.0) return false;
            double tmp = 0.0;
            return Barrier(blocks, c).logdet(v.head(p), tmp, nullptr);
        });
        sol.iterations += r1.newton_steps;
        if (r1.end != PhaseEnd::EarlyStop) {
            sol.x = r1.x.head(p);
            sol.objective_value = prob.objective.dot(sol.x);
            min_eig_all(prob.blocks, sol.x, &sol.min_block_eigs);
            sol.status = r1.end == PhaseEnd::Converged ? LmiStatus::Infeasible
                       : r1.end == PhaseEnd::IterationLimit ? LmiStatus::IterationLimit
                                                            : LmiStatus::NumericalFailure;
            return sol;
        }
        x = r1.x.head(p);
    }

    Barrier b2(blocks, c);
    const auto r2 = follow_path(b2, x, settings, [](const Vector&) { return false; });
    sol.iterations += r2.newton_steps;
    sol.x = r2.x;
    sol.objective_value = prob.objective.dot(sol.x);
    min_eig_all(prob.blocks, sol.x, &sol.min_block_eigs);
    switch (r2.end) {
        case PhaseEnd::Converged: sol.status = LmiStatus::Optimal; break;
        case PhaseEnd::IterationLimit: sol.status = LmiStatus::IterationLimit; break;
        default: sol.status = LmiStatus::NumericalFailure; break;
    }
    return sol;
}

void write_sdpa(const LmiProblem& prob, std::ostream& out) {
    prob.validate();
    out.precision(17);
    out << "* cdbeam LMI dump: minimize c^T x s.t. sum x_i F_i - F_0 >= 0\n";
    out << prob.p << "\n" << prob.blocks.size() << "\n";
    for (const auto& b : prob.blocks) out << b.dim << " ";
    out << "\n";
    const double sign = prob.sense == Sense::Maximize ? -1.0 : 1.0;
    for (int i = 0; i < prob.p; ++i) out << sign * prob.objective[i] << (i + 1 < prob.p ? " " : "\n");
    for (std::size_t j = 0; j < prob.blocks.size(); ++j) {
        const auto& b = prob.blocks[j];
        for (int c = 0; c < b.dim; ++c) {
            for (int r = 0; r <= c; ++r) {
                if (b.A0(r, c) != 0.0) out << 0 << " " << j + 1 << " " << r + 1 << " " << c + 1 << " " << -b.A0(r, c) << "\n";
            }
        }
        for (int i = 0; i < prob.p; ++i) {
            std::map<std::pair<int, int>, double> merged;
            for (const auto& e : b.A[i].entries()) {
                if (e.row <= e.col) merged[{e.row, e.col}] += e.value;
            }
            for (const auto& [rc, v] : merged) {
                if (v != 0.0) out << i + 1 << " " << j + 1 << " " << rc.first + 1 << " " << rc.second + 1 << " " << v << "\n";
            }
        }
    }
}

}  // namespace cdbeam
