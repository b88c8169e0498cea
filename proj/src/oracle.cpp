#include "cdbeam/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <random>

namespace cdbeam {

std::string to_string(CriticalKind k) {
    switch (k) {
        case CriticalKind::Min: return "min";
        case CriticalKind::Max: return "max";
        case CriticalKind::Saddle: return "saddle";
    }
    return "unknown";
}

PrimalDerivatives primal_derivatives(const Vector& w, const AssembledSystem& sys) {
    return {primal_gradient(w, sys), primal_hessian(w, sys)};
}

bool newton_critical_point(const AssembledSystem& sys, Vector w, int max_iter, double grad_tol, CriticalPoint& out,
                           double classify_tol) {
    const double target = grad_tol * (1.0 + sys.f_vec.norm());
    Vector g = primal_gradient(w, sys);
    for (int it = 0; it < max_iter && g.norm() > 1e-3 * target; ++it) {
        const SymMatrix H = primal_hessian(w, sys);
        Vector d;
        // Levenberg shift only when the Hessian is numerically singular.
        double shift = 0.0;
        const double hscale = std::max(max_abs(H), 1e-300);
        for (int tries = 0; tries < 12; ++tries) {
            LdltFactorization fac(H + shift * Matrix::Identity(H.rows(), H.cols()));
            if (!fac.singular()) {
                d = fac.solve(-g);
                break;
            }
            shift = shift == 0.0 ? 1e-10 * hscale : 10.0 * shift;
        }
        if (d.size() == 0 || !d.allFinite()) return false;

        const double merit = 0.5 * g.squaredNorm();
        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-10; alpha *= 0.5) {
            const Vector wn = w + alpha * d;
            const Vector gn = primal_gradient(wn, sys);
            if (gn.allFinite() && 0.5 * gn.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit) {
                w = wn;
                g = gn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    const double gn = g.norm();
    if (!(gn <= target)) return false;

    out.w = w;
    out.grad_norm = gn;
    out.Pi_p = total_potential(w, sys);
    out.hess_inertia = inertia(primal_hessian(w, sys), classify_tol);
    if (out.hess_inertia.negative == 0 && out.hess_inertia.zero == 0) out.kind = CriticalKind::Min;
    else if (out.hess_inertia.positive == 0 && out.hess_inertia.zero == 0) out.kind = CriticalKind::Max;
    else out.kind = CriticalKind::Saddle;
    return true;
}

namespace {

// Generalized eigenvectors of (G0, sum_i H_i), ascending.
Matrix buckling_modes(const AssembledSystem& sys) {
    SymMatrix geo = SymMatrix::Zero(sys.n_red, sys.n_red);
    for (const auto& H : sys.Hsens) geo += H;
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(symmetrized(sys.G0), symmetrized(geo));
    if (ges.info() != Eigen::Success) return Matrix(sys.n_red, 0);
    Matrix v = ges.eigenvectors();
    for (int j = 0; j < v.cols(); ++j) v.col(j).normalize();
    return v;
}

// Amplitude minimizing Pi_p along direction v (coarse scan over a wide range).
double best_amplitude(const AssembledSystem& sys, const Vector& v, double reach) {
    double best_s = reach, best = total_potential(reach * v, sys);
    for (int k = 1; k <= 200; ++k) {
        const double s = reach * k / 100.0;
        const double val = total_potential(s * v, sys);
        if (val < best) {
            best = val;
            best_s = s;
        }
    }
    return best_s;
}

}  // namespace

std::vector<CriticalPoint> multistart_newton(const AssembledSystem& sys, const SolverSettings& settings,
                                             const OracleSettings& oracle) {
    if (oracle.n_starts < 1) throw DomainError("multistart_newton needs at least one start");
    const Vector w_bend = solve_sym(sys.G0, sys.f_vec);
    // Buckled amplitudes scale with sqrt(lambda / alpha); the reach covers a generous multiple.
    const double reach = 4.0 * std::sqrt(std::max(sys.load.axial_lambda, 1e-6) / sys.props.alpha) *
                             sys.props.L + w_bend.lpNorm<Eigen::Infinity>();

    std::vector<Vector> starts = {w_bend, -w_bend, Vector::Zero(sys.n_red)};
    const Matrix modes = buckling_modes(sys);
    for (int j = 0; j < std::min<int>(3, static_cast<int>(modes.cols())); ++j) {
        const Vector v = modes.col(j);
        const double s = best_amplitude(sys, v, reach);
        starts.push_back(s * v);
        starts.push_back(-s * v);
    }
    std::mt19937_64 rng(oracle.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.05, 1.5);
    while (static_cast<int>(starts.size()) < oracle.n_starts) {
        Vector v(sys.n_red);
        for (int i = 0; i < sys.n_red; ++i) v[i] = normal(rng);
        v.normalize();
        starts.push_back(unit(rng) * reach * v);
    }
    starts.resize(oracle.n_starts);

    const int n = static_cast<int>(starts.size());
    std::vector<CriticalPoint> found(n);
    std::vector<char> ok(n, 0);
    auto work = [&](int begin, int step) {
        for (int i = begin; i < n; i += step) {
            ok[i] = newton_critical_point(sys, starts[i], oracle.max_newton, oracle.grad_tol, found[i],
                                          settings.classify_tol);
        }
    };
    const int jobs = std::max(1, oracle.jobs);
    std::vector<std::future<void>> pool;
    for (int j = 1; j < jobs; ++j) pool.push_back(std::async(std::launch::async, work, j, jobs));
    work(0, jobs);
    for (auto& f : pool) f.get();

    std::vector<CriticalPoint> distinct;
    for (int i = 0; i < n; ++i) {
        if (!ok[i]) continue;
        const auto& cp = found[i];
        const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const CriticalPoint& d) {
            return (d.w - cp.w).lpNorm<Eigen::Infinity>() <= 1e-6 * (1.0 + cp.w.lpNorm<Eigen::Infinity>());
        });
        if (!seen) distinct.push_back(cp);
    }
    std::sort(distinct.begin(), distinct.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.Pi_p < b.Pi_p; });
    return distinct;
}

double quartic_potential(const Vector& w_full, const BeamProperties& props, const LoadCase& load, const Mesh& mesh) {
    if (w_full.size() != mesh.full_dofs()) throw DomainError("quartic_potential needs a full-length deflection vector");
    const std::array<double, 5> xg = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                      0.9061798459386640};
    const std::array<double, 5> wg = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                      0.4786286704993665, 0.2369268850561891};
    const double E = props.E, lam = load.axial_lambda;
    const auto* uniform = std::get_if<UniformLoad>(&load.lateral);
    double total = 0.0;
    for (int e = 0; e < mesh.m; ++e) {
        const double Le = mesh.node_x[e + 1] - mesh.node_x[e];
        const Eigen::Vector4d we = w_full.segment<4>(2 * e);
        double integral = 0.0;
        for (int g = 0; g < 5; ++g) {
            const ShapeValues s = shape_functions(xg[g], Le);
            const double w = s.Nw.dot(we), w1 = s.dNw.dot(we), w2 = s.d2Nw.dot(we);
            const double f = uniform ? uniform->f : 0.0;
            integral += wg[g] * (0.5 * props.EI() * w2 * w2 + E * props.alpha / 12.0 * std::pow(w1, 4) -
                                 0.5 * E * lam * w1 * w1 - f * w);
        }
        total += 0.5 * Le * integral;
    }
    if (const auto* point = std::get_if<CenterPointLoad>(&load.lateral)) total -= point->f * w_full[2 * (mesh.m / 2)];
    return total;
}

}  // namespace cdbeam
