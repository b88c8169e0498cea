#include "cdbeam/output.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cdbeam {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const BranchKind kKinds[] = {BranchKind::GlobalMin, BranchKind::LocalMax, BranchKind::LocalMin};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(17);
    return out;
}

json inertia_json(const Inertia& in) {
    return {{"positive", in.positive}, {"negative", in.negative}, {"zero", in.zero}};
}

json branch_json(const BranchSolution& s, const AssembledSystem& sys) {
    const Vector wf = full_deflection(s.w, sys);
    double max_abs_w = 0.0;
    for (int k = 0; k <= sys.mesh.m; ++k) max_abs_w = std::max(max_abs_w, std::abs(wf[2 * k]));
    json e = {{"Pi_p", s.energy.Pi_p},
              {"Xi", s.energy.Xi},
              {"Pi_d", s.energy.Pi_d_defined ? json(s.energy.Pi_d) : json(nullptr)},
              {"gap_quadratic", s.energy.gap_quadratic},
              {"duality_gap", s.energy.Pi_d_defined ? json(s.energy.duality_gap) : json(nullptr)},
              {"res_equilibrium", s.energy.res_equilibrium},
              {"res_constitutive", s.energy.res_constitutive}};
    return {{"kind", to_string(s.kind)},
            {"converged", s.converged},
            {"outer_converged", s.outer_converged},
            {"classification", to_string(s.classification)},
            {"iterations", s.iterations},
            {"message", s.message},
            {"energy", e},
            {"inertia_G", inertia_json(s.inertia_G)},
            {"inertia_G_full", inertia_json(s.inertia_G_full)},
            {"min_eig_hessian", s.min_eig_hess},
            {"max_eig_hessian", s.max_eig_hess},
            {"min_eig_hessian_full", s.min_eig_hess_full},
            {"midspan_w", wf[2 * (sys.mesh.m / 2)]},
            {"max_abs_w", max_abs_w}};
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string point_dir_name(int m, double lambda) {
    std::ostringstream os;
    os << "m" << m << "_lambda" << std::setprecision(10) << lambda;
    return os.str();
}

}  // namespace

std::string branch_file_name(BranchKind kind) {
    return "branch_" + to_string(kind) + ".csv";
}

void write_branch_csv(const std::string& path, const BranchSolution& sol, const AssembledSystem& sys) {
    const Vector wf = full_deflection(sol.w, sys);
    const Vector u = recover_axial(wf, sys.props, sys.load.axial_lambda, sys.mesh);
    auto out = open_out(path);
    out << "x,w,theta,sigma,u\n";
    for (int k = 0; k <= sys.mesh.m; ++k) {
        out << sys.mesh.node_x[k] << "," << wf[2 * k] << "," << wf[2 * k + 1] << "," << sol.sigma[k] << "," << u[k]
            << "\n";
    }
}

std::vector<CsvNode> read_branch_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::getline(in, line);
    if (line != "x,w,theta,sigma,u") throw std::runtime_error(path + ": unexpected CSV header");
    std::vector<CsvNode> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CsvNode r;
        char c1, c2, c3, c4;
        std::istringstream ls(line);
        if (!(ls >> r.x >> c1 >> r.w >> c2 >> r.theta >> c3 >> r.sigma >> c4 >> r.u))
            throw std::runtime_error(path + ": malformed row `" + line + "`");
        rows.push_back(r);
    }
    return rows;
}

Vector deflection_from_csv(const std::vector<CsvNode>& rows) {
    Vector w(2 * rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        w[2 * k] = rows[k].w;
        w[2 * k + 1] = rows[k].theta;
    }
    return w;
}

std::string summary_json(const PointResult& point) {
    const auto& r = point.report;
    const auto& q = r.request;
    const AssembledSystem sys = assemble_for(q);
    json j;
    j["config"] = {{"E", q.props.E},
                   {"mu", q.props.mu},
                   {"L", q.props.L},
                   {"h", q.props.h},
                   {"I", q.props.I},
                   {"alpha", q.props.alpha},
                   {"load_type", q.load.is_point_load() ? "point" : "uniform"},
                   {"load_magnitude", q.load.magnitude()},
                   {"lambda", q.load.axial_lambda},
                   {"support", to_string(q.support.kind)},
                   {"elements", q.mesh.m},
                   {"symmetry", to_string(q.symmetry)},
                   {"mirror_reduced", r.mirror_reduced}};
    const auto& s = r.resolved_settings;
    j["settings"] = {{"outer_tol", s.outer_tol},           {"outer_max_iter", s.outer_max_iter},
                     {"sdp_tol", s.sdp_tol},               {"sdp_max_iter", s.sdp_max_iter},
                     {"strictness_eps", s.strictness_eps}, {"classify_tol", s.classify_tol},
                     {"global_sdp", s.global_form == GlobalSdpForm::ExactDual ? "exact_dual" : "frozen"}};
    j["lambda_cr"] = {{"rayleigh", r.lambda_cr.rayleigh}, {"scaled", r.lambda_cr.scaled}};
    j["branches"] = json::object();
    for (BranchKind k : kKinds) {
        if (!q.branches.count(k)) continue;
        const auto& b = r.branch(k);
        j["branches"][to_string(k)] = b ? branch_json(*b, sys) : json{{"kind", to_string(k)}, {"present", false}};
        if (b) j["branches"][to_string(k)]["present"] = true;
    }
    j["errors"] = r.errors;
    if (point.oracle) {
        json cps = json::array();
        const AssembledSystem full = assemble(q.props, q.load, q.support, q.mesh);
        for (const auto& cp : *point.oracle) {
            cps.push_back({{"Pi_p", cp.Pi_p},
                           {"kind", to_string(cp.kind)},
                           {"grad_norm", cp.grad_norm},
                           {"hessian_inertia", inertia_json(cp.hess_inertia)},
                           {"midspan_w", full_deflection(cp.w, full)[2 * (q.mesh.m / 2)]}});
        }
        j["oracle"] = {{"critical_points", cps}, {"count", point.oracle->size()}};
    }
    return j.dump(2);
}

void write_convergence_log(const std::string& path, const TrialityReport& report) {
    auto out = open_out(path);
    out << std::setprecision(6);
    for (BranchKind k : kKinds) {
        const auto& b = report.branch(k);
        if (!report.request.branches.count(k)) continue;
        out << "# " << to_string(k) << (b ? "" : " (absent)") << "\n";
        if (!b) continue;
        out << "k sdp_status newton sdp_objective rel_change w_norm res_equilibrium res_constitutive\n";
        for (const auto& h : b->history) {
            out << h.k << " " << to_string(h.sdp_status) << " " << h.sdp_newton << " " << h.sdp_objective << " "
                << h.rel_change << " " << h.w_norm << " " << h.res_equilibrium << " " << h.res_constitutive << "\n";
        }
        out << "converged " << (b->converged ? "yes" : "no") << ", classification " << to_string(b->classification);
        if (!b->message.empty()) out << ", " << b->message;
        out << "\n";
    }
    for (const auto& e : report.errors) out << "error: " << e << "\n";
}

void write_plot_script(const std::string& path, const TrialityReport& report) {
    auto out = open_out(path);
    out << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 'x (m)'\n"
        << "set ylabel 'w (m)'\n"
        << "set grid\n";
    struct Style {
        BranchKind kind;
        const char* color;
        const char* title;
    };
    const Style styles[] = {{BranchKind::GlobalMin, "red", "global minimum"},
                            {BranchKind::LocalMax, "green", "local maximum"},
                            {BranchKind::LocalMin, "blue", "local minimum"}};
    std::string plot;
    for (const auto& s : styles) {
        if (!report.branch(s.kind)) continue;
        plot += std::string(plot.empty() ? "plot " : ", \\\n     ") + "'" + branch_file_name(s.kind) +
                "' using 1:2 with linespoints lc rgb '" + s.color + "' title '" + s.title + "'";
    }
    if (plot.empty()) plot = "print 'no branch data'";
    out << plot << "\n";
}

void write_sweep_table(const std::string& path, const std::vector<PointResult>& points) {
    auto out = open_out(path);
    out << "dir,m,lambda";
    for (BranchKind k : kKinds) {
        const auto n = to_string(k);
        out << "," << n << "_classification," << n << "_converged," << n << "_gap_quadratic," << n << "_duality_gap";
    }
    out << "\n";
    for (const auto& p : points) {
        out << fs::path(p.dir).filename().string() << "," << p.report.request.mesh.m << ","
            << p.report.request.load.axial_lambda;
        for (BranchKind k : kKinds) {
            const auto& b = p.report.branch(k);
            if (b) {
                out << "," << to_string(b->classification) << "," << (b->converged ? 1 : 0) << ","
                    << b->energy.gap_quadratic << ","
                    << (b->energy.Pi_d_defined ? fmt(b->energy.duality_gap) : std::string("nan"));
            } else {
                out << ",absent,0,nan,nan";
            }
        }
        out << "\n";
    }
}

void emit_point(const PointResult& point, bool dump_sdp) {
    fs::create_directories(point.dir);
    const auto& r = point.report;
    const AssembledSystem sys = assemble_for(r.request);
    for (BranchKind k : kKinds) {
        if (const auto& b = r.branch(k)) write_branch_csv((fs::path(point.dir) / branch_file_name(k)).string(), *b, sys);
    }
    {
        auto out = open_out((fs::path(point.dir) / "summary.json").string());
        out << summary_json(point) << "\n";
    }
    write_convergence_log((fs::path(point.dir) / "convergence.log").string(), r);
    write_plot_script((fs::path(point.dir) / "plot.gp").string(), r);
    if (dump_sdp) {
        const Vector w0 = solve_sym(sys.G0, sys.f_vec);
        for (BranchKind k : kKinds) {
            if (!r.request.branches.count(k)) continue;
            auto out = open_out((fs::path(point.dir) / ("sdp_" + to_string(k) + "_step1.dat-s")).string());
            const Vector start = k == BranchKind::LocalMin && r.global_min ? Vector(-r.global_min->w) : w0;
            write_sdpa(build_branch_sdp(k, start, sys, r.resolved_settings), out);
        }
        auto out = open_out((fs::path(point.dir) / "sdp_dual.dat-s").string());
        write_sdpa(build_dual_sdp(sys), out);
    }
}

int run_and_emit(const RunConfig& cfg_in, const RunOptions& opt, std::ostream& log) {
    RunConfig cfg = cfg_in;
    if (opt.elements) cfg.elements = {*opt.elements};
    if (opt.sweep) cfg.lambda_sweep = *opt.sweep;
    if (opt.branches) cfg.branches = *opt.branches;
    validate_config(cfg);
    const std::string out_dir = opt.out_dir.empty() ? cfg.output_dir : opt.out_dir;
    if (out_dir.empty()) throw DomainError("no output directory (use --out or `output:` in the config)");

    const std::vector<double> lambdas =
        cfg.lambda_sweep ? cfg.lambda_sweep->values() : std::vector<double>{cfg.load.axial_lambda};
    struct Job {
        int m;
        double lambda;
    };
    std::vector<Job> jobs;
    for (int m : cfg.elements)
        for (double l : lambdas) jobs.push_back({m, l});
    const bool single = jobs.size() == 1;

    std::vector<PointResult> points(jobs.size());
    auto solve_point = [&](std::size_t i) {
        PointResult p;
        const TrialityRequest req = cfg.request(jobs[i].m, jobs[i].lambda);
        p.report = run_triality(req);
        if (opt.oracle) {
            const AssembledSystem full = assemble(req.props, req.load, req.support, req.mesh);
            OracleSettings os = cfg.oracle;
            os.jobs = single ? std::max(1, opt.jobs) : 1;
            p.oracle = multistart_newton(full, p.report.resolved_settings, os);
        }
        p.dir = single ? out_dir : (fs::path(out_dir) / point_dir_name(jobs[i].m, jobs[i].lambda)).string();
        emit_point(p, opt.dump_sdp);
        points[i] = std::move(p);
    };

    const std::size_t width = static_cast<std::size_t>(std::max(1, opt.jobs));
    for (std::size_t start = 0; start < jobs.size(); start += width) {
        std::vector<std::future<void>> running;
        for (std::size_t i = start; i < std::min(jobs.size(), start + width); ++i)
            running.push_back(std::async(std::launch::async, solve_point, i));
        for (auto& f : running) f.get();
    }

    fs::create_directories(out_dir);
    if (!single) write_sweep_table((fs::path(out_dir) / "sweep_summary.csv").string(), points);

    bool all_ok = true;
    for (const auto& p : points) {
        const auto& r = p.report;
        log << "m=" << r.request.mesh.m << " lambda=" << r.request.load.axial_lambda
            << " lambda_cr=" << r.lambda_cr.scaled << "\n";
        for (BranchKind k : kKinds) {
            if (!r.request.branches.count(k)) continue;
            const auto& b = r.branch(k);
            log << "  " << to_string(k) << ": ";
            if (!b) {
                log << "absent\n";
                all_ok = false;
                continue;
            }
            log << to_string(b->classification) << (b->converged ? "" : " (not converged)")
                << " Pi_p=" << b->energy.Pi_p << " gap_quadratic=" << b->energy.gap_quadratic << "\n";
            if (!b->converged) all_ok = false;
        }
        for (const auto& e : r.errors) log << "  error: " << e << "\n";
        if (p.oracle) log << "  oracle: " << p.oracle->size() << " critical points\n";
    }
    log << "output written to " << out_dir << "\n";
    return all_ok || opt.allow_partial ? 0 : 1;
}

}  // namespace cdbeam
