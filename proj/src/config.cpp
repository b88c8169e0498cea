#include "cdbeam/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cdbeam {

namespace {

std::string format_error(const std::string& source, int line, const std::string& key, const std::string& what) {
    std::ostringstream os;
    os << source;
    if (line > 0) os << ":" << line;
    os << ": ";
    if (!key.empty()) os << "`" << key << "`: ";
    os << what;
    return os.str();
}

int line_of(const YAML::Node& n) {
    return n.Mark().line >= 0 ? n.Mark().line + 1 : 0;
}

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& n, const std::string& key, const std::string& what) const {
        throw ConfigError(source_, n ? line_of(n) : 0, key, what);
    }

    void require_map(const YAML::Node& n, const std::string& key) const {
        if (!n.IsMap()) fail(n, key, "expected a mapping");
    }

    void reject_unknown(const YAML::Node& n, const std::string& prefix, const std::set<std::string>& allowed) const {
        for (const auto& kv : n) {
            const auto name = kv.first.as<std::string>();
            if (!allowed.count(name)) fail(kv.first, prefix + name, "unknown key");
        }
    }

    double number(const YAML::Node& parent, const std::string& name, const std::string& key) const {
        const YAML::Node n = parent[name];
        if (!n) fail(parent, key, "missing required key");
        try {
            return n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, key, "expected a number");
        }
    }

    int integer(const YAML::Node& n, const std::string& key) const {
        try {
            return n.as<int>();
        } catch (const YAML::Exception&) {
            fail(n, key, "expected an integer");
        }
    }

    std::string text(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) fail(n, key, "expected a string");
        return n.as<std::string>();
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

void parse_solver(const Reader& rd, const YAML::Node& n, SolverSettings& s) {
    rd.require_map(n, "solver");
    rd.reject_unknown(n, "solver.", {"outer_tol", "outer_max_iter", "sdp_tol", "sdp_max_iter", "strictness_eps",
                                     "classify_tol", "global_sdp"});
    if (n["outer_tol"]) s.outer_tol = rd.number(n, "outer_tol", "solver.outer_tol");
    if (n["outer_max_iter"]) s.outer_max_iter = rd.integer(n["outer_max_iter"], "solver.outer_max_iter");
    if (n["sdp_tol"]) s.sdp_tol = rd.number(n, "sdp_tol", "solver.sdp_tol");
    if (n["sdp_max_iter"]) s.sdp_max_iter = rd.integer(n["sdp_max_iter"], "solver.sdp_max_iter");
    if (n["strictness_eps"]) s.strictness_eps = rd.number(n, "strictness_eps", "solver.strictness_eps");
    if (n["classify_tol"]) s.classify_tol = rd.number(n, "classify_tol", "solver.classify_tol");
    if (n["global_sdp"]) {
        const auto v = rd.text(n["global_sdp"], "solver.global_sdp");
        if (v == "exact_dual") s.global_form = GlobalSdpForm::ExactDual;
        else if (v == "frozen") s.global_form = GlobalSdpForm::Frozen;
        else rd.fail(n["global_sdp"], "solver.global_sdp", "expected exact_dual or frozen");
    }
    try {
        s.validate();
    } catch (const DomainError& e) {
        rd.fail(n, "solver", e.what());
    }
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& key, const std::string& what)
    : std::runtime_error(format_error(source, line, key, what)), line_(line), key_(key) {}

std::vector<double> LambdaSweep::values() const {
    std::vector<double> v;
    if (steps == 1) return {from};
    for (int i = 0; i < steps; ++i) v.push_back(from + (to - from) * i / (steps - 1));
    return v;
}

BeamProperties RunConfig::props() const {
    return derive_constants(E, mu, L, 0.5 * height);
}

TrialityRequest RunConfig::request(int m, double lambda) const {
    TrialityRequest req;
    req.props = props();
    req.load = load;
    req.load.axial_lambda = lambda;
    req.support = support;
    req.mesh = Mesh::uniform(L, m);
    req.settings = settings;
    req.branches = branches;
    req.symmetry = symmetry;
    return req;
}

std::set<BranchKind> parse_branches(const std::string& text) {
    if (text == "all") return {BranchKind::GlobalMin, BranchKind::LocalMax, BranchKind::LocalMin};
    std::set<BranchKind> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "global") out.insert(BranchKind::GlobalMin);
        else if (item == "localmax") out.insert(BranchKind::LocalMax);
        else if (item == "localmin") out.insert(BranchKind::LocalMin);
        else throw DomainError("unknown branch `" + item + "` (expected global, localmax, localmin or all)");
    }
    if (out.empty()) throw DomainError("no branches requested");
    return out;
}

LambdaSweep parse_lambda_sweep(const std::string& text) {
    const std::string prefix = "lambda=";
    if (text.rfind(prefix, 0) != 0) throw DomainError("sweep must look like lambda=a:b:n");
    std::stringstream ss(text.substr(prefix.size()));
    std::string a, b, n;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n)) {
        throw DomainError("sweep must look like lambda=a:b:n");
    }
    LambdaSweep sw;
    try {
        std::size_t pa = 0, pb = 0, pn = 0;
        sw.from = std::stod(a, &pa);
        sw.to = std::stod(b, &pb);
        sw.steps = std::stoi(n, &pn);
        if (pa != a.size() || pb != b.size() || pn != n.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw DomainError("sweep must look like lambda=a:b:n");
    }
    if (sw.steps < 1) throw DomainError("sweep needs at least one step");
    if (sw.from < 0.0 || sw.to < 0.0) throw DomainError("sweep lambda values must be non-negative");
    return sw;
}

void validate_config(const RunConfig& cfg) {
    const BeamProperties props = cfg.props();
    if (cfg.elements.empty()) throw DomainError("no element count given");
    for (int m : cfg.elements) validate_load(cfg.load, Mesh::uniform(props.L, m));
    for (int m : cfg.elements) cfg.support.fixed_dofs(m);
    cfg.settings.validate();
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
    Reader rd(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source, e.mark.line + 1, "", e.msg);
    }
    if (!root || !root.IsMap()) throw ConfigError(source, 1, "", "config must be a mapping");
    rd.reject_unknown(root, "", {"beam", "load", "support", "support_dofs", "elements", "branches", "symmetry", "sweep",
                                 "solver", "oracle", "output"});

    RunConfig cfg;
    cfg.source = source;

    const YAML::Node beam = root["beam"];
    if (!beam) rd.fail(root, "beam", "missing required key");
    rd.require_map(beam, "beam");
    rd.reject_unknown(beam, "beam.", {"E", "mu", "L", "height"});
    cfg.E = rd.number(beam, "E", "beam.E");
    cfg.mu = rd.number(beam, "mu", "beam.mu");
    cfg.L = rd.number(beam, "L", "beam.L");
    cfg.height = rd.number(beam, "height", "beam.height");
    try {
        cfg.props();
    } catch (const DomainError& e) {
        rd.fail(beam, "beam", e.what());
    }

    const YAML::Node load = root["load"];
    if (!load) rd.fail(root, "load", "missing required key");
    rd.require_map(load, "load");
    rd.reject_unknown(load, "load.", {"type", "magnitude", "lambda"});
    if (!load["type"]) rd.fail(load, "load.type", "missing required key");
    const std::string type = rd.text(load["type"], "load.type");
    const double magnitude = rd.number(load, "magnitude", "load.magnitude");
    if (type == "uniform") cfg.load.lateral = UniformLoad{magnitude};
    else if (type == "point") cfg.load.lateral = CenterPointLoad{magnitude};
    else rd.fail(load["type"], "load.type", "expected uniform or point");
    cfg.load.axial_lambda = rd.number(load, "lambda", "load.lambda");
    if (!(cfg.load.axial_lambda >= 0.0)) rd.fail(load["lambda"], "load.lambda", "must be non-negative");

    if (!root["support"]) rd.fail(root, "support", "missing required key");
    const std::string support = rd.text(root["support"], "support");
    if (support == "simply_supported") cfg.support = SupportSpec::simply_supported();
    else if (support == "clamped") cfg.support = SupportSpec::clamped();
    else if (support == "custom") {
        const YAML::Node dofs = root["support_dofs"];
        if (!dofs || !dofs.IsSequence()) rd.fail(root, "support_dofs", "custom support needs a DOF list");
        std::vector<int> fixed;
        for (const auto& d : dofs) fixed.push_back(rd.integer(d, "support_dofs"));
        cfg.support = SupportSpec::custom(fixed);
    } else {
        rd.fail(root["support"], "support", "expected simply_supported, clamped or custom");
    }
    if (root["support_dofs"] && support != "custom") rd.fail(root["support_dofs"], "support_dofs", "only valid with custom support");

    const YAML::Node elements = root["elements"];
    if (!elements) rd.fail(root, "elements", "missing required key");
    if (elements.IsSequence()) {
        for (const auto& e : elements) cfg.elements.push_back(rd.integer(e, "elements"));
    } else {
        cfg.elements.push_back(rd.integer(elements, "elements"));
    }
    for (std::size_t i = 0; i < cfg.elements.size(); ++i) {
        const YAML::Node at = elements.IsSequence() ? elements[i] : elements;
        try {
            validate_load(cfg.load, Mesh::uniform(cfg.L, cfg.elements[i]));
            cfg.support.fixed_dofs(cfg.elements[i]);
        } catch (const DomainError& e) {
            rd.fail(at, "elements", e.what());
        }
    }

    if (root["branches"]) {
        const YAML::Node b = root["branches"];
        std::string list;
        if (b.IsSequence()) {
            for (const auto& item : b) list += (list.empty() ? "" : ",") + rd.text(item, "branches");
        } else {
            list = rd.text(b, "branches");
        }
        try {
            cfg.branches = parse_branches(list);
        } catch (const DomainError& e) {
            rd.fail(b, "branches", e.what());
        }
    }

    if (root["symmetry"]) {
        const auto v = rd.text(root["symmetry"], "symmetry");
        if (v == "auto") cfg.symmetry = SymmetryPolicy::Auto;
        else if (v == "none") cfg.symmetry = SymmetryPolicy::None;
        else rd.fail(root["symmetry"], "symmetry", "expected auto or none");
    }

    if (root["sweep"]) {
        const YAML::Node sw = root["sweep"];
        rd.require_map(sw, "sweep");
        rd.reject_unknown(sw, "sweep.", {"lambda"});
        const YAML::Node l = sw["lambda"];
        if (l) {
            rd.require_map(l, "sweep.lambda");
            rd.reject_unknown(l, "sweep.lambda.", {"from", "to", "steps"});
            LambdaSweep s;
            s.from = rd.number(l, "from", "sweep.lambda.from");
            s.to = rd.number(l, "to", "sweep.lambda.to");
            if (!l["steps"]) rd.fail(l, "sweep.lambda.steps", "missing required key");
            s.steps = rd.integer(l["steps"], "sweep.lambda.steps");
            if (s.steps < 1) rd.fail(l["steps"], "sweep.lambda.steps", "must be at least 1");
            if (s.from < 0.0 || s.to < 0.0) rd.fail(l, "sweep.lambda", "lambda values must be non-negative");
            cfg.lambda_sweep = s;
        }
    }

    if (root["solver"]) parse_solver(rd, root["solver"], cfg.settings);

    if (root["oracle"]) {
        const YAML::Node o = root["oracle"];
        rd.require_map(o, "oracle");
        rd.reject_unknown(o, "oracle.", {"starts", "seed", "max_newton"});
        if (o["starts"]) cfg.oracle.n_starts = rd.integer(o["starts"], "oracle.starts");
        if (o["seed"]) cfg.oracle.seed = static_cast<std::uint64_t>(rd.integer(o["seed"], "oracle.seed"));
        if (o["max_newton"]) cfg.oracle.max_newton = rd.integer(o["max_newton"], "oracle.max_newton");
        if (cfg.oracle.n_starts < 1) rd.fail(o["starts"], "oracle.starts", "must be at least 1");
    }

    if (root["output"]) cfg.output_dir = rd.text(root["output"], "output");
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "", "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace cdbeam
