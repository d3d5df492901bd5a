#include "ndlab/config.hpp"

#include "ndlab/harness.hpp"
#include "ndlab/io.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

namespace ndlab {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> words(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double to_number(const std::string& field, const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || std::isnan(v))
        throw ConfigError(field, fmt::format("'{}' is not a number", text));
    return v;
}

long to_integer(const std::string& field, const std::string& text)
{
    const double v = to_number(field, text);
    if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError(field, fmt::format("'{}' is not an integer", text));
    return static_cast<long>(v);
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

/// Reads a section and rejects keys outside `allowed`.
class Section {
public:
    Section(const pt::ptree& root, std::string name, std::set<std::string> allowed)
        : name_(std::move(name))
    {
        if (const auto child = root.get_child_optional(name_)) {
            node_ = &*child;
            for (const auto& [key, value] : *node_)
                if (!allowed.count(key)) throw ConfigError(name_ + "." + key, "unknown key");
        }
    }

    bool has(const std::string& key) const { return node_ && node_->get_child_optional(key); }
    std::string field(const std::string& key) const { return name_ + "." + key; }

    std::string text(const std::string& key, const std::string& fallback) const
    {
        return has(key) ? trim(node_->get<std::string>(key)) : fallback;
    }
    std::string required(const std::string& key) const
    {
        if (!has(key)) throw ConfigError(field(key), "missing required key");
        return trim(node_->get<std::string>(key));
    }
    double number(const std::string& key, double fallback) const
    {
        return has(key) ? to_number(field(key), node_->get<std::string>(key)) : fallback;
    }
    double required_number(const std::string& key) const { return to_number(field(key), required(key)); }

private:
    std::string name_;
    const pt::ptree* node_ = nullptr;
};

std::vector<double> number_list(const std::string& field, const std::string& text)
{
    std::vector<double> out;
    for (const auto& w : words(text)) out.push_back(to_number(field, w));
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

std::string Analysis::to_string() const
{
    switch (kind) {
    case Kind::Thm11: return fmt::format("thm11 {} {}", num(q), num(r));
    case Kind::Thm12: return fmt::format("thm12 {} {}", num(q), num(K));
    case Kind::OdeLimit: return "ode_limit";
    case Kind::FiniteHorizon: return "finite_horizon";
    case Kind::ExpandOnly: return fmt::format("expand_only {}", num(K));
    }
    return "";
}

Analysis Analysis::parse(const std::string& text)
{
    const auto w = words(text);
    const std::string field = "analysis.list";
    if (w.empty()) throw ConfigError(field, "empty analysis entry");
    Analysis a;
    auto expect = [&](std::size_t n) {
        if (w.size() != n)
            throw ConfigError(field, fmt::format("'{}' takes {} argument(s)", w[0], n - 1));
    };
    if (w[0] == "thm11") {
        expect(3);
        a.kind = Kind::Thm11;
        a.q = to_number(field, w[1]);
        a.r = to_number(field, w[2]);
    } else if (w[0] == "thm12") {
        expect(3);
        a.kind = Kind::Thm12;
        a.q = to_number(field, w[1]);
        a.K = to_number(field, w[2]);
    } else if (w[0] == "ode_limit") {
        expect(1);
        a.kind = Kind::OdeLimit;
    } else if (w[0] == "finite_horizon") {
        expect(1);
        a.kind = Kind::FiniteHorizon;
    } else if (w[0] == "expand_only") {
        expect(2);
        a.kind = Kind::ExpandOnly;
        a.K = to_number(field, w[1]);
    } else {
        throw ConfigError(field, fmt::format("unknown analysis '{}'", w[0]));
    }
    return a;
}

std::vector<double> SnapshotPlan::resolve(const ProblemParams& p) const
{
    switch (kind) {
    case Kind::List: return times;
    case Kind::LogTime: return log_spaced(from, to, per_decade);
    case Kind::LogSigma: return sigma_snapshot_times(p, from, to, per_decade);
    }
    return {};
}

void ExperimentConfig::validate() const
{
    if (!(params.m > 0.0) || !std::isfinite(params.m)) throw ConfigError("problem.m", "must be a positive number");
    if (!(params.alpha < 1.0)) throw ConfigError("problem.alpha", "must be < 1");
    if (!std::isfinite(params.alpha)) throw ConfigError("problem.alpha", "must be finite");
    if (!(params.lambda > 0.0) || !std::isfinite(params.lambda))
        throw ConfigError("problem.lambda", "must be a positive number");
    if (params.dim != 1 && params.dim != 2) throw ConfigError("problem.dim", "must be 1 or 2");
    if (!(solver.grid.half_width > 0.0)) throw ConfigError("grid.half_width", "must be positive");
    if (solver.grid.points_per_axis < 2 || solver.grid.points_per_axis % 2 != 0)
        throw ConfigError("grid.points_per_axis", "must be an even integer >= 2");

    if (phi.kind == InitialPerturbation::Kind::Tabulated) {
        if (phi_table_path.empty()) throw ConfigError("phi.table", "tabulated phi needs a table path");
    } else {
        if (!(phi.width > 0.0)) throw ConfigError("phi.width", "width/radius must be positive");
        if (!(phi.amplitude > -params.lambda))
            throw ConfigError("phi.amplitude", "inf(lambda + phi) must be positive (amplitude > -lambda)");
    }

    switch (snapshots.kind) {
    case SnapshotPlan::Kind::List:
        if (snapshots.times.empty()) throw ConfigError("snapshots.times", "must not be empty");
        for (std::size_t k = 0; k < snapshots.times.size(); ++k)
            if (!(snapshots.times[k] > 0.0) || (k > 0 && !(snapshots.times[k] > snapshots.times[k - 1])))
                throw ConfigError("snapshots.times", "must be positive and strictly increasing");
        break;
    default:
        if (!(snapshots.from > 0.0)) throw ConfigError("snapshots.from", "must be positive");
        if (!(snapshots.to > snapshots.from)) throw ConfigError("snapshots.to", "must exceed snapshots.from");
        if (snapshots.per_decade < 1) throw ConfigError("snapshots.per_decade", "must be >= 1");
        if (snapshots.kind == SnapshotPlan::Kind::LogSigma && params.regime() == Regime::FiniteHorizon
            && !(snapshots.to < tau_star(params)))
            throw ConfigError("snapshots.to", "sigma snapshots must stay below tau* when m < alpha");
    }

    if (variable == VariableTag::Rescaled && params.regime() == Regime::FiniteHorizon)
        throw ConfigError("solver.variable", "m < alpha runs integrate in original time only");

    if (!(solver.dt_initial > 0.0)) throw ConfigError("solver.dt_initial", "must be positive");
    if (!(solver.cfl_safety > 0.0 && solver.cfl_safety <= 1.0))
        throw ConfigError("solver.cfl_safety", "must lie in (0, 1]");
    if (!(solver.dt_max > 0.0)) throw ConfigError("solver.dt_max", "must be positive");
    if (!(solver.growth >= 1.0)) throw ConfigError("solver.growth", "must be >= 1");
    if (!(solver.bound_slack >= 0.0)) throw ConfigError("solver.bound_slack", "must be >= 0");

    const bool finite = params.regime() == Regime::FiniteHorizon;
    for (const auto& a : analyses) {
        switch (a.kind) {
        case Analysis::Kind::Thm11:
            if (finite) throw ConfigError("analysis.list", "thm11 requires m >= alpha");
            if (!(a.r > 1.0)) throw ConfigError("analysis.list", "thm11 requires r > 1");
            if (!(a.q >= a.r)) throw ConfigError("analysis.list", "thm11 requires q >= r");
            break;
        case Analysis::Kind::Thm12:
            if (finite) throw ConfigError("analysis.list", "thm12 requires m >= alpha");
            if (!(a.q >= 1.0)) throw ConfigError("analysis.list", "thm12 requires q >= 1");
            if (!(a.K >= 0.0)) throw ConfigError("analysis.list", "thm12 requires K >= 0");
            break;
        case Analysis::Kind::FiniteHorizon:
            if (!finite) throw ConfigError("analysis.list", "finite_horizon requires m < alpha");
            if (variable != VariableTag::Original)
                throw ConfigError("analysis.list", "finite_horizon needs solver.variable = original");
            break;
        case Analysis::Kind::ExpandOnly:
            if (!(a.K >= 0.0)) throw ConfigError("analysis.list", "expand_only requires K >= 0");
            break;
        case Analysis::Kind::OdeLimit: break;
        }
    }
    if (output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

void ExperimentConfig::resolve(const std::string& base_dir)
{
    validate();
    solver.grid.dim = params.dim;
    solver.snapshot_times = snapshots.resolve(params);
    if (phi.kind == InitialPerturbation::Kind::Tabulated) {
        std::filesystem::path path(phi_table_path);
        if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
        GridField table = read_field_csv(path.string());
        const GridSpec& g = solver.grid;
        if (table.spec.dim != g.dim || table.spec.points_per_axis != g.points_per_axis
            || std::abs(table.spec.half_width - g.half_width) > 1e-9 * g.half_width)
            throw ConfigError("phi.table", "table grid does not match the [grid] section");
        table.spec = g;
        phi = InitialPerturbation::tabulated(std::move(table));
    }
}

ExperimentConfig parse_config(const std::string& text)
{
    pt::ptree root;
    std::istringstream in(text);
    try {
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", fmt::format("line {}: {}", e.line(), e.message()));
    }
    const std::set<std::string> sections{"problem", "phi", "grid", "solver", "snapshots", "analysis", "output"};
    for (const auto& [name, node] : root) {
        if (!sections.count(name)) throw ConfigError(name, "unknown section");
        (void)node;
    }

    ExperimentConfig cfg;
    const Section problem(root, "problem", {"m", "alpha", "lambda", "dim"});
    cfg.params.m = problem.required_number("m");
    cfg.params.alpha = problem.required_number("alpha");
    cfg.params.lambda = problem.number("lambda", 1.0);
    cfg.params.dim = static_cast<int>(to_integer("problem.dim", problem.text("dim", "1")));

    const Section phi(root, "phi", {"kind", "center", "width", "radius", "amplitude", "table"});
    const std::string kind = phi.text("kind", "zero");
    Point center{0.0, 0.0};
    if (phi.has("center")) {
        const auto c = number_list("phi.center", phi.required("center"));
        if (c.empty() || c.size() > 2) throw ConfigError("phi.center", "needs one or two coordinates");
        for (std::size_t i = 0; i < c.size(); ++i) center[i] = c[i];
    }
    if (kind == "gaussian") {
        cfg.phi = InitialPerturbation::gaussian(center, phi.number("width", 1.0), phi.required_number("amplitude"));
    } else if (kind == "smooth_bump") {
        cfg.phi = InitialPerturbation::smooth_bump(center, phi.number("radius", 1.0), phi.required_number("amplitude"));
    } else if (kind == "tabulated") {
        cfg.phi.kind = InitialPerturbation::Kind::Tabulated;
        cfg.phi_table_path = phi.required("table");
    } else if (kind == "zero") {
        cfg.phi = InitialPerturbation::zero();
    } else {
        throw ConfigError("phi.kind", fmt::format("unknown kind '{}'", kind));
    }

    const Section grid(root, "grid", {"half_width", "points_per_axis"});
    cfg.solver.grid.dim = cfg.params.dim;
    cfg.solver.grid.half_width = grid.number("half_width", 40.0);
    cfg.solver.grid.points_per_axis =
        static_cast<int>(to_integer("grid.points_per_axis", grid.text("points_per_axis", "2048")));

    const Section solver(root, "solver", {"variable", "stepper", "dt_initial", "cfl_safety", "dt_max", "growth",
                                          "boundary", "bound_slack", "cg_tolerance", "boundary_threshold"});
    const std::string variable = solver.text("variable", "original");
    if (variable == "original") cfg.variable = VariableTag::Original;
    else if (variable == "rescaled") cfg.variable = VariableTag::Rescaled;
    else throw ConfigError("solver.variable", fmt::format("expected original or rescaled, got '{}'", variable));
    const std::string stepper = solver.text("stepper", "adaptive");
    if (stepper == "adaptive") cfg.solver.stepper = Stepper::Adaptive;
    else if (stepper == "fixed") cfg.solver.stepper = Stepper::Fixed;
    else throw ConfigError("solver.stepper", fmt::format("expected fixed or adaptive, got '{}'", stepper));
    if (solver.text("boundary", "far_field_ode") != "far_field_ode")
        throw ConfigError("solver.boundary", "only far_field_ode is supported");
    cfg.solver.dt_initial = solver.number("dt_initial", cfg.solver.dt_initial);
    cfg.solver.cfl_safety = solver.number("cfl_safety", cfg.solver.cfl_safety);
    cfg.solver.dt_max = solver.number("dt_max", cfg.solver.dt_max);
    cfg.solver.growth = solver.number("growth", cfg.solver.growth);
    cfg.solver.bound_slack = solver.number("bound_slack", cfg.solver.bound_slack);
    cfg.solver.cg_tolerance = solver.number("cg_tolerance", cfg.solver.cg_tolerance);
    cfg.solver.boundary_threshold = solver.number("boundary_threshold", cfg.solver.boundary_threshold);

    const Section snaps(root, "snapshots", {"kind", "times", "from", "to", "per_decade"});
    const std::string skind = snaps.text("kind", "log_time");
    if (skind == "list") {
        cfg.snapshots.kind = SnapshotPlan::Kind::List;
        cfg.snapshots.times = number_list("snapshots.times", snaps.required("times"));
    } else if (skind == "log_time" || skind == "log_sigma") {
        cfg.snapshots.kind = skind == "log_time" ? SnapshotPlan::Kind::LogTime : SnapshotPlan::Kind::LogSigma;
        cfg.snapshots.from = snaps.required_number("from");
        cfg.snapshots.to = snaps.required_number("to");
        cfg.snapshots.per_decade =
            static_cast<int>(to_integer("snapshots.per_decade", snaps.text("per_decade", "10")));
    } else {
        throw ConfigError("snapshots.kind", fmt::format("unknown kind '{}'", skind));
    }

    const Section analysis(root, "analysis", {"list"});
    for (const auto& item : split(analysis.text("list", ""), ';')) cfg.analyses.push_back(Analysis::parse(item));

    const Section output(root, "output", {"dir", "seed"});
    cfg.output_dir = output.text("dir", cfg.output_dir);
    const long seed = to_integer("output.seed", output.text("seed", "0"));
    if (seed < 0) throw ConfigError("output.seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config", fmt::format("cannot open '{}'", path));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& cfg)
{
    std::string out;
    out += "[problem]\n";
    out += fmt::format("m = {}\nalpha = {}\nlambda = {}\ndim = {}\n\n", num(cfg.params.m), num(cfg.params.alpha),
                       num(cfg.params.lambda), cfg.params.dim);

    out += "[phi]\n";
    const auto& phi = cfg.phi;
    if (phi.kind == InitialPerturbation::Kind::Tabulated) {
        out += fmt::format("kind = tabulated\ntable = {}\n\n", cfg.phi_table_path);
    } else {
        const bool bump = phi.kind == InitialPerturbation::Kind::SmoothBump;
        out += fmt::format("kind = {}\n", bump ? "smooth_bump" : "gaussian");
        out += cfg.params.dim == 2 ? fmt::format("center = {} {}\n", num(phi.center[0]), num(phi.center[1]))
                                   : fmt::format("center = {}\n", num(phi.center[0]));
        out += fmt::format("{} = {}\namplitude = {}\n\n", bump ? "radius" : "width", num(phi.width),
                           num(phi.amplitude));
    }

    out += "[grid]\n";
    out += fmt::format("half_width = {}\npoints_per_axis = {}\n\n", num(cfg.solver.grid.half_width),
                       cfg.solver.grid.points_per_axis);

    const auto& s = cfg.solver;
    out += "[solver]\n";
    out += fmt::format("variable = {}\n", cfg.variable == VariableTag::Original ? "original" : "rescaled");
    out += fmt::format("stepper = {}\n", to_string(s.stepper));
    out += fmt::format("dt_initial = {}\ncfl_safety = {}\ndt_max = {}\ngrowth = {}\n", num(s.dt_initial),
                       num(s.cfl_safety), num(s.dt_max), num(s.growth));
    out += "boundary = far_field_ode\n";
    out += fmt::format("bound_slack = {}\ncg_tolerance = {}\nboundary_threshold = {}\n\n", num(s.bound_slack),
                       num(s.cg_tolerance), num(s.boundary_threshold));

    out += "[snapshots]\n";
    const auto& sp = cfg.snapshots;
    if (sp.kind == SnapshotPlan::Kind::List) {
        out += "kind = list\ntimes =";
        for (const double t : sp.times) out += " " + num(t);
        out += "\n\n";
    } else {
        out += fmt::format("kind = {}\nfrom = {}\nto = {}\nper_decade = {}\n\n",
                           sp.kind == SnapshotPlan::Kind::LogTime ? "log_time" : "log_sigma", num(sp.from),
                           num(sp.to), sp.per_decade);
    }

    out += "[analysis]\nlist =";
    for (std::size_t k = 0; k < cfg.analyses.size(); ++k)
        out += (k == 0 ? " " : "; ") + cfg.analyses[k].to_string();
    out += "\n\n";

    out += fmt::format("[output]\ndir = {}\nseed = {}\n", cfg.output_dir, cfg.seed);
    return out;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b)
{
    auto phi_eq = [](const InitialPerturbation& x, const InitialPerturbation& y) {
        return x.kind == y.kind && x.center == y.center && x.width == y.width && x.amplitude == y.amplitude;
    };
    const auto& s = a.solver;
    const auto& t = b.solver;
    return a.params.m == b.params.m && a.params.alpha == b.params.alpha && a.params.lambda == b.params.lambda
        && a.params.dim == b.params.dim && phi_eq(a.phi, b.phi) && a.phi_table_path == b.phi_table_path
        && s.grid == t.grid && s.stepper == t.stepper && s.dt_initial == t.dt_initial
        && s.cfl_safety == t.cfl_safety && s.dt_max == t.dt_max && s.growth == t.growth
        && s.bound_slack == t.bound_slack && s.cg_tolerance == t.cg_tolerance
        && s.boundary_threshold == t.boundary_threshold && a.snapshots == b.snapshots && a.variable == b.variable
        && a.analyses == b.analyses && a.output_dir == b.output_dir && a.seed == b.seed;
}

} // namespace ndlab
