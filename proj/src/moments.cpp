#include "ndlab/moments.hpp"

#include "ndlab/gauss.hpp"
#include "ndlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/core.h>

namespace ndlab {

int integer_order(double K)
{
    if (!(K >= 0.0) || !std::isfinite(K))
        throw DomainError(fmt::format("expansion order K must be finite and >= 0 (got {})", K));
    return static_cast<int>(std::floor(K));
}

double raw_moment(const GridField& f, const MultiIndex& nu, Warnings* warnings)
{
    if (!boundary_negligible(f, 1e-8))
        warn(warnings, fmt::format("raw_moment: boundary mass {:.3e} not negligible", boundary_max(f)));
    const GridField xnu = monomial_field(f.spec, nu);
    return f.spec.cell_volume() * kernels::par::dot(xnu.values, f.values);
}

MomentSolver::MomentSolver(const GridField& f, double t, Warnings* warnings)
    : f_(f), t_(t), warnings_(warnings)
{
    if (!(t >= 0.0)) throw DomainError(fmt::format("moment time must be >= 0 (got {})", t));
    if (!boundary_negligible(f, 1e-8))
        warn(warnings_, fmt::format("moments: boundary mass {:.3e} not negligible", boundary_max(f)));
}

const GridField& MomentSolver::g_field(const MultiIndex& omega)
{
    auto it = g_fields_.find(omega);
    if (it == g_fields_.end()) it = g_fields_.emplace(omega, g_kernel_field(f_.spec, omega, t_)).first;
    return it->second;
}

const GridField& MomentSolver::monomial(const MultiIndex& nu)
{
    auto it = monomials_.find(nu);
    if (it == monomials_.end()) it = monomials_.emplace(nu, monomial_field(f_.spec, nu)).first;
    return it->second;
}

double MomentSolver::kernel_moment(const MultiIndex& nu, const MultiIndex& omega)
{
    return f_.spec.cell_volume() * kernels::par::dot(monomial(nu).values, g_field(omega).values);
}

double MomentSolver::coefficient(const MultiIndex& nu)
{
    if (nu.dim() != f_.spec.dim) throw DomainError("multi-index dimension does not match grid");
    if (auto it = cache_.find(nu); it != cache_.end()) return it->second;
    double m = f_.spec.cell_volume() * kernels::par::dot(monomial(nu).values, f_.values);
    for (const MultiIndex& omega : strict_predecessors(nu))
        m -= coefficient(omega) * kernel_moment(nu, omega);
    cache_.emplace(nu, m);
    return m;
}

double moment_coefficient(const GridField& f, const MultiIndex& nu, double t, Warnings* warnings)
{
    MomentSolver solver(f, t, warnings);
    return solver.coefficient(nu);
}

GridField expansion_field(const GridSpec& spec, const IndexMap& coefficients, double t)
{
    GridField sum(spec);
    for (const auto& [nu, c] : coefficients) {
        if (c == 0.0) continue;
        sum += c * g_kernel_field(spec, nu, t);
    }
    return sum;
}

ExpansionReport expand(const GridField& f, double K, double t, const ExpandOptions& opts,
                       Warnings* warnings)
{
    const int order = integer_order(K);
    ExpansionReport report;
    report.K = K;
    report.at_time = t;
    report.dim = f.spec.dim;

    MomentSolver solver(f, t, warnings);
    const auto indices = enumerate_graded(f.spec.dim, order);
    for (const auto& nu : indices) report.coefficients.emplace(nu, solver.coefficient(nu));

    const GridField residual = f - expansion_field(f.spec, report.coefficients, t);
    for (const auto& omega : indices) {
        const GridField xw = monomial_field(f.spec, omega);
        report.residual_moments.emplace(
            omega, f.spec.cell_volume() * kernels::par::dot(xw.values, residual.values));
    }

    report.tolerance = opts.tolerance_factor * weighted_norm(f, K);
    report.valid = std::all_of(report.residual_moments.begin(), report.residual_moments.end(),
                               [&](const auto& kv) { return std::abs(kv.second) <= report.tolerance; });
    if (!report.valid)
        report.notes.push_back("residual moments above tolerance: grid truncation too aggressive");
    return report;
}

double e_functional(const GridField& f, double K, double q, double t)
{
    if (!(t > 0.0)) throw DomainError(fmt::format("E_K,q needs t > 0 (got {})", t));
    const double N = f.spec.dim;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double lq = lq_norm(f, q);
    const double l1 = lq_norm(f, 1.0);
    return std::pow(1.0 + t, 0.5 * K) * (std::pow(t, 0.5 * N * (1.0 - inv_q)) * lq + l1)
           + weighted_norm(f, K);
}

namespace {

struct DuhamelParts {
    GridField integral;
    IndexMap coefficient_integrals;
};

DuhamelParts duhamel_parts(const std::vector<TimedField>& traj, const std::vector<std::size_t>& picks,
                           const std::vector<MultiIndex>& indices, double t, Warnings* warnings)
{
    DuhamelParts parts{GridField(traj.front().field.spec), {}};
    for (const auto& nu : indices) parts.coefficient_integrals.emplace(nu, 0.0);
    for (std::size_t k = 0; k < picks.size(); ++k) {
        const TimedField& sample = traj[picks[k]];
        const double left = k > 0 ? sample.time - traj[picks[k - 1]].time : 0.0;
        const double right = k + 1 < picks.size() ? traj[picks[k + 1]].time - sample.time : 0.0;
        const double weight = 0.5 * (left + right);
        if (weight == 0.0) continue;
        const double lag = t - sample.time;
        if (lag > 0.0)
            parts.integral += weight * heat_semigroup(sample.field, lag, warnings);
        else
            parts.integral += weight * sample.field;
        MomentSolver solver(sample.field, sample.time, warnings);
        for (const auto& nu : indices) parts.coefficient_integrals[nu] += weight * solver.coefficient(nu);
    }
    return parts;
}

GridField remainder_from(const DuhamelParts& parts, double t)
{
    return parts.integral - expansion_field(parts.integral.spec, parts.coefficient_integrals, t);
}

} // namespace

GridField duhamel_remainder(const std::vector<TimedField>& trajectory, double K, double t,
                            Warnings* warnings, const DuhamelOptions& opts)
{
    if (!(t > 0.0)) throw DomainError(fmt::format("Duhamel remainder needs t > 0 (got {})", t));
    if (trajectory.size() < 2) throw DomainError("Duhamel trajectory needs at least two samples");
    if (trajectory.front().time != 0.0)
        throw DomainError("Duhamel trajectory must start at s = 0");
    if (std::abs(trajectory.back().time - t) > 1e-12 * std::max(1.0, t))
        throw DomainError("Duhamel trajectory must end at s = t");
    for (std::size_t k = 1; k < trajectory.size(); ++k)
        if (!(trajectory[k].time > trajectory[k - 1].time))
            throw DomainError("Duhamel sample times must increase");

    const auto indices = enumerate_graded(trajectory.front().field.spec.dim, integer_order(K));
    std::vector<std::size_t> all(trajectory.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    const GridField fine = remainder_from(duhamel_parts(trajectory, all, indices, t, warnings), t);

    const std::size_t intervals = trajectory.size() - 1;
    if (intervals >= 4 && intervals % 2 == 0) {
        std::vector<std::size_t> every_other;
        for (std::size_t k = 0; k < trajectory.size(); k += 2) every_other.push_back(k);
        Warnings ignored;
        const DuhamelParts coarse_parts = duhamel_parts(trajectory, every_other, indices, t, &ignored);
        const GridField coarse = remainder_from(coarse_parts, t);
        const double scale = std::max(lq_norm(coarse_parts.integral, kInf), 1e-300);
        const double change = lq_norm(fine - coarse, kInf) / scale;
        if (change > opts.refinement_tolerance)
            warn(warnings, fmt::format("duhamel_remainder: time quadrature not converged "
                                       "(relative refinement change {:.3e})", change));
    }
    return fine;
}

// ---------------------------------------------------------------------------

std::string ExpansionReport::serialize() const
{
    std::string out;
    out += fmt::format("K={:.17g}\n", K);
    out += fmt::format("at_time={:.17g}\n", at_time);
    out += fmt::format("dim={}\n", dim);
    out += fmt::format("tolerance={:.17g}\n", tolerance);
    out += fmt::format("valid={}\n", valid ? 1 : 0);
    out += fmt::format("stabilized={}\n", stabilized ? 1 : 0);
    for (const auto& [nu, v] : coefficients) out += fmt::format("coef.{}={:.17g}\n", nu.to_string(), v);
    for (const auto& [nu, v] : residual_moments)
        out += fmt::format("residual.{}={:.17g}\n", nu.to_string(), v);
    if (M_constants)
        for (const auto& [nu, v] : *M_constants) out += fmt::format("M.{}={:.17g}\n", nu.to_string(), v);
    for (const auto& note : notes) out += fmt::format("note={}\n", note);
    return out;
}

ExpansionReport ExpansionReport::parse(const std::string& text)
{
    ExpansionReport r;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError(fmt::format("bad report line '{}'", line));
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        auto indexed = [&](const char* prefix) -> std::optional<MultiIndex> {
            const std::string p(prefix);
            if (key.rfind(p, 0) != 0) return std::nullopt;
            return MultiIndex::parse(key.substr(p.size()));
        };
        if (key == "K") r.K = std::stod(value);
        else if (key == "at_time") r.at_time = std::stod(value);
        else if (key == "dim") r.dim = std::stoi(value);
        else if (key == "tolerance") r.tolerance = std::stod(value);
        else if (key == "valid") r.valid = value == "1";
        else if (key == "stabilized") r.stabilized = value == "1";
        else if (key == "note") r.notes.push_back(value);
        else if (auto nu = indexed("coef.")) r.coefficients[*nu] = std::stod(value);
        else if (auto nu2 = indexed("residual.")) r.residual_moments[*nu2] = std::stod(value);
        else if (auto nu3 = indexed("M.")) {
            if (!r.M_constants) r.M_constants.emplace();
            (*r.M_constants)[*nu3] = std::stod(value);
        } else
            throw DomainError(fmt::format("unknown report key '{}'", key));
    }
    return r;
}

} // namespace ndlab
