#include "ndlab/perturbation.hpp"

#include "ndlab/errors.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace ndlab {

InitialPerturbation InitialPerturbation::gaussian(Point center, double width, double amplitude)
{
    InitialPerturbation p;
    p.kind = Kind::Gaussian;
    p.center = center;
    p.width = width;
    p.amplitude = amplitude;
    return p;
}

InitialPerturbation InitialPerturbation::smooth_bump(Point center, double radius, double amplitude)
{
    InitialPerturbation p;
    p.kind = Kind::SmoothBump;
    p.center = center;
    p.width = radius;
    p.amplitude = amplitude;
    return p;
}

InitialPerturbation InitialPerturbation::tabulated(GridField table)
{
    InitialPerturbation p;
    p.kind = Kind::Tabulated;
    p.amplitude = 0.0;
    p.table = std::move(table);
    return p;
}

void InitialPerturbation::validate(double lambda) const
{
    if (kind == Kind::Tabulated) {
        if (!table) throw DomainError("tabulated perturbation without a table");
        table->require_finite("phi table");
    } else {
        if (!(width > 0.0) || !std::isfinite(width))
            throw DomainError(fmt::format("phi width/radius must be > 0 (got {})", width));
        if (!std::isfinite(amplitude))
            throw DomainError("phi amplitude must be finite");
    }
    if (!(infimum() > -lambda))
        throw DomainError(fmt::format("inf phi = {} must exceed -lambda = {}", infimum(), -lambda));
}

GridField InitialPerturbation::sample(const GridSpec& spec) const
{
    if (kind == Kind::Tabulated) {
        if (!(table->spec == spec)) throw DomainError("tabulated phi lives on a different grid");
        return *table;
    }
    return GridField::sample(spec, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
        if (kind == Kind::Gaussian) return amplitude * std::exp(-r2 / (width * width));
        const double s = r2 / (width * width);
        if (s >= 1.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - s));
    });
}

double InitialPerturbation::infimum() const
{
    if (kind == Kind::Tabulated)
        return std::min(0.0, *std::min_element(table->values.begin(), table->values.end()));
    return std::min(0.0, amplitude);
}

double InitialPerturbation::supremum() const
{
    if (kind == Kind::Tabulated)
        return std::max(0.0, *std::max_element(table->values.begin(), table->values.end()));
    return std::max(0.0, amplitude);
}

bool InitialPerturbation::is_zero() const
{
    return infimum() == 0.0 && supremum() == 0.0;
}

std::string_view to_string(InitialPerturbation::Kind kind)
{
    switch (kind) {
    case InitialPerturbation::Kind::Gaussian: return "gaussian";
    case InitialPerturbation::Kind::SmoothBump: return "smooth_bump";
    case InitialPerturbation::Kind::Tabulated: return "tabulated";
    }
    return "unknown";
}

} // namespace ndlab
