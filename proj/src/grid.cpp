#include "ndlab/grid.hpp"

#include "ndlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/core.h>

namespace ndlab {

double GridSpec::cell_volume() const
{
    return std::pow(spacing(), dim);
}

std::size_t GridSpec::size() const
{
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points_per_axis);
    return n;
}

void GridSpec::validate() const
{
    if (dim != 1 && dim != 2)
        throw DomainError(fmt::format("grid dim must be 1 or 2 (got {})", dim));
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw DomainError(fmt::format("half_width must be > 0 (got {})", half_width));
    if (points_per_axis <= 0 || points_per_axis % 2 != 0)
        throw DomainError(
            fmt::format("points_per_axis must be positive and even (got {})", points_per_axis));
}

GridField::GridField(const GridSpec& s, double fill) : spec(s), values(s.size(), fill)
{
    spec.validate();
}

GridField::GridField(const GridSpec& s, std::vector<double> v) : spec(s), values(std::move(v))
{
    spec.validate();
    if (values.size() != spec.size())
        throw DomainError(fmt::format("field has {} values, grid needs {}", values.size(), spec.size()));
}

GridField GridField::sample(const GridSpec& s, const std::function<double(std::span<const double>)>& fn)
{
    GridField f(s);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Point x = f.node(k);
        f.values[k] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(s.dim)));
    }
    return f;
}

Point GridField::node(std::size_t index) const
{
    const auto n = static_cast<std::size_t>(spec.points_per_axis);
    if (spec.dim == 1) return {spec.coord(static_cast<int>(index)), 0.0};
    return {spec.coord(static_cast<int>(index / n)), spec.coord(static_cast<int>(index % n))};
}

void GridField::require_finite(const char* what) const
{
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError(fmt::format("{}: non-finite value", what));
}

namespace {
void require_same_grid(const GridField& a, const GridField& b)
{
    if (!(a.spec == b.spec)) throw DomainError("fields live on different grids");
}
} // namespace

GridField& GridField::operator+=(const GridField& other)
{
    require_same_grid(*this, other);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += other.values[k];
    return *this;
}

GridField& GridField::operator-=(const GridField& other)
{
    require_same_grid(*this, other);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] -= other.values[k];
    return *this;
}

GridField& GridField::operator*=(double c)
{
    for (double& v : values) v *= c;
    return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double c, GridField a) { return a *= c; }

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries))
{
    for (int e : entries_)
        if (e < 0) throw DomainError("multi-index entries must be nonnegative");
}

int MultiIndex::order() const
{
    return std::accumulate(entries_.begin(), entries_.end(), 0);
}

double MultiIndex::factorial() const
{
    double f = 1.0;
    for (int e : entries_)
        for (int k = 2; k <= e; ++k) f *= k;
    return f;
}

bool MultiIndex::precedes(const MultiIndex& other) const
{
    if (dim() != other.dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (entries_[static_cast<std::size_t>(i)] > other[i]) return false;
    return true;
}

std::string MultiIndex::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(entries_[i]);
    }
    return s;
}

MultiIndex MultiIndex::parse(const std::string& text)
{
    std::vector<int> entries;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, '-')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError(fmt::format("bad multi-index '{}'", text));
        entries.push_back(std::stoi(part));
    }
    if (entries.empty()) throw DomainError("empty multi-index");
    return MultiIndex(std::move(entries));
}

bool GradedLess::operator()(const MultiIndex& a, const MultiIndex& b) const
{
    if (a.order() != b.order()) return a.order() < b.order();
    // larger leading entry first
    return std::lexicographical_compare(b.entries().begin(), b.entries().end(),
                                        a.entries().begin(), a.entries().end());
}

std::vector<MultiIndex> enumerate_graded(int dim, int max_order)
{
    if (dim < 1) throw DomainError("dim must be >= 1");
    std::vector<MultiIndex> out;
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    // odometer over the box [0, max_order]^dim, then filter and sort
    while (true) {
        if (std::accumulate(e.begin(), e.end(), 0) <= max_order) out.emplace_back(e);
        int i = dim - 1;
        while (i >= 0 && e[static_cast<std::size_t>(i)] == max_order) {
            e[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++e[static_cast<std::size_t>(i)];
    }
    std::sort(out.begin(), out.end(), GradedLess{});
    return out;
}

std::vector<MultiIndex> strict_predecessors(const MultiIndex& nu)
{
    std::vector<MultiIndex> out;
    for (auto& omega : enumerate_graded(nu.dim(), nu.order()))
        if (omega.precedes(nu) && !(omega == nu)) out.push_back(omega);
    return out;
}

GridField monomial_field(const GridSpec& spec, const MultiIndex& nu)
{
    if (nu.dim() != spec.dim) throw DomainError("multi-index dimension does not match grid");
    return GridField::sample(spec, [&](std::span<const double> x) {
        double v = 1.0;
        for (int i = 0; i < spec.dim; ++i) v *= std::pow(x[static_cast<std::size_t>(i)], nu[i]);
        return v;
    });
}

} // namespace ndlab
