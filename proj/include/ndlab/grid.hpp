#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ndlab {

/// Uniform cell-centred grid on the cube [-half_width, half_width]^dim.
struct GridSpec {
    int dim = 1;
    double half_width = 40.0;
    int points_per_axis = 2048;

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    double cell_volume() const;
    std::size_t size() const;
    /// Coordinate of the i-th cell centre along any axis.
    double coord(int i) const { return -half_width + (i + 0.5) * spacing(); }
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

using Point = std::array<double, 2>;

/// Scalar field sampled at the nodes of a GridSpec, row-major by axis
/// (index = i0 * n + i1 in 2-D).
struct GridField {
    GridSpec spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridSpec& s, double fill = 0.0);
    GridField(const GridSpec& s, std::vector<double> v);

    static GridField sample(const GridSpec& s, const std::function<double(std::span<const double>)>& fn);

    std::size_t size() const { return values.size(); }
    Point node(std::size_t index) const;
    /// Throws DomainError if any value is NaN or infinite.
    void require_finite(const char* what) const;

    GridField& operator+=(const GridField& other);
    GridField& operator-=(const GridField& other);
    GridField& operator*=(double c);
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double c, GridField a);

/// Multi-index nu in (N u {0})^N with |nu|, nu! and the componentwise order.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

    int dim() const { return static_cast<int>(entries_.size()); }
    int order() const;
    double factorial() const;
    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& entries() const { return entries_; }
    bool is_zero() const { return order() == 0; }

    /// Componentwise partial order: nu <= omega iff nu_i <= omega_i for all i.
    bool precedes(const MultiIndex& other) const;

    /// Dash-joined entries, e.g. "2-0".
    std::string to_string() const;
    static MultiIndex parse(const std::string& text);

    bool operator==(const MultiIndex&) const = default;

private:
    std::vector<int> entries_;
};

/// Graded lexicographic order: by |nu|, then entries compared from the first
/// axis with larger leading entries first ((1,0) before (0,1)).
struct GradedLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

using IndexMap = std::map<MultiIndex, double, GradedLess>;

/// All multi-indices with |nu| <= max_order, in graded lexicographic order.
std::vector<MultiIndex> enumerate_graded(int dim, int max_order);

/// All omega with omega <= nu and omega != nu, in graded lexicographic order.
std::vector<MultiIndex> strict_predecessors(const MultiIndex& nu);

/// x^nu evaluated at every grid node.
GridField monomial_field(const GridSpec& spec, const MultiIndex& nu);

} // namespace ndlab
