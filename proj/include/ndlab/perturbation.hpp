#pragma once

#include "ndlab/grid.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace ndlab {

/// Initial perturbation phi of the background level lambda.
///   gaussian:    amplitude * exp(-|x - center|^2 / width^2)
///   smooth_bump: amplitude * exp(1 - 1 / (1 - (|x - center| / radius)^2)) inside the ball, 0 outside
///   tabulated:   values given on a grid (0 outside it)
struct InitialPerturbation {
    enum class Kind { Gaussian, SmoothBump, Tabulated };

    Kind kind = Kind::Gaussian;
    Point center{0.0, 0.0};
    double width = 1.0;   ///< gaussian width or bump radius
    double amplitude = 0.0;
    std::optional<GridField> table;

    static InitialPerturbation gaussian(Point center, double width, double amplitude);
    static InitialPerturbation smooth_bump(Point center, double radius, double amplitude);
    static InitialPerturbation tabulated(GridField table);
    static InitialPerturbation zero() { return gaussian({0.0, 0.0}, 1.0, 0.0); }

    /// Throws DomainError unless inf phi > -lambda and the shape is well formed.
    void validate(double lambda) const;

    GridField sample(const GridSpec& spec) const;

    /// inf and sup of phi over R^N (the far field contributes 0).
    double infimum() const;
    double supremum() const;

    bool is_zero() const;
};

std::string_view to_string(InitialPerturbation::Kind kind);

} // namespace ndlab
