#pragma once

// Inductively corrected moments m_nu(f,t), the expansion sum m_nu g_nu(.,t),
// the functional E_{K,q} and the Duhamel remainder R_K.

#include "ndlab/errors.hpp"
#include "ndlab/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ndlab {

/// Largest integer order covered by a real expansion order K.
int integer_order(double K);

double raw_moment(const GridField& f, const MultiIndex& nu, Warnings* warnings = nullptr);

/// Memoizes m_omega(f,t) over the <=-lattice below the requested indices.
class MomentSolver {
public:
    MomentSolver(const GridField& f, double t, Warnings* warnings = nullptr);

    double coefficient(const MultiIndex& nu);
    /// int x^nu g_omega(x,t) dx by quadrature on f's grid.
    double kernel_moment(const MultiIndex& nu, const MultiIndex& omega);

    double time() const { return t_; }

private:
    const GridField& f_;
    double t_;
    Warnings* warnings_;
    IndexMap cache_;
    std::map<MultiIndex, GridField, GradedLess> g_fields_;
    std::map<MultiIndex, GridField, GradedLess> monomials_;

    const GridField& g_field(const MultiIndex& omega);
    const GridField& monomial(const MultiIndex& nu);
};

double moment_coefficient(const GridField& f, const MultiIndex& nu, double t,
                          Warnings* warnings = nullptr);

struct ExpansionReport {
    double K = 0.0;
    double at_time = 0.0;
    int dim = 1;
    IndexMap coefficients;        ///< m_nu for |nu| <= [K]
    IndexMap residual_moments;    ///< int x^omega [f - sum m_nu g_nu] dx
    std::optional<IndexMap> M_constants;
    double tolerance = 0.0;
    bool valid = false;
    bool stabilized = true;       ///< false when estimate_M could not certify M_nu
    std::vector<std::string> notes;

    /// Flat key=value record; multi-indices are dash-joined ("2-0").
    std::string serialize() const;
    static ExpansionReport parse(const std::string& text);
};

struct ExpandOptions {
    /// residual tolerance = factor * |||f|||_K
    double tolerance_factor = 1e-7;
};

ExpansionReport expand(const GridField& f, double K, double t, const ExpandOptions& opts = {},
                       Warnings* warnings = nullptr);

/// sum_{|nu| <= [K]} coefficients[nu] g_nu(., t) on `spec`.
GridField expansion_field(const GridSpec& spec, const IndexMap& coefficients, double t);

double e_functional(const GridField& f, double K, double q, double t);

struct TimedField {
    double time = 0.0;
    GridField field;
};

struct DuhamelOptions {
    /// Relative L^inf change between the full and every-other-sample
    /// trapezoid above which a time-quadrature warning is raised.
    double refinement_tolerance = 1e-3;
};

/// R_K[f](t) = int_0^t e^{(t-s)Delta} f(s) ds - sum [int_0^t m_nu(f(s),s) ds] g_nu(t),
/// with the composite trapezoid rule over the trajectory's sample times,
/// which must start at 0 and end at t.
GridField duhamel_remainder(const std::vector<TimedField>& trajectory, double K, double t,
                            Warnings* warnings = nullptr, const DuhamelOptions& opts = {});

} // namespace ndlab
