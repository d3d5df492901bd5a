#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ndlab {

/// Argument outside the domain of a formula (mu <= 0, t <= 0, alpha >= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested time lies beyond what the profile or trajectory covers.
class OutOfRangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Operation not defined in the current regime (m vs alpha).
class RegimeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// 1 + lambda^-alpha eta^(alpha-1) w <= 0, or a non-positive u.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time step violated a hard bound or the linear solve did not converge.
class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Rate fit over fewer than the required number of points or non-positive data.
class DegenerateWindow : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent experiment configuration; `field()` names the key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Collects non-fatal diagnostics (boundary mass, under-resolved kernels, ...).
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message)
{
    if (sink) sink->push_back(std::move(message));
}

} // namespace ndlab
