#pragma once

// Experiment configuration: INI-style sections of key = value pairs.
// The schema is documented in README.md.

#include "ndlab/perturbation.hpp"
#include "ndlab/profiles.hpp"
#include "ndlab/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ndlab {

struct Analysis {
    enum class Kind { Thm11, Thm12, OdeLimit, FiniteHorizon, ExpandOnly };
    Kind kind = Kind::OdeLimit;
    double q = 2.0;   ///< thm11, thm12
    double r = 2.0;   ///< thm11
    double K = 0.0;   ///< thm12, expand_only

    std::string to_string() const;
    static Analysis parse(const std::string& text);
    bool operator==(const Analysis&) const = default;
};

/// How the snapshot times are generated.
struct SnapshotPlan {
    enum class Kind { List, LogTime, LogSigma };
    Kind kind = Kind::LogTime;
    std::vector<double> times;   ///< List
    double from = 0.1;           ///< LogTime / LogSigma lower end
    double to = 10.0;
    int per_decade = 10;

    std::vector<double> resolve(const ProblemParams& p) const;
    bool operator==(const SnapshotPlan&) const = default;
};

struct ExperimentConfig {
    ProblemParams params;
    InitialPerturbation phi;
    std::string phi_table_path;   ///< for tabulated phi; resolved relative to the config
    SolverConfig solver;          ///< snapshot_times filled by resolve()
    SnapshotPlan snapshots;
    VariableTag variable = VariableTag::Original;
    std::vector<Analysis> analyses;
    std::string output_dir = "ndlab_out";
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    /// Fills solver.snapshot_times and loads a tabulated phi.
    void resolve(const std::string& base_dir = ".");
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

} // namespace ndlab
