#pragma once

#include "ndlab/config.hpp"

#include <iosfwd>
#include <string>

namespace ndlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitSelftest = 3;

/// solve -> renormalize -> analyses, writing into the output directory:
///   manifest.json, config.ini, snapshots/snap_NNNN.csv, rates.csv,
///   reports.txt, <id>.series.csv, <id>.plot.dat, expansion_*.txt
/// Returns an exit code; diagnostics go to `log`.
int run_experiment(ExperimentConfig cfg, const std::string& base_dir, std::ostream& log);

} // namespace ndlab
