#pragma once

#include "ndlab/grid.hpp"

#include <string>

namespace ndlab {

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "NDLAB_OUTPUT_DIR";

/// Columns x,value (1-D) or x,y,value (2-D), one row per node in storage order.
std::string field_to_csv(const GridField& f);
void write_field_csv(const std::string& path, const GridField& f);

/// Inverse of field_to_csv. The grid is reconstructed from the coordinates,
/// which must be uniform cell centres of a centred cube.
GridField field_from_csv(const std::string& text);
GridField read_field_csv(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// `configured`, unless the override variable is set and non-empty.
std::string resolve_output_dir(const std::string& configured);

} // namespace ndlab
