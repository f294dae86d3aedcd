#pragma once

#include <string>

#include "npfs/analysis.hpp"
#include "npfs/config.hpp"
#include "npfs/scheme.hpp"

namespace npfs {

/// Per-step diagnostics CSV, one row per time level n = 0..N:
///   n,t,theta_H,theta_V,phi_linf,v_linf,z_H,mass
/// z_H is reported as 0 at n = 0 where z is undefined. Identical
/// trajectories produce byte-identical text.
std::string timeseries_csv(const Trajectory& traj);

/// Rate-study CSV: one row per step count plus footer comments with the
/// fitted slope and constant.
std::string rate_table_csv(const RateTable& table);

/// Run metadata: version and timing as comments followed by the canonical
/// config echo, so the file itself parses as a config.
std::string run_metadata(const ParsedConfig& cfg, double wall_seconds);

/// Flat binary snapshot of one state: magic "NPFS1", then little-endian
/// u32 fields {dim, cells per axis..., field count = 4}, then the four
/// fields theta, phi, v, z as row-major little-endian f64.
void write_snapshot(const std::string& path, const StepState& state);

/// Library version string used in metadata.
const char* version_string();

}  // namespace npfs
