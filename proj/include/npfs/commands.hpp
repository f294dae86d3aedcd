#pragma once

#include <string>

#include "npfs/config.hpp"

namespace npfs {

struct RunOptions {
    std::string out_dir = "out";
    int threads = 1;
    int snapshot_every = 0;  // 0: no snapshots
    int corrupt_step = -1;   // test hook for `check`: damage this state first
};

/// Solve the configured scenario and write metadata.txt, timeseries.csv and
/// optional snapshots into out_dir. Returns the process exit code.
int cmd_run(const ParsedConfig& cfg, const RunOptions& opts);

/// Run the [study] refinement ladder and write rate_table.csv.
int cmd_converge(const ParsedConfig& cfg, const RunOptions& opts);

/// Solve and run the invariant battery; prints one line per invariant and
/// returns 3 if any fails.
int cmd_check(const ParsedConfig& cfg, const RunOptions& opts);

}  // namespace npfs
