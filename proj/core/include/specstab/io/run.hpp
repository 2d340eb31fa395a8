#pragma once

#include <filesystem>
#include <vector>

#include "specstab/io/config.hpp"

namespace specstab::io {

inline constexpr const char* kToolVersion = "0.1.0";

// Executes cfg.command and writes results.csv, summary.json, and
// manifest.json into out_dir (created when missing); every file is written
// atomically.  The same config on the same build yields byte-identical
// results.csv.  Library errors propagate to the caller.
void run(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Joins the results.csv rows of several run directories in argument order.
// Manifests must share schema version and command; differing grids require
// allow_mixed_grids, which prepends an h column.  ConfigError otherwise.
void report(const std::vector<std::filesystem::path>& run_dirs,
            const std::filesystem::path& out_csv, bool allow_mixed_grids);

}  // namespace specstab::io
