#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "portfind/fixed.hpp"

namespace portfind::cli {

// Implementations behind the command-line subcommands. Errors surface as
// exceptions; each command returns the process exit code on success paths
// (a finder miss is a result, not an error).

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_log,
                 const std::optional<std::filesystem::path>& ground_truth);

int cmd_snapshot(const std::filesystem::path& log_path, int64_t time,
                 const std::optional<std::filesystem::path>& rates_path,
                 const std::filesystem::path& out_path);

int cmd_find(const std::filesystem::path& snapshot_path,
             const std::filesystem::path& portfolio_path, Fixed threshold,
             std::optional<uint64_t> top,
             const std::optional<std::filesystem::path>& out_path);

int cmd_oracle(const std::filesystem::path& snapshot_path,
               const std::filesystem::path& portfolio_path, uint64_t limit,
               const std::optional<std::filesystem::path>& out_path);

int cmd_experiment(const std::filesystem::path& config_path,
                   const std::filesystem::path& out_dir);

}  // namespace portfind::cli
