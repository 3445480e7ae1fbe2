#pragma once

// Subcommands of the beamdecay tool. Each returns a process exit code.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamdecay/errors.hpp"
#include "beamdecay/stability.hpp"
#include "config.hpp"

namespace beamdecay::cli {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitOther = 1,
    kExitConfig = 2,
    kExitIneligible = 3,
    kExitGoldenMismatch = 4,
    kExitResourceCap = 5,
    kExitPropertyFailure = 6,
};

int exit_code_for(ErrorCode code);

struct CommandContext {
    Json config;
    std::filesystem::path out_dir;
    std::ostream& out;
    std::ostream& err;
};

int cmd_certify(const CommandContext& ctx);
int cmd_table1(const CommandContext& ctx);
int cmd_simulate(const CommandContext& ctx);
int cmd_sweep(const CommandContext& ctx);
int cmd_check(const CommandContext& ctx);

/// Resolves the output directory (BEAMDECAY_OUT wins over --out), loads
/// the config and dispatches. Errors map to exit codes.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// One compared cell of the strip-beam decay table.
struct GoldenCell {
    std::size_t row;
    std::string column;  ///< beta0, beta1, M or sigma
    double computed;
    double rounded;  ///< two decimals, ties to even
    double reference;
    bool ok;         ///< |rounded - reference| <= 0.005
};

inline constexpr double kGoldenTolerance = 0.005;

/// Compares computed rows with the reference values. `reference_rows[k]`
/// is the reference row for rows[k]; empty means rows are in table order.
std::vector<GoldenCell> golden_cells(const std::vector<DecayTableRow>& rows,
                                     const std::vector<std::size_t>& reference_rows = {});

}  // namespace beamdecay::cli
