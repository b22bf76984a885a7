// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file runner.hpp
 * @brief Task execution behind the command-line tool: CSV artifacts, a JSON
 *        run manifest and the mapping from errors to exit codes.
 *
 * Exit codes: 0 success, 1 failed verification or unexpected error,
 * 2 schema violation, 3 infeasible sector, 4 solver failure.
 */

#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dqlm/config.hpp"
#include "dqlm/symmetry.hpp"

namespace dqlm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitSolver = 4;

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Residual and cross-method checks of the closed-form results for the
/// configured layout and rates.
std::vector<CheckResult> verify_exact(const ExperimentConfig& cfg);

/// (layer, 1-based position) label of a register slot, e.g. ("link", 3).
std::pair<std::string, int> slot_label(const LatticeLayout& layout, std::size_t slot);

/// Double-space sector selected by the config on a layout.
DoubleConstraints selected_constraints(const ExperimentConfig& cfg, const LatticeLayout& layout);

struct RunOutcome {
    int exit_code = kExitOk;
    nlohmann::json manifest;
};

/// Runs the configured task, writing CSV files and manifest.json into `out_dir`.
RunOutcome run_task(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Output directory: `flag` if given, else $DQLM_OUTPUT_DIR, else the config value.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg, const std::optional<std::string>& flag);

int exit_code_for(const std::exception& e);

/// Parse, run and report. Progress goes to `out`; failures are reported on
/// `err` as a one-line JSON object {"error", "message", "exit_code"}.
int run_document(const nlohmann::json& doc, const std::optional<std::string>& out_flag, std::ostream& out,
                 std::ostream& err);

}  // namespace dqlm
