// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Experiment configuration: a single JSON document, validated strictly
 *        (unknown keys and wrong types raise SchemaError). The schema is
 *        documented in README.md.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqlm/liouvillian.hpp"
#include "dqlm/models.hpp"

namespace dqlm {

enum class Task { Spectrum, SteadyState, Dynamics, Winding, VerifyExact, Profile };

std::string to_string(Task t);

struct SectorSelection {
    /// Strong charges in physical units: {N} on chains and 2D, {N_H', D_H'} on the ladder.
    /// Defaults: N = 2 on chains, (0, 0) on the ladder, half filling in 2D; an
    /// empty list lifts the constraint.
    std::optional<std::vector<double>> strong;
    /// "weak": ket and bra share their gauge charges; "none": strong charges only.
    std::string gauge = "weak";
};

struct PhiScan {
    int steps = 8;
    double max = 6.283185307179586;
    TwistVariant variant = TwistVariant::DoubleSpace;
};

struct TimeGrid {
    double t_max = 100.0;
    int points = 101;
};

struct InitialState {
    /// Site occupations as a '0'/'1' string, site 1 first.
    std::string sites;
    /// "down" or "up" for every link.
    std::string links = "down";
};

struct ProfileSpec {
    /// Defaults to gamma_u / gamma_d of the first biased jump family.
    std::optional<double> beta;
    double alpha = 1.0;
    double beta_prime = 1.0;
    double alpha_prime = 1.0;
    /// Filling fractions nu; N = round(nu L). Empty: use the sector.
    std::vector<double> fillings;
};

struct Tolerances {
    double kernel = 1e-9;
    double residual = 1e-10;
    double abs = 1e-9;
    double rel = 1e-9;
    std::size_t dense_cap = 6000;
};

struct ExperimentConfig {
    Task task = Task::Spectrum;
    /// "chain", "hierarchical" or "square-2d".
    std::string layout = "chain";
    /// Chain boundaries to run, each "obc" or "pbc".
    std::vector<std::string> boundaries{"obc"};
    int L = 4;
    int Ly = 2;
    double J = 1.0;
    double J1 = 1.0;
    double J2 = 1.0;
    double phi = 0.0;
    /// False drops the Hamiltonian (pure jump dynamics, e.g. the effective exclusion process).
    bool with_hamiltonian = true;
    std::vector<JumpFamily> jumps;
    std::optional<Disorder> disorder;
    SectorSelection sector;
    PhiScan phi_scan;
    TimeGrid time;
    InitialState initial;
    ProfileSpec profile;
    Tolerances tolerances;
    std::string output_dir = "dqlm-out";

    /// Model for one boundary ("obc" or "pbc"; ignored off chains).
    ModelSpec model(const std::string& boundary) const;
    /// Strong-charge values as integers (strong_charges() convention), if selected.
    std::optional<std::vector<int>> strong_integers() const;
    /// Canonical JSON echo with every default filled in.
    nlohmann::json to_json() const;
};

/// Parses and validates a configuration document. Throws SchemaError.
ExperimentConfig parse_config(const nlohmann::json& doc);
/// Reads a file and parses it. Throws SchemaError for unreadable or malformed files.
nlohmann::json read_config_document(const std::filesystem::path& path);

}  // namespace dqlm
