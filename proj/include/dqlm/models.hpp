// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file models.hpp
 * @brief Hamiltonians, jump-operator families and disorder of the dissipative
 *        quantum link models.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dqlm/lattice.hpp"
#include "dqlm/sparse.hpp"

namespace dqlm {

/// H = J sum_n (tau_n^+ s_{n,n+1}^+ tau_{n+1}^- + h.c.); on chain-pbc the wrap
/// bond carries the twist phase exp(i phi).
struct QlmChain {
    double J = 1.0;
    double phi = 0.0;
};

/// H' = J1 sum (sigma_n^+ tau_{n,n+1}^+ sigma_{n+1}^- + h.c.)
///    + J2 sum (tau_{n-1,n}^+ s_n^+ tau_{n,n+1}^- + h.c.)
struct QlmHierarchical {
    double J1 = 1.0;
    double J2 = 1.0;
};

/// J1 on horizontal bonds, J2 on vertical bonds.
struct Qlm2D {
    double J1 = 1.0;
    double J2 = 1.0;
};

struct NoHamiltonian {};

using HamiltonianSpec = std::variant<NoHamiltonian, QlmChain, QlmHierarchical, Qlm2D>;

/// sqrt(gamma_u) s^+ and sqrt(gamma_d) s^- on every dissipative slot. On 2D
/// lattices the optional vertical rates apply to vertical links.
struct BiasedJumps {
    double gamma_u = 0.0;
    double gamma_d = 0.0;
    std::optional<double> gamma_u_vertical;
    std::optional<double> gamma_d_vertical;
};

/// One operator sqrt(gamma_u) s^+ + sqrt(gamma_d) s^- per dissipative slot.
struct XLikeJumps {
    double gamma_u = 0.0;
    double gamma_d = 0.0;
};

/// sqrt(gamma) s^z per dissipative slot.
struct DephasingJumps {
    double gamma = 0.0;
};

/// sqrt(Gamma) G_n per gauge site.
struct GaugeFixingJumps {
    double Gamma = 0.0;
};

/// Effective site-only exclusion process: sqrt(gamma_r) tau_n^- tau_{n+1}^+
/// (hop to the right) and sqrt(gamma_l) tau_n^+ tau_{n+1}^- per bond.
struct EffectiveAsepJumps {
    double gamma_r = 0.0;
    double gamma_l = 0.0;

    /// Strong-dissipation rates gamma_{r,l} = gamma_{u,d} J^2 / (gamma_u + gamma_d)^2.
    static EffectiveAsepJumps from_strong_dissipation(double gamma_u, double gamma_d, double J);
};

using JumpFamily = std::variant<BiasedJumps, XLikeJumps, DephasingJumps, GaugeFixingJumps, EffectiveAsepJumps>;

/// Gauge-invariant disorder on chains: random potentials
/// sum h_n tau_n^z + sum h'_n s_n^z with h, h' ~ U[-W, W], and the
/// long-range hopping sum J'_n (tau_n^+ s_n^+ s_{n+1}^+ tau_{n+2}^- + h.c.)
/// with J' ~ U[0, W'].
struct Disorder {
    std::uint64_t seed = 0;
    double W = 0.5;
    double W_prime = 0.5;
    bool potentials = true;
    bool long_range = true;
};

struct ModelSpec {
    LatticeLayout layout;
    HamiltonianSpec hamiltonian = NoHamiltonian{};
    std::vector<JumpFamily> jumps;
    std::optional<Disorder> disorder;

    /// Throws ModelError for negative rates, non-finite couplings or a
    /// Hamiltonian/jump family that does not fit the layout.
    void validate() const;
};

std::string describe(const JumpFamily& family);

SparseOperator build_hamiltonian(const ModelSpec& spec);
/// Wrap-bond term J e^{i phi} tau_L^+ s_{L,1}^+ tau_1^- + h.c. (chain-pbc only).
SparseOperator twist_hamiltonian(const LatticeLayout& layout, double J, double phi);
/// Hamiltonian restricted to the open bonds of the layout (no wrap bond).
SparseOperator open_bond_hamiltonian(const ModelSpec& spec);
/// Disorder terms only (zero operator when the model has no disorder).
SparseOperator disorder_hamiltonian(const ModelSpec& spec);

std::vector<SparseOperator> build_jump_set(const ModelSpec& spec);
/// Jump operators of one family.
std::vector<SparseOperator> build_jumps(const LatticeLayout& layout, const JumpFamily& family);

}  // namespace dqlm
