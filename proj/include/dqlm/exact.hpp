// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file exact.hpp
 * @brief Closed-form steady states and eigenoperators built from the Gauss-law
 *        generators, and exact marginals of the resulting diagonal ensembles.
 *
 * Every ensemble here is a diagonal operator of the form
 *   prod_slot exp(a_slot z_slot) * sign(state),
 * obtained by expanding exp(sum_n c_n G_n) into per-spin factors. Complex
 * coefficients (from beta = -1) only contribute signs once a global phase is
 * removed, so the weights are stored as real log-magnitudes plus signs.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqlm/lattice.hpp"
#include "dqlm/models.hpp"
#include "dqlm/sparse.hpp"
#include "dqlm/symmetry.hpp"

namespace dqlm {

struct DiagonalEnsemble {
    LatticeLayout layout;
    /// Real per-slot log-weight a_slot multiplying z_slot = +-1/2.
    std::vector<double> log_weight;
    /// Sign pattern: the state's sign is (-1)^(number of up slots with flip set),
    /// after the global phase of the all-down state is removed.
    std::vector<std::uint8_t> flip;
    /// Optional restriction to a strong-charge sector (values of strong_charges()).
    std::optional<std::vector<int>> strong;

    bool signed_weights() const;
    /// Entry for basis state s, without normalisation (zero outside `strong`).
    double weight(State s) const;
    /// Trace-normalised diagonal operator on the full space. Throws
    /// EmptySectorError when the sector is empty or the trace vanishes.
    SparseOperator to_operator() const;
    /// Unnormalised diagonal operator (for signed eigenoperators).
    SparseOperator to_operator_unnormalised() const;
};

/// Ensemble exp(sum_n c_n G_n) for generator coefficients c (one per gauge site).
/// c_n = x + i pi m is passed as (log_coef = x, pi_multiple = m) with integer m.
DiagonalEnsemble ensemble_from_gauss(const LatticeLayout& layout, const std::vector<double>& log_coef,
                                     const std::vector<int>& pi_multiple = {});

/// Steady state exp[sum_n (ln alpha + n ln beta) G_n] (n 1-based) on chain-obc,
/// exp[sum (ln alpha' + n ln alpha + n(n-1)/2 ln beta) G^{H'}_n] on the
/// hierarchical ladder and exp[sum (ln alpha + x ln beta + y ln beta') G_{x,y}]
/// on square-2d (x, y 1-based). `alpha_prime` is only read on the ladder and
/// `beta_prime` only on the square lattice. Throws ModelError for chain-pbc or
/// non-positive parameters.
DiagonalEnsemble exact_steady_state(const LatticeLayout& layout, double alpha, double beta, double beta_prime = 1.0,
                                    double alpha_prime = 1.0);

struct ExactEigenoperator {
    DiagonalEnsemble ensemble;
    double lambda = 0.0;
    int K = 0;
};

/// Eigenoperator exp[sum_n (ln alpha + sum_{i<n} ln beta_{k_i}) G_n] with
/// beta_0 = gamma_u / gamma_d and beta_1 = -1; lambda = -2 (gamma_u + gamma_d) K.
/// `k` has L-1 entries in {0, 1}. Chain-obc only.
ExactEigenoperator exact_eigenoperator(const LatticeLayout& layout, const std::vector<int>& k, double alpha,
                                       double gamma_u, double gamma_d);

/// Diagonal similarity transformation T = exp(-sum_n c_n G_n) whose inverse is
/// the steady state of exact_steady_state (same parameters).
SparseOperator similarity_transform(const LatticeLayout& layout, double alpha, double beta, double beta_prime = 1.0,
                                    double alpha_prime = 1.0);
/// Bit-string transformation T_k, the inverse of the eigenoperator for k.
SparseOperator similarity_transform(const LatticeLayout& layout, const std::vector<int>& k, double alpha,
                                    double gamma_u, double gamma_d);

/// Link transformation T_s = prod exp(-ln beta s^z) (vertical 2D links use beta').
SparseOperator link_transform(const LatticeLayout& layout, double beta, double beta_prime = 1.0);

/// Identity restricted to a strong-charge sector.
DiagonalEnsemble identity_on_strong_sector(const LatticeLayout& layout, std::vector<int> strong);
/// One identity-on-sector operator per gauge-charge configuration realised by a basis state.
std::vector<SparseOperator> dephasing_steady_states(const LatticeLayout& layout);

struct Marginals {
    /// Expectation of z for every register slot.
    std::vector<double> z;
    double log_partition = 0.0;
};

/// Exact single-slot marginals <z_slot> of a positive ensemble, summing over
/// the strong-charge constraint by a forward-backward pass over the slots
/// that tracks partial charge sums in half units. Throws EmptySectorError for
/// infeasible sectors and ModelError for signed ensembles.
Marginals ensemble_marginals(const DiagonalEnsemble& ens);

/// Same quantity by explicit enumeration over the full basis (oracle path).
Marginals ensemble_marginals_enumerated(const DiagonalEnsemble& ens);

}  // namespace dqlm
