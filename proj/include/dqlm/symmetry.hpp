// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file symmetry.hpp
 * @brief Gauss-law generators, global charges and symmetry sectors.
 *
 * Every Gauss-law generator is a linear form in the register's z components,
 * G_n = sum_slot c_{n,slot} z_slot with small integer c. Charges are kept in
 * half units (value times two) so sector keys are exact integers.
 *
 * Generators per layout (0-based, absent links contribute nothing):
 *   chain          G_n = tau_n - s_{n,n+1} + s_{n-1,n}       (PBC wraps around)
 *   hierarchical   G_n = sigma_n - G^{ts}_n + G^{ts}_{n-1},
 *                  G^{ts}_m = tau_{m,m+1} - s_{m+1} + s_m
 *   square-2d      G_{x,y} = tau - s_{x+1/2,y} + s_{x-1/2,y} - s_{x,y+1/2} + s_{x,y-1/2}
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dqlm/lattice.hpp"
#include "dqlm/sparse.hpp"

namespace dqlm {

struct GaussTerm {
    std::size_t slot;
    int coef;
};

/// Linear forms of all Gauss-law generators, one entry per gauge site.
std::vector<std::vector<GaussTerm>> gauss_terms(const LatticeLayout& layout);

/// Diagonal operator G_n on the full Hilbert space. Throws IndexError for an invalid site.
SparseOperator gauss_generator(const LatticeLayout& layout, std::size_t n);

/// Per-site Gauss eigenvalues of a basis state, stored times two.
struct GaugeCharges {
    std::vector<int> twice;
    double value(std::size_t n) const { return 0.5 * twice.at(n); }
    friend bool operator==(const GaugeCharges&, const GaugeCharges&) = default;
};

GaugeCharges gauge_charges(const LatticeLayout& layout, State s);
/// Charges with background g_n imposed, i.e. the eigenvalues G_n = -g_n.
std::vector<int> background_gauge_twice(std::span<const double> background);

enum class Charge {
    N,   ///< particle number sum_n (tau_n^z + 1/2)
    D,   ///< centred dipole sum_n tau_n^z (n - (L+1)/2), n 1-based
    Sz,  ///< total link polarisation
    NH,  ///< hierarchical sum_n sigma_n^z
    DH,  ///< hierarchical sum_n n sigma_n^z + sum tau^z
};

std::string to_string(Charge c);
double charge_value(const LatticeLayout& layout, Charge c, State s);
/// Diagonal charge operator. Throws ModelError if the layout has no such charge.
SparseOperator charge_operator(const LatticeLayout& layout, Charge c);

/// Strong charges shared by every jump family of the layout, as integers:
/// {N} on chains and 2D lattices, {2 N_H', 2 D_H'} on the hierarchical ladder.
std::vector<int> strong_charges(const LatticeLayout& layout, State s);

struct SectorConstraints {
    std::optional<std::vector<int>> strong;       ///< values as returned by strong_charges
    std::optional<std::vector<int>> gauge_twice;  ///< fixed 2 G_n for every gauge site
    std::string describe() const;
};

/// Ordered list of basis states meeting a set of constraints.
class HilbertSector {
public:
    HilbertSector() = default;
    HilbertSector(LatticeLayout layout, SectorConstraints constraints, std::vector<State> states);

    const LatticeLayout& layout() const noexcept { return layout_; }
    const SectorConstraints& constraints() const noexcept { return constraints_; }
    std::size_t size() const noexcept { return states_.size(); }
    bool empty() const noexcept { return states_.empty(); }
    const std::vector<State>& states() const noexcept { return states_; }
    State state(std::size_t i) const { return states_.at(i); }
    std::optional<std::size_t> index_of(State s) const;
    const BasisTag& tag() const noexcept { return tag_; }

private:
    LatticeLayout layout_;
    SectorConstraints constraints_;
    std::vector<State> states_;
    std::unordered_map<State, std::size_t> index_;
    BasisTag tag_;
};

/// States satisfying all constraints, in ascending bit-string order. An empty
/// result is not an error.
HilbertSector enumerate_sector(const LatticeLayout& layout, const SectorConstraints& constraints);

/// Constraints on ket/bra pairs |ket><bra| of the double space.
struct DoubleConstraints {
    /// 2 (G_n(ket) - G_n(bra)); all zeros is the weak gauge sector.
    std::optional<std::vector<int>> gauge_shift_twice;
    std::optional<std::vector<int>> strong_ket;
    std::optional<std::vector<int>> strong_bra;
    std::string describe() const;

    /// Weak gauge sector with equal ket and bra strong charges.
    static DoubleConstraints weak_gauge(const LatticeLayout& layout, std::vector<int> strong);
    /// Only the strong charges of ket and bra are fixed (no gauge constraint).
    static DoubleConstraints strong_only(std::vector<int> strong);
};

/// Basis of the (possibly restricted) double space. Pairs are ordered by
/// (ket, bra) ascending; the full space uses the row-major index
/// ket * dim + bra without materialising the pair list.
class DoubleSector {
public:
    struct Block {
        std::vector<int> ket_gauge_twice;  ///< empty when no gauge constraint applies
        std::size_t ket_dim = 0;
        std::size_t bra_dim = 0;
    };

    DoubleSector() = default;
    static DoubleSector full(const LatticeLayout& layout);
    DoubleSector(LatticeLayout layout, DoubleConstraints constraints, std::vector<std::pair<State, State>> pairs,
                 std::vector<Block> blocks);

    const LatticeLayout& layout() const noexcept { return layout_; }
    const DoubleConstraints& constraints() const noexcept { return constraints_; }
    bool is_full() const noexcept { return full_; }
    std::size_t size() const noexcept;
    bool empty() const noexcept { return size() == 0; }
    std::pair<State, State> pair(std::size_t i) const;
    std::optional<std::size_t> index_of(State ket, State bra) const;
    const BasisTag& tag() const noexcept { return tag_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    /// Distinct ket states (ascending).
    std::vector<State> ket_states() const;

private:
    LatticeLayout layout_;
    DoubleConstraints constraints_;
    bool full_ = false;
    std::vector<std::pair<State, State>> pairs_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::vector<Block> blocks_;
    BasisTag tag_;
};

DoubleSector enumerate_double_sector(const LatticeLayout& layout, const DoubleConstraints& constraints);

/// Partition of the full double space into blocks of fixed gauge shift and
/// fixed ket/bra strong charges; every Liouvillian in scope is block diagonal
/// in it. With `use_gauge = false` only the strong charges label the blocks.
std::vector<DoubleSector> weak_symmetry_blocks(const LatticeLayout& layout, bool use_gauge = true);

/// Number of distinct gauge-charge configurations realised by basis states.
std::size_t count_gauge_sectors(const LatticeLayout& layout);

/// Restriction of a full-space operator to a sector. With `block_diagonal`,
/// throws LeakageError when ||(1 - P) A P|| exceeds `leak_tol`.
SparseOperator project_operator(const SparseOperator& a, const HilbertSector& sector, bool block_diagonal = true,
                                double leak_tol = 1e-12);

}  // namespace dqlm
