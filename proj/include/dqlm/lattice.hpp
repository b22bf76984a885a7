// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file lattice.hpp
 * @brief Lattice geometries and the global spin register.
 *
 * Every spin-1/2 degree of freedom (matter site or gauge link) owns one
 * register slot. A computational basis state is a bit string over the slots,
 * slot 0 being the least significant bit; bit 1 means spin up (occupied site,
 * tau^z = +1/2).
 *
 * Slot layout per kind (all indices 0-based):
 *   chain-obc     sites n -> n, links (n,n+1) -> L + n               (2L-1 spins)
 *   chain-pbc     as chain-obc, plus the wrap link (L-1,0) -> 2L-1     (2L spins)
 *   hierarchical  top sigma_n -> n, middle tau_{m,m+1} -> L + m,
 *                 bottom s_j (j = 1..L-2) -> 2L - 1 + (j - 1)          (3L-3 spins)
 *   square-2d     site (x,y) -> x + Lx*y, horizontal link (x+1/2,y) after
 *                 the sites, vertical links (x,y+1/2) last
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dqlm {

/// Computational basis state: one bit per register slot.
using State = std::uint64_t;

/// Largest register handled by the bit-string representation.
inline constexpr std::size_t kMaxSpins = 62;

enum class LatticeKind { ChainOBC, ChainPBC, Hierarchical, Square2D };

/// Physical species carried by a register slot.
enum class Species {
    Site,    ///< matter spin tau_n on a chain or square lattice site
    Link,    ///< gauge spin s_{n,n+1} on a chain link
    LinkX,   ///< horizontal 2D link (x+1/2, y)
    LinkY,   ///< vertical 2D link (x, y+1/2)
    Top,     ///< hierarchical sigma_n
    Middle,  ///< hierarchical tau_{n,n+1}
    Bottom,  ///< hierarchical s_n
};

struct SlotInfo {
    Species species;
    int i = 0;  ///< position along the chain, or x
    int j = 0;  ///< y for 2D slots, unused otherwise
};

std::string to_string(LatticeKind kind);
std::string to_string(Species species);

class LatticeLayout {
public:
    LatticeKind kind() const noexcept { return kind_; }
    /// Number of sites along x (the chain length L for 1D and hierarchical).
    int length() const noexcept { return lx_; }
    /// Number of sites along y (1 unless square-2d).
    int width() const noexcept { return ly_; }
    std::size_t total_spins() const noexcept { return slots_.size(); }
    std::size_t hilbert_dim() const { return std::size_t{1} << total_spins(); }

    /// Number of gauge sites: one Gauss-law generator per gauge site.
    std::size_t num_gauge_sites() const noexcept { return gauge_sites_; }

    bool is_chain() const noexcept {
        return kind_ == LatticeKind::ChainOBC || kind_ == LatticeKind::ChainPBC;
    }
    bool periodic() const noexcept { return kind_ == LatticeKind::ChainPBC; }

    // chain
    std::size_t site(int n) const;
    std::size_t link(int n) const;  ///< link (n, n+1); n = L-1 is the PBC wrap link
    std::size_t num_links() const;  ///< chain links, 2D links (x then y) or bottom spins

    // square-2d
    std::size_t site(int x, int y) const;
    std::size_t link_x(int x, int y) const;
    std::size_t link_y(int x, int y) const;

    // hierarchical
    std::size_t top(int n) const;
    std::size_t middle(int m) const;
    std::size_t bottom(int j) const;  ///< j in [1, L-2]

    const SlotInfo& slot_info(std::size_t slot) const;
    const std::vector<SlotInfo>& slots() const noexcept { return slots_; }

    /// Slots acted on by the link dissipators (chain/2D links, hierarchical bottom layer).
    std::vector<std::size_t> dissipative_slots() const;
    /// Matter slots counted by the particle number (chain/2D sites, hierarchical top).
    std::vector<std::size_t> matter_slots() const;

    /// Short human-readable descriptor, e.g. "chain-obc(L=7)".
    std::string describe() const;

    friend LatticeLayout build_layout(LatticeKind kind, int lx, int ly);
    friend bool operator==(const LatticeLayout& a, const LatticeLayout& b) {
        return a.kind_ == b.kind_ && a.lx_ == b.lx_ && a.ly_ == b.ly_;
    }

private:
    LatticeKind kind_ = LatticeKind::ChainOBC;
    int lx_ = 0;
    int ly_ = 1;
    std::size_t gauge_sites_ = 0;
    std::vector<SlotInfo> slots_;
};

/// Builds a layout. `ly` is only read for square-2d.
/// Throws SizeError when L < 2 (hierarchical: L < 3; square-2d: Lx or Ly < 2)
/// or when the register would exceed kMaxSpins.
LatticeLayout build_layout(LatticeKind kind, int lx, int ly = 1);

inline bool bit(State s, std::size_t slot) { return (s >> slot) & 1U; }
/// z-eigenvalue times two: +1 for up, -1 for down.
inline int twice_z(State s, std::size_t slot) { return bit(s, slot) ? 1 : -1; }

}  // namespace dqlm
