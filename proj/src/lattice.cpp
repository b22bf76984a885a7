// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/lattice.hpp"

#include "dqlm/error.hpp"

namespace dqlm {

std::string to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::ChainOBC: return "chain-obc";
        case LatticeKind::ChainPBC: return "chain-pbc";
        case LatticeKind::Hierarchical: return "hierarchical";
        case LatticeKind::Square2D: return "square-2d";
    }
    return "unknown";
}

std::string to_string(Species species) {
    switch (species) {
        case Species::Site: return "site";
        case Species::Link: return "link";
        case Species::LinkX: return "link-x";
        case Species::LinkY: return "link-y";
        case Species::Top: return "top";
        case Species::Middle: return "middle";
        case Species::Bottom: return "bottom";
    }
    return "unknown";
}

LatticeLayout build_layout(LatticeKind kind, int lx, int ly) {
    LatticeLayout out;
    out.kind_ = kind;
    out.lx_ = lx;
    out.ly_ = 1;
    auto& slots = out.slots_;
    switch (kind) {
        case LatticeKind::ChainOBC:
        case LatticeKind::ChainPBC: {
            if (lx < 2) throw SizeError("chain layouts need L >= 2, got " + std::to_string(lx));
            for (int n = 0; n < lx; ++n) slots.push_back({Species::Site, n, 0});
            const int links = kind == LatticeKind::ChainPBC ? lx : lx - 1;
            for (int n = 0; n < links; ++n) slots.push_back({Species::Link, n, 0});
            out.gauge_sites_ = static_cast<std::size_t>(lx);
            break;
        }
        case LatticeKind::Hierarchical: {
            if (lx < 3) throw SizeError("hierarchical layout needs L >= 3, got " + std::to_string(lx));
            for (int n = 0; n < lx; ++n) slots.push_back({Species::Top, n, 0});
            for (int m = 0; m + 1 < lx; ++m) slots.push_back({Species::Middle, m, 0});
            for (int j = 1; j + 1 < lx; ++j) slots.push_back({Species::Bottom, j, 0});
            out.gauge_sites_ = static_cast<std::size_t>(lx);
            break;
        }
        case LatticeKind::Square2D: {
            if (lx < 2 || ly < 2)
                throw SizeError("square-2d layout needs Lx, Ly >= 2, got " + std::to_string(lx) + "x" +
                                std::to_string(ly));
            out.ly_ = ly;
            for (int y = 0; y < ly; ++y)
                for (int x = 0; x < lx; ++x) slots.push_back({Species::Site, x, y});
            for (int y = 0; y < ly; ++y)
                for (int x = 0; x + 1 < lx; ++x) slots.push_back({Species::LinkX, x, y});
            for (int y = 0; y + 1 < ly; ++y)
                for (int x = 0; x < lx; ++x) slots.push_back({Species::LinkY, x, y});
            out.gauge_sites_ = static_cast<std::size_t>(lx) * static_cast<std::size_t>(ly);
            break;
        }
    }
    if (slots.size() > kMaxSpins)
        throw SizeError("register of " + std::to_string(slots.size()) + " spins exceeds the supported maximum");
    return out;
}

namespace {

[[noreturn]] void bad_index(const std::string& what) { throw IndexError(what); }

}  // namespace

std::size_t LatticeLayout::site(int n) const {
    if (!is_chain()) bad_index("site(n) requires a chain layout");
    if (n < 0 || n >= lx_) bad_index("site index out of range: " + std::to_string(n));
    return static_cast<std::size_t>(n);
}

std::size_t LatticeLayout::link(int n) const {
    if (!is_chain()) bad_index("link(n) requires a chain layout");
    const int links = periodic() ? lx_ : lx_ - 1;
    if (n < 0 || n >= links) bad_index("link index out of range: " + std::to_string(n));
    return static_cast<std::size_t>(lx_ + n);
}

std::size_t LatticeLayout::num_links() const { return dissipative_slots().size(); }

std::size_t LatticeLayout::site(int x, int y) const {
    if (kind_ != LatticeKind::Square2D) bad_index("site(x, y) requires a square-2d layout");
    if (x < 0 || x >= lx_ || y < 0 || y >= ly_) bad_index("2D site out of range");
    return static_cast<std::size_t>(x + lx_ * y);
}

std::size_t LatticeLayout::link_x(int x, int y) const {
    if (kind_ != LatticeKind::Square2D) bad_index("link_x requires a square-2d layout");
    if (x < 0 || x + 1 >= lx_ || y < 0 || y >= ly_) bad_index("horizontal link out of range");
    return static_cast<std::size_t>(lx_ * ly_ + x + (lx_ - 1) * y);
}

std::size_t LatticeLayout::link_y(int x, int y) const {
    if (kind_ != LatticeKind::Square2D) bad_index("link_y requires a square-2d layout");
    if (x < 0 || x >= lx_ || y < 0 || y + 1 >= ly_) bad_index("vertical link out of range");
    return static_cast<std::size_t>(lx_ * ly_ + (lx_ - 1) * ly_ + x + lx_ * y);
}

std::size_t LatticeLayout::top(int n) const {
    if (kind_ != LatticeKind::Hierarchical) bad_index("top(n) requires a hierarchical layout");
    if (n < 0 || n >= lx_) bad_index("top index out of range");
    return static_cast<std::size_t>(n);
}

std::size_t LatticeLayout::middle(int m) const {
    if (kind_ != LatticeKind::Hierarchical) bad_index("middle(m) requires a hierarchical layout");
    if (m < 0 || m + 1 >= lx_) bad_index("middle index out of range");
    return static_cast<std::size_t>(lx_ + m);
}

std::size_t LatticeLayout::bottom(int j) const {
    if (kind_ != LatticeKind::Hierarchical) bad_index("bottom(j) requires a hierarchical layout");
    if (j < 1 || j + 1 >= lx_) bad_index("bottom index out of range");
    return static_cast<std::size_t>(2 * lx_ - 1 + (j - 1));
}

const SlotInfo& LatticeLayout::slot_info(std::size_t slot) const {
    if (slot >= slots_.size()) bad_index("slot out of range: " + std::to_string(slot));
    return slots_[slot];
}

std::vector<std::size_t> LatticeLayout::dissipative_slots() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        const auto sp = slots_[s].species;
        if (sp == Species::Link || sp == Species::LinkX || sp == Species::LinkY || sp == Species::Bottom)
            out.push_back(s);
    }
    return out;
}

std::vector<std::size_t> LatticeLayout::matter_slots() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        const auto sp = slots_[s].species;
        if (sp == Species::Site || sp == Species::Top) out.push_back(s);
    }
    return out;
}

std::string LatticeLayout::describe() const {
    if (kind_ == LatticeKind::Square2D)
        return to_string(kind_) + "(" + std::to_string(lx_) + "x" + std::to_string(ly_) + ")";
    return to_string(kind_) + "(L=" + std::to_string(lx_) + ")";
}

}  // namespace dqlm
