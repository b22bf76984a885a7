// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dqlm/error.hpp"
#include "dqlm/spin.hpp"

namespace dqlm {

namespace {

void add_term(std::vector<GaussTerm>& form, std::size_t slot, int coef) {
    for (auto& t : form)
        if (t.slot == slot) {
            t.coef += coef;
            return;
        }
    form.push_back({slot, coef});
}

void prune(std::vector<GaussTerm>& form) {
    std::erase_if(form, [](const GaussTerm& t) { return t.coef == 0; });
    std::sort(form.begin(), form.end(), [](const GaussTerm& a, const GaussTerm& b) { return a.slot < b.slot; });
}

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::uint64_t pair_key(State ket, State bra, std::size_t nspins) { return (ket << nspins) | bra; }

}  // namespace

std::vector<std::vector<GaussTerm>> gauss_terms(const LatticeLayout& layout) {
    const int L = layout.length();
    std::vector<std::vector<GaussTerm>> forms(layout.num_gauge_sites());
    switch (layout.kind()) {
        case LatticeKind::ChainOBC:
        case LatticeKind::ChainPBC: {
            const bool pbc = layout.periodic();
            for (int n = 0; n < L; ++n) {
                auto& f = forms[static_cast<std::size_t>(n)];
                add_term(f, layout.site(n), 1);
                if (pbc || n + 1 < L) add_term(f, layout.link(n), -1);
                if (n > 0)
                    add_term(f, layout.link(n - 1), 1);
                else if (pbc)
                    add_term(f, layout.link(L - 1), 1);
            }
            break;
        }
        case LatticeKind::Hierarchical: {
            // G^{ts}_m for the middle spin between sigma_m and sigma_{m+1}.
            std::vector<std::vector<GaussTerm>> mid(static_cast<std::size_t>(L - 1));
            for (int m = 0; m + 1 < L; ++m) {
                auto& f = mid[static_cast<std::size_t>(m)];
                add_term(f, layout.middle(m), 1);
                if (m + 1 <= L - 2) add_term(f, layout.bottom(m + 1), -1);
                if (m >= 1) add_term(f, layout.bottom(m), 1);
            }
            for (int n = 0; n < L; ++n) {
                auto& f = forms[static_cast<std::size_t>(n)];
                add_term(f, layout.top(n), 1);
                if (n + 1 < L)
                    for (const auto& t : mid[static_cast<std::size_t>(n)]) add_term(f, t.slot, -t.coef);
                if (n > 0)
                    for (const auto& t : mid[static_cast<std::size_t>(n - 1)]) add_term(f, t.slot, t.coef);
            }
            break;
        }
        case LatticeKind::Square2D: {
            const int W = layout.width();
            for (int y = 0; y < W; ++y)
                for (int x = 0; x < L; ++x) {
                    auto& f = forms[layout.site(x, y)];
                    add_term(f, layout.site(x, y), 1);
                    if (x + 1 < L) add_term(f, layout.link_x(x, y), -1);
                    if (x > 0) add_term(f, layout.link_x(x - 1, y), 1);
                    if (y + 1 < W) add_term(f, layout.link_y(x, y), -1);
                    if (y > 0) add_term(f, layout.link_y(x, y - 1), 1);
                }
            break;
        }
    }
    for (auto& f : forms) prune(f);
    return forms;
}

SparseOperator gauss_generator(const LatticeLayout& layout, std::size_t n) {
    if (n >= layout.num_gauge_sites())
        throw IndexError("gauge site " + std::to_string(n) + " out of range for " + layout.describe());
    const auto form = gauss_terms(layout)[n];
    return diagonal_operator(layout, [&](State s) {
        int twice = 0;
        for (const auto& t : form) twice += t.coef * twice_z(s, t.slot);
        return cplx(0.5 * twice);
    });
}

namespace {

GaugeCharges charges_from_forms(const std::vector<std::vector<GaussTerm>>& forms, State s) {
    GaugeCharges g;
    g.twice.reserve(forms.size());
    for (const auto& f : forms) {
        int twice = 0;
        for (const auto& t : f) twice += t.coef * twice_z(s, t.slot);
        g.twice.push_back(twice);
    }
    return g;
}

}  // namespace

GaugeCharges gauge_charges(const LatticeLayout& layout, State s) { return charges_from_forms(gauss_terms(layout), s); }

std::vector<int> background_gauge_twice(std::span<const double> background) {
    std::vector<int> out;
    out.reserve(background.size());
    for (double g : background) {
        const double twice = -2.0 * g;
        if (std::abs(twice - std::round(twice)) > 1e-12)
            throw ModelError("background charges must be multiples of 1/2");
        out.push_back(static_cast<int>(std::lround(twice)));
    }
    return out;
}

std::string to_string(Charge c) {
    switch (c) {
        case Charge::N: return "N";
        case Charge::D: return "D";
        case Charge::Sz: return "Sz";
        case Charge::NH: return "N_H";
        case Charge::DH: return "D_H";
    }
    return "?";
}

double charge_value(const LatticeLayout& layout, Charge c, State s) {
    const bool chain = layout.is_chain();
    const bool hier = layout.kind() == LatticeKind::Hierarchical;
    const bool square = layout.kind() == LatticeKind::Square2D;
    const int L = layout.length();
    switch (c) {
        case Charge::N: {
            if (!chain && !square) break;
            double n = 0;
            for (auto slot : layout.matter_slots()) n += bit(s, slot) ? 1.0 : 0.0;
            return n;
        }
        case Charge::D: {
            if (!chain) break;
            double d = 0;
            for (int n = 0; n < L; ++n) d += 0.5 * twice_z(s, layout.site(n)) * ((n + 1) - 0.5 * (L + 1));
            return d;
        }
        case Charge::Sz: {
            if (!chain && !square) break;
            double z = 0;
            for (auto slot : layout.dissipative_slots()) z += 0.5 * twice_z(s, slot);
            return z;
        }
        case Charge::NH: {
            if (!hier) break;
            double z = 0;
            for (int n = 0; n < L; ++n) z += 0.5 * twice_z(s, layout.top(n));
            return z;
        }
        case Charge::DH: {
            if (!hier) break;
            double d = 0;
            for (int n = 0; n < L; ++n) d += 0.5 * (n + 1) * twice_z(s, layout.top(n));
            for (int m = 0; m + 1 < L; ++m) d += 0.5 * twice_z(s, layout.middle(m));
            return d;
        }
    }
    throw ModelError("charge " + to_string(c) + " is not defined on " + layout.describe());
}

SparseOperator charge_operator(const LatticeLayout& layout, Charge c) {
    charge_value(layout, c, 0);  // validates the combination
    return diagonal_operator(layout, [&](State s) { return cplx(charge_value(layout, c, s)); });
}

std::vector<int> strong_charges(const LatticeLayout& layout, State s) {
    if (layout.kind() == LatticeKind::Hierarchical) {
        const int L = layout.length();
        int nh = 0;
        int dh = 0;
        for (int n = 0; n < L; ++n) {
            nh += twice_z(s, layout.top(n));
            dh += (n + 1) * twice_z(s, layout.top(n));
        }
        for (int m = 0; m + 1 < L; ++m) dh += twice_z(s, layout.middle(m));
        return {nh, dh};
    }
    int n = 0;
    for (auto slot : layout.matter_slots()) n += bit(s, slot) ? 1 : 0;
    return {n};
}

std::string SectorConstraints::describe() const {
    std::string out;
    if (strong) out += "strong=" + join(*strong);
    if (gauge_twice) out += std::string(out.empty() ? "" : ";") + "2G=" + join(*gauge_twice);
    return out.empty() ? "unconstrained" : out;
}

HilbertSector::HilbertSector(LatticeLayout layout, SectorConstraints constraints, std::vector<State> states)
    : layout_(std::move(layout)), constraints_(std::move(constraints)), states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    index_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
    tag_ = {"sector:" + layout_.describe() + ":" + constraints_.describe()};
}

std::optional<std::size_t> HilbertSector::index_of(State s) const {
    const auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

HilbertSector enumerate_sector(const LatticeLayout& layout, const SectorConstraints& constraints) {
    if (constraints.gauge_twice && constraints.gauge_twice->size() != layout.num_gauge_sites())
        throw DimensionMismatch("gauge constraint length does not match the number of gauge sites");
    const auto forms = gauss_terms(layout);
    std::vector<State> states;
    const State dim = layout.hilbert_dim();
    for (State s = 0; s < dim; ++s) {
        if (constraints.strong && strong_charges(layout, s) != *constraints.strong) continue;
        if (constraints.gauge_twice) {
            bool ok = true;
            for (std::size_t n = 0; n < forms.size() && ok; ++n) {
                int twice = 0;
                for (const auto& t : forms[n]) twice += t.coef * twice_z(s, t.slot);
                ok = twice == (*constraints.gauge_twice)[n];
            }
            if (!ok) continue;
        }
        states.push_back(s);
    }
    return HilbertSector(layout, constraints, std::move(states));
}

std::string DoubleConstraints::describe() const {
    std::string out;
    if (gauge_shift_twice) out += "2dG=" + join(*gauge_shift_twice);
    if (strong_ket) out += std::string(out.empty() ? "" : ";") + "ket=" + join(*strong_ket);
    if (strong_bra) out += std::string(out.empty() ? "" : ";") + "bra=" + join(*strong_bra);
    return out.empty() ? "unconstrained" : out;
}

DoubleConstraints DoubleConstraints::weak_gauge(const LatticeLayout& layout, std::vector<int> strong) {
    DoubleConstraints c;
    c.gauge_shift_twice = std::vector<int>(layout.num_gauge_sites(), 0);
    c.strong_ket = strong;
    c.strong_bra = std::move(strong);
    return c;
}

DoubleConstraints DoubleConstraints::strong_only(std::vector<int> strong) {
    DoubleConstraints c;
    c.strong_ket = strong;
    c.strong_bra = std::move(strong);
    return c;
}

DoubleSector DoubleSector::full(const LatticeLayout& layout) {
    if (2 * layout.total_spins() > 62) throw SizeError("double space too large to index");
    DoubleSector d;
    d.layout_ = layout;
    d.full_ = true;
    d.tag_ = {"double-full:" + layout.describe()};
    const std::size_t dim = layout.hilbert_dim();
    d.blocks_.push_back({{}, dim, dim});
    return d;
}

DoubleSector::DoubleSector(LatticeLayout layout, DoubleConstraints constraints,
                           std::vector<std::pair<State, State>> pairs, std::vector<Block> blocks)
    : layout_(std::move(layout)), constraints_(std::move(constraints)), pairs_(std::move(pairs)),
      blocks_(std::move(blocks)) {
    if (2 * layout_.total_spins() > 62) throw SizeError("double space too large to index");
    std::sort(pairs_.begin(), pairs_.end());
    index_.reserve(pairs_.size());
    const auto n = layout_.total_spins();
    for (std::size_t i = 0; i < pairs_.size(); ++i) index_.emplace(pair_key(pairs_[i].first, pairs_[i].second, n), i);
    tag_ = {"double:" + layout_.describe() + ":" + constraints_.describe()};
}

std::size_t DoubleSector::size() const noexcept {
    if (full_) return layout_.hilbert_dim() * layout_.hilbert_dim();
    return pairs_.size();
}

std::pair<State, State> DoubleSector::pair(std::size_t i) const {
    if (full_) {
        const std::size_t dim = layout_.hilbert_dim();
        if (i >= dim * dim) throw IndexError("double-space index out of range");
        return {static_cast<State>(i / dim), static_cast<State>(i % dim)};
    }
    return pairs_.at(i);
}

std::optional<std::size_t> DoubleSector::index_of(State ket, State bra) const {
    if (full_) {
        const std::size_t dim = layout_.hilbert_dim();
        if (ket >= dim || bra >= dim) return std::nullopt;
        return static_cast<std::size_t>(ket) * dim + static_cast<std::size_t>(bra);
    }
    const auto it = index_.find(pair_key(ket, bra, layout_.total_spins()));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<State> DoubleSector::ket_states() const {
    if (full_) {
        std::vector<State> out(layout_.hilbert_dim());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
        return out;
    }
    std::set<State> kets;
    for (const auto& p : pairs_) kets.insert(p.first);
    return {kets.begin(), kets.end()};
}

namespace {

struct GroupKey {
    std::vector<int> gauge;
    std::vector<int> strong;
    auto operator<=>(const GroupKey&) const = default;
};

std::map<GroupKey, std::vector<State>> group_states(const LatticeLayout& layout, bool use_gauge) {
    std::map<GroupKey, std::vector<State>> groups;
    const auto forms = gauss_terms(layout);
    const State dim = layout.hilbert_dim();
    for (State s = 0; s < dim; ++s) {
        GroupKey k;
        if (use_gauge) k.gauge = charges_from_forms(forms, s).twice;
        k.strong = strong_charges(layout, s);
        groups[k].push_back(s);
    }
    return groups;
}

}  // namespace

DoubleSector enumerate_double_sector(const LatticeLayout& layout, const DoubleConstraints& constraints) {
    if (constraints.gauge_shift_twice && constraints.gauge_shift_twice->size() != layout.num_gauge_sites())
        throw DimensionMismatch("gauge shift length does not match the number of gauge sites");
    const bool use_gauge = constraints.gauge_shift_twice.has_value();
    const auto groups = group_states(layout, use_gauge);

    std::vector<std::pair<State, State>> pairs;
    std::vector<DoubleSector::Block> blocks;
    for (const auto& [ket_key, kets] : groups) {
        if (constraints.strong_ket && ket_key.strong != *constraints.strong_ket) continue;
        for (const auto& [bra_key, bras] : groups) {
            if (constraints.strong_bra && bra_key.strong != *constraints.strong_bra) continue;
            if (use_gauge) {
                bool match = true;
                for (std::size_t n = 0; n < ket_key.gauge.size() && match; ++n)
                    match = ket_key.gauge[n] - bra_key.gauge[n] == (*constraints.gauge_shift_twice)[n];
                if (!match) continue;
            }
            blocks.push_back({ket_key.gauge, kets.size(), bras.size()});
            for (State k : kets)
                for (State b : bras) pairs.emplace_back(k, b);
        }
    }
    return DoubleSector(layout, constraints, std::move(pairs), std::move(blocks));
}

std::vector<DoubleSector> weak_symmetry_blocks(const LatticeLayout& layout, bool use_gauge) {
    const auto groups = group_states(layout, use_gauge);
    struct Acc {
        std::vector<std::pair<State, State>> pairs;
        std::vector<DoubleSector::Block> blocks;
    };
    std::map<std::tuple<std::vector<int>, std::vector<int>, std::vector<int>>, Acc> acc;
    for (const auto& [ket_key, kets] : groups)
        for (const auto& [bra_key, bras] : groups) {
            std::vector<int> shift;
            if (use_gauge) {
                shift.resize(ket_key.gauge.size());
                for (std::size_t n = 0; n < shift.size(); ++n) shift[n] = ket_key.gauge[n] - bra_key.gauge[n];
            }
            auto& a = acc[{shift, ket_key.strong, bra_key.strong}];
            a.blocks.push_back({ket_key.gauge, kets.size(), bras.size()});
            for (State k : kets)
                for (State b : bras) a.pairs.emplace_back(k, b);
        }
    std::vector<DoubleSector> out;
    out.reserve(acc.size());
    for (auto& [key, a] : acc) {
        DoubleConstraints c;
        if (use_gauge) c.gauge_shift_twice = std::get<0>(key);
        c.strong_ket = std::get<1>(key);
        c.strong_bra = std::get<2>(key);
        out.emplace_back(layout, std::move(c), std::move(a.pairs), std::move(a.blocks));
    }
    return out;
}

std::size_t count_gauge_sectors(const LatticeLayout& layout) {
    std::set<std::vector<int>> seen;
    const auto forms = gauss_terms(layout);
    const State dim = layout.hilbert_dim();
    for (State s = 0; s < dim; ++s) seen.insert(charges_from_forms(forms, s).twice);
    return seen.size();
}

SparseOperator project_operator(const SparseOperator& a, const HilbertSector& sector, bool block_diagonal,
                                double leak_tol) {
    if (a.dim() != sector.layout().hilbert_dim())
        throw DimensionMismatch("project_operator: operator is not defined on the sector's parent space");
    // Leakage is measured column-wise: A applied to sector states.
    const auto at = transpose(a);
    const auto rp = at.row_ptr();
    const auto ci = at.col_index();
    const auto va = at.values();
    std::vector<Triplet> t;
    double leak2 = 0.0;
    for (std::size_t j = 0; j < sector.size(); ++j) {
        const State col = sector.state(j);
        for (std::size_t k = rp[col]; k < rp[col + 1]; ++k) {
            const auto row = sector.index_of(ci[k]);
            if (row)
                t.push_back({*row, j, va[k]});
            else
                leak2 += std::norm(va[k]);
        }
    }
    const double leak = std::sqrt(leak2);
    if (block_diagonal && leak > leak_tol)
        throw LeakageError("operator couples sector " + sector.tag().label + " to its complement (leak " +
                               std::to_string(leak) + ")",
                           leak);
    return SparseOperator::from_triplets(sector.size(), std::move(t), sector.tag());
}

}  // namespace dqlm
