// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "dqlm/error.hpp"
#include "dqlm/spin.hpp"

namespace dqlm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ModelError(std::string(name) + " must be finite and > 0");
}

double log_weight_of(const DiagonalEnsemble& e, State s) {
    double w = 0.0;
    for (std::size_t slot = 0; slot < e.log_weight.size(); ++slot) w += 0.5 * twice_z(s, slot) * e.log_weight[slot];
    return w;
}

bool in_sector(const DiagonalEnsemble& e, State s) { return !e.strong || strong_charges(e.layout, s) == *e.strong; }

int sign_of(const DiagonalEnsemble& e, State s) {
    int parity = 0;
    for (std::size_t slot = 0; slot < e.flip.size(); ++slot) parity ^= (e.flip[slot] & bit(s, slot));
    return parity ? -1 : 1;
}

SparseOperator diagonal_from_ensemble(const DiagonalEnsemble& e, bool normalise) {
    const State dim = e.layout.hilbert_dim();
    std::vector<double> lw(dim, kNegInf);
    double top = kNegInf;
    for (State s = 0; s < dim; ++s)
        if (in_sector(e, s)) {
            lw[s] = log_weight_of(e, s);
            top = std::max(top, lw[s]);
        }
    if (top == kNegInf) throw EmptySectorError("ensemble sector contains no basis state");
    std::vector<cplx> d(dim, 0.0);
    double trace = 0.0;
    for (State s = 0; s < dim; ++s) {
        if (lw[s] == kNegInf) continue;
        const double w = sign_of(e, s) * std::exp(normalise ? lw[s] - top : lw[s]);
        d[s] = w;
        trace += w;
    }
    if (normalise) {
        if (std::abs(trace) == 0.0) throw EmptySectorError("ensemble has vanishing trace");
        for (auto& x : d) x /= trace;
    }
    return SparseOperator::diagonal(d, full_tag(e.layout));
}

// Strong charges are affine in the bits: q(s) = q(0) + sum_slot delta_slot bit_slot.
struct ChargeModel {
    std::vector<int> base;
    std::vector<std::vector<int>> delta;
};

ChargeModel charge_model(const LatticeLayout& layout) {
    ChargeModel m;
    m.base = strong_charges(layout, 0);
    for (std::size_t slot = 0; slot < layout.total_spins(); ++slot) {
        auto q = strong_charges(layout, State{1} << slot);
        for (std::size_t c = 0; c < q.size(); ++c) q[c] -= m.base[c];
        m.delta.push_back(std::move(q));
    }
    return m;
}

// Charge vectors have at most two components of modest range; pack them.
std::int64_t pack(const std::vector<int>& q) {
    std::int64_t key = 0;
    for (int v : q) key = key * 100003 + (v + 50000);
    return key;
}

std::vector<int> shifted(const std::vector<int>& q, const std::vector<int>& d, int sign) {
    std::vector<int> out(q);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * d[i];
    return out;
}

using LogMap = std::unordered_map<std::int64_t, std::pair<std::vector<int>, double>>;

void accumulate(LogMap& m, const std::vector<int>& q, double lw) {
    auto [it, inserted] = m.try_emplace(pack(q), q, lw);
    if (!inserted) it->second.second = log_add(it->second.second, lw);
}

double lookup(const LogMap& m, const std::vector<int>& q) {
    const auto it = m.find(pack(q));
    return it == m.end() ? kNegInf : it->second.second;
}

}  // namespace

bool DiagonalEnsemble::signed_weights() const {
    return std::any_of(flip.begin(), flip.end(), [](std::uint8_t f) { return f != 0; });
}

double DiagonalEnsemble::weight(State s) const {
    if (!in_sector(*this, s)) return 0.0;
    return sign_of(*this, s) * std::exp(log_weight_of(*this, s));
}

SparseOperator DiagonalEnsemble::to_operator() const { return diagonal_from_ensemble(*this, true); }

SparseOperator DiagonalEnsemble::to_operator_unnormalised() const { return diagonal_from_ensemble(*this, false); }

DiagonalEnsemble ensemble_from_gauss(const LatticeLayout& layout, const std::vector<double>& log_coef,
                                     const std::vector<int>& pi_multiple) {
    const auto forms = gauss_terms(layout);
    if (log_coef.size() != forms.size()) throw DimensionMismatch("one coefficient per gauge site expected");
    if (!pi_multiple.empty() && pi_multiple.size() != forms.size())
        throw DimensionMismatch("one phase multiple per gauge site expected");
    DiagonalEnsemble e;
    e.layout = layout;
    e.log_weight.assign(layout.total_spins(), 0.0);
    std::vector<int> m(layout.total_spins(), 0);
    for (std::size_t n = 0; n < forms.size(); ++n)
        for (const auto& t : forms[n]) {
            e.log_weight[t.slot] += t.coef * log_coef[n];
            if (!pi_multiple.empty()) m[t.slot] += t.coef * pi_multiple[n];
        }
    // exp(i pi m z) relative to z = -1/2 is (-1)^m on an up spin.
    e.flip.resize(m.size());
    for (std::size_t slot = 0; slot < m.size(); ++slot) e.flip[slot] = static_cast<std::uint8_t>(std::abs(m[slot]) % 2);
    return e;
}

DiagonalEnsemble exact_steady_state(const LatticeLayout& layout, double alpha, double beta, double beta_prime,
                                    double alpha_prime) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    require_positive(beta_prime, "beta'");
    require_positive(alpha_prime, "alpha'");
    const double la = std::log(alpha);
    const double lb = std::log(beta);
    std::vector<double> c(layout.num_gauge_sites());
    switch (layout.kind()) {
        case LatticeKind::ChainPBC:
            throw ModelError("the exact steady state is only defined with open boundaries");
        case LatticeKind::ChainOBC:
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = la + static_cast<double>(i + 1) * lb;
            break;
        case LatticeKind::Hierarchical:
            for (std::size_t i = 0; i < c.size(); ++i) {
                const double n = static_cast<double>(i + 1);
                c[i] = std::log(alpha_prime) + n * la + 0.5 * n * (n - 1.0) * lb;
            }
            break;
        case LatticeKind::Square2D: {
            const double lbp = std::log(beta_prime);
            for (int y = 0; y < layout.width(); ++y)
                for (int x = 0; x < layout.length(); ++x) c[layout.site(x, y)] = la + (x + 1) * lb + (y + 1) * lbp;
            break;
        }
    }
    return ensemble_from_gauss(layout, c);
}

namespace {

void bit_string_coefficients(const LatticeLayout& layout, const std::vector<int>& k, double alpha, double gamma_u,
                             double gamma_d, std::vector<double>& c, std::vector<int>& m) {
    if (layout.kind() != LatticeKind::ChainOBC) throw ModelError("exact eigenoperators are defined on chain-obc");
    const int L = layout.length();
    if (k.size() != static_cast<std::size_t>(L - 1))
        throw DimensionMismatch("bit string must have L-1 = " + std::to_string(L - 1) + " entries");
    for (int b : k)
        if (b != 0 && b != 1) throw ModelError("bit string entries must be 0 or 1");
    require_positive(alpha, "alpha");
    require_positive(gamma_u, "gamma_u");
    require_positive(gamma_d, "gamma_d");
    const double lb0 = std::log(gamma_u / gamma_d);
    c.assign(static_cast<std::size_t>(L), std::log(alpha));
    m.assign(static_cast<std::size_t>(L), 0);
    for (int n = 1; n < L; ++n) {
        c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n - 1)] + (k[static_cast<std::size_t>(n - 1)] ? 0.0 : lb0);
        m[static_cast<std::size_t>(n)] = m[static_cast<std::size_t>(n - 1)] + k[static_cast<std::size_t>(n - 1)];
    }
}

}  // namespace

ExactEigenoperator exact_eigenoperator(const LatticeLayout& layout, const std::vector<int>& k, double alpha,
                                       double gamma_u, double gamma_d) {
    std::vector<double> c;
    std::vector<int> m;
    bit_string_coefficients(layout, k, alpha, gamma_u, gamma_d, c, m);
    ExactEigenoperator out;
    out.ensemble = ensemble_from_gauss(layout, c, m);
    for (int b : k) out.K += b;
    out.lambda = -2.0 * (gamma_u + gamma_d) * out.K;
    return out;
}

SparseOperator similarity_transform(const LatticeLayout& layout, double alpha, double beta, double beta_prime,
                                    double alpha_prime) {
    auto e = exact_steady_state(layout, alpha, beta, beta_prime, alpha_prime);
    for (auto& a : e.log_weight) a = -a;
    return e.to_operator_unnormalised();
}

SparseOperator similarity_transform(const LatticeLayout& layout, const std::vector<int>& k, double alpha,
                                    double gamma_u, double gamma_d) {
    std::vector<double> c;
    std::vector<int> m;
    bit_string_coefficients(layout, k, alpha, gamma_u, gamma_d, c, m);
    for (auto& x : c) x = -x;
    // The sign pattern of exp(-i pi m G) matches that of exp(i pi m G) up to a global phase.
    return ensemble_from_gauss(layout, c, m).to_operator_unnormalised();
}

SparseOperator link_transform(const LatticeLayout& layout, double beta, double beta_prime) {
    require_positive(beta, "beta");
    require_positive(beta_prime, "beta'");
    DiagonalEnsemble e;
    e.layout = layout;
    e.log_weight.assign(layout.total_spins(), 0.0);
    for (auto slot : layout.dissipative_slots())
        e.log_weight[slot] =
            -std::log(layout.slot_info(slot).species == Species::LinkY ? beta_prime : beta);
    return e.to_operator_unnormalised();
}

DiagonalEnsemble identity_on_strong_sector(const LatticeLayout& layout, std::vector<int> strong) {
    DiagonalEnsemble e;
    e.layout = layout;
    e.log_weight.assign(layout.total_spins(), 0.0);
    e.strong = std::move(strong);
    return e;
}

std::vector<SparseOperator> dephasing_steady_states(const LatticeLayout& layout) {
    std::map<std::vector<int>, std::vector<State>> groups;
    const State dim = layout.hilbert_dim();
    for (State s = 0; s < dim; ++s) groups[gauge_charges(layout, s).twice].push_back(s);
    std::vector<SparseOperator> out;
    for (const auto& [g, states] : groups) {
        std::vector<Triplet> t;
        const double w = 1.0 / static_cast<double>(states.size());
        for (State s : states) t.push_back({s, s, w});
        out.push_back(SparseOperator::from_triplets(dim, std::move(t), full_tag(layout)));
    }
    return out;
}

Marginals ensemble_marginals(const DiagonalEnsemble& ens) {
    if (ens.signed_weights()) throw ModelError("marginals need a positive ensemble");
    const std::size_t n = ens.layout.total_spins();
    if (ens.log_weight.size() != n) throw DimensionMismatch("ensemble weights do not match the register");
    const auto model = charge_model(ens.layout);
    std::vector<int> target(model.base.size(), 0);
    std::vector<std::vector<int>> delta(n, std::vector<int>{});
    if (ens.strong) {
        if (ens.strong->size() != model.base.size()) throw DimensionMismatch("strong charge vector length mismatch");
        for (std::size_t c = 0; c < target.size(); ++c) target[c] = (*ens.strong)[c] - model.base[c];
        delta = model.delta;
    } else {
        target.clear();
    }

    // backward[k]: log-weight of slots k..n-1 indexed by the charge they still have to supply.
    std::vector<LogMap> backward(n + 1);
    accumulate(backward[n], target.empty() ? std::vector<int>{} : std::vector<int>(target.size(), 0), 0.0);
    for (std::size_t k = n; k-- > 0;) {
        const double a = 0.5 * ens.log_weight[k];
        for (const auto& [key, entry] : backward[k + 1]) {
            accumulate(backward[k], entry.first, entry.second - a);
            accumulate(backward[k], shifted(entry.first, delta[k], +1), entry.second + a);
        }
    }
    const double log_z = lookup(backward[0], target);
    if (log_z == kNegInf) throw EmptySectorError("strong-charge sector is infeasible for this layout");

    Marginals out;
    out.log_partition = log_z;
    out.z.assign(n, 0.0);
    LogMap forward;
    accumulate(forward, std::vector<int>(target.size(), 0), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = 0.5 * ens.log_weight[k];
        double up = kNegInf;
        LogMap next;
        for (const auto& [key, entry] : forward) {
            const auto& q = entry.first;
            const auto q_up = shifted(q, delta[k], +1);
            up = log_add(up, entry.second + a + lookup(backward[k + 1], shifted(target, q_up, -1)));
            accumulate(next, q, entry.second - a);
            accumulate(next, q_up, entry.second + a);
        }
        out.z[k] = std::exp(up - log_z) - 0.5;
        forward = std::move(next);
    }
    return out;
}

Marginals ensemble_marginals_enumerated(const DiagonalEnsemble& ens) {
    if (ens.signed_weights()) throw ModelError("marginals need a positive ensemble");
    const std::size_t n = ens.layout.total_spins();
    const State dim = ens.layout.hilbert_dim();
    double log_z = kNegInf;
    std::vector<double> up(n, kNegInf);
    for (State s = 0; s < dim; ++s) {
        if (!in_sector(ens, s)) continue;
        const double w = log_weight_of(ens, s);
        log_z = log_add(log_z, w);
        for (std::size_t slot = 0; slot < n; ++slot)
            if (bit(s, slot)) up[slot] = log_add(up[slot], w);
    }
    if (log_z == kNegInf) throw EmptySectorError("strong-charge sector is infeasible for this layout");
    Marginals out;
    out.log_partition = log_z;
    out.z.resize(n);
    for (std::size_t slot = 0; slot < n; ++slot) out.z[slot] = std::exp(up[slot] - log_z) - 0.5;
    return out;
}

}  // namespace dqlm
