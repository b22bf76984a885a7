// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

#include "dqlm/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "dqlm/error.hpp"

namespace dqlm {

namespace {

void check_same_space(const SparseOperator& a, const SparseOperator& b, const char* op) {
    if (a.dim() != b.dim() || !(a.tag() == b.tag()))
        throw DimensionMismatch(std::string(op) + ": operands on different spaces (" + a.tag().label + ", dim " +
                                std::to_string(a.dim()) + " vs " + b.tag().label + ", dim " +
                                std::to_string(b.dim()) + ")");
}

}  // namespace

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::vector<Triplet> entries, BasisTag tag,
                                             double drop_tol) {
    for (const auto& t : entries)
        if (t.row >= dim || t.col >= dim)
            throw IndexError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                             ") outside dimension " + std::to_string(dim));
    std::sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });

    SparseOperator out;
    out.dim_ = dim;
    out.tag_ = std::move(tag);
    out.row_ptr_.assign(dim + 1, 0);
    out.col_.reserve(entries.size());
    out.values_.reserve(entries.size());

    std::size_t i = 0;
    while (i < entries.size()) {
        const std::size_t r = entries[i].row;
        const std::size_t c = entries[i].col;
        cplx sum = 0.0;
        while (i < entries.size() && entries[i].row == r && entries[i].col == c) sum += entries[i++].value;
        if (sum == cplx{} || std::abs(sum) <= drop_tol) continue;
        out.col_.push_back(c);
        out.values_.push_back(sum);
        ++out.row_ptr_[r + 1];
    }
    for (std::size_t r = 0; r < dim; ++r) out.row_ptr_[r + 1] += out.row_ptr_[r];
    return out;
}

SparseOperator SparseOperator::identity(std::size_t dim, BasisTag tag) {
    std::vector<Triplet> t(dim);
    for (std::size_t i = 0; i < dim; ++i) t[i] = {i, i, 1.0};
    return from_triplets(dim, std::move(t), std::move(tag));
}

SparseOperator SparseOperator::zero(std::size_t dim, BasisTag tag) { return from_triplets(dim, {}, std::move(tag)); }

SparseOperator SparseOperator::diagonal(std::span<const cplx> diag, BasisTag tag) {
    std::vector<Triplet> t;
    t.reserve(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) t.push_back({i, i, diag[i]});
    return from_triplets(diag.size(), std::move(t), std::move(tag));
}

cplx SparseOperator::at(std::size_t r, std::size_t c) const {
    if (r >= dim_ || c >= dim_) throw IndexError("entry outside operator dimension");
    const auto first = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    const auto last = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return values_[static_cast<std::size_t>(it - col_.begin())];
}

std::vector<cplx> SparseOperator::apply(std::span<const cplx> v) const {
    std::vector<cplx> out(dim_, 0.0);
    apply_add(v, out, 1.0);
    return out;
}

void SparseOperator::apply_add(std::span<const cplx> v, std::span<cplx> out, cplx alpha) const {
    if (v.size() != dim_ || out.size() != dim_)
        throw DimensionMismatch("apply: vector length " + std::to_string(v.size()) + " != dimension " +
                                std::to_string(dim_));
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx acc = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * v[col_[k]];
        out[r] += alpha * acc;
    }
}

double SparseOperator::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return std::sqrt(s);
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool SparseOperator::is_diagonal() const {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            if (col_[k] != r) return false;
    return true;
}

std::vector<cplx> SparseOperator::diagonal_values() const {
    std::vector<cplx> d(dim_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) d[r] = at(r, r);
    return d;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col_[k])) = values_[k];
    return m;
}

SparseOperator SparseOperator::retagged(BasisTag tag) const {
    SparseOperator out = *this;
    out.tag_ = std::move(tag);
    return out;
}

SparseOperator add(const SparseOperator& a, const SparseOperator& b) {
    check_same_space(a, b, "add");
    std::vector<Triplet> t;
    t.reserve(a.nnz() + b.nnz());
    for (const SparseOperator* op : {&a, &b}) {
        const auto rp = op->row_ptr();
        const auto ci = op->col_index();
        const auto va = op->values();
        for (std::size_t r = 0; r < op->dim(); ++r)
            for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) t.push_back({r, ci[k], va[k]});
    }
    return SparseOperator::from_triplets(a.dim(), std::move(t), a.tag());
}

SparseOperator scale(cplx c, const SparseOperator& a) {
    std::vector<Triplet> t;
    t.reserve(a.nnz());
    const auto rp = a.row_ptr();
    const auto ci = a.col_index();
    const auto va = a.values();
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) t.push_back({r, ci[k], c * va[k]});
    return SparseOperator::from_triplets(a.dim(), std::move(t), a.tag());
}

SparseOperator mul(const SparseOperator& a, const SparseOperator& b, double drop_tol) {
    check_same_space(a, b, "mul");
    const std::size_t n = a.dim();
    const auto arp = a.row_ptr();
    const auto aci = a.col_index();
    const auto ava = a.values();
    const auto brp = b.row_ptr();
    const auto bci = b.col_index();
    const auto bva = b.values();

    // Gustavson row-by-row product with a dense accumulator.
    std::vector<cplx> acc(n, 0.0);
    std::vector<std::size_t> marker(n, static_cast<std::size_t>(-1));
    std::vector<std::size_t> touched;
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < n; ++r) {
        touched.clear();
        for (std::size_t ka = arp[r]; ka < arp[r + 1]; ++ka) {
            const std::size_t mid = aci[ka];
            for (std::size_t kb = brp[mid]; kb < brp[mid + 1]; ++kb) {
                const std::size_t c = bci[kb];
                if (marker[c] != r) {
                    marker[c] = r;
                    acc[c] = 0.0;
                    touched.push_back(c);
                }
                acc[c] += ava[ka] * bva[kb];
            }
        }
        for (std::size_t c : touched) t.push_back({r, c, acc[c]});
    }
    return SparseOperator::from_triplets(n, std::move(t), a.tag(), drop_tol);
}

namespace {

template <class F>
SparseOperator transform_transpose(const SparseOperator& a, F f) {
    std::vector<Triplet> t;
    t.reserve(a.nnz());
    const auto rp = a.row_ptr();
    const auto ci = a.col_index();
    const auto va = a.values();
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) t.push_back({ci[k], r, f(va[k])});
    return SparseOperator::from_triplets(a.dim(), std::move(t), a.tag());
}

}  // namespace

SparseOperator adjoint(const SparseOperator& a) {
    return transform_transpose(a, [](cplx v) { return std::conj(v); });
}

SparseOperator transpose(const SparseOperator& a) {
    return transform_transpose(a, [](cplx v) { return v; });
}

SparseOperator conjugate(const SparseOperator& a) {
    std::vector<Triplet> t;
    t.reserve(a.nnz());
    const auto rp = a.row_ptr();
    const auto ci = a.col_index();
    const auto va = a.values();
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) t.push_back({r, ci[k], std::conj(va[k])});
    return SparseOperator::from_triplets(a.dim(), std::move(t), a.tag());
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) { return mul(a, b) - mul(b, a); }

SparseOperator kron(const SparseOperator& a, const SparseOperator& b, BasisTag tag) {
    const std::size_t nb = b.dim();
    std::vector<Triplet> t;
    t.reserve(a.nnz() * b.nnz());
    const auto arp = a.row_ptr();
    const auto aci = a.col_index();
    const auto ava = a.values();
    const auto brp = b.row_ptr();
    const auto bci = b.col_index();
    const auto bva = b.values();
    for (std::size_t ra = 0; ra < a.dim(); ++ra)
        for (std::size_t ka = arp[ra]; ka < arp[ra + 1]; ++ka)
            for (std::size_t rb = 0; rb < nb; ++rb)
                for (std::size_t kb = brp[rb]; kb < brp[rb + 1]; ++kb)
                    t.push_back({ra * nb + rb, aci[ka] * nb + bci[kb], ava[ka] * bva[kb]});
    return SparseOperator::from_triplets(a.dim() * nb, std::move(t), std::move(tag));
}

double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("max_abs_diff: dimension mismatch");
    return (a.retagged(b.tag()) - b).max_abs();
}

}  // namespace dqlm
