// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file sparse.hpp
 * @brief Complex sparse operators in compressed-row form.
 *
 * Operators are assembled once from (row, col, value) triplets, sorted in
 * canonical (row, col) order with duplicates merged and exact zeros pruned,
 * and are immutable afterwards. Each operator carries a BasisTag naming the
 * space it acts on; binary operations reject mismatched tags.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dqlm {

using cplx = std::complex<double>;

struct BasisTag {
    std::string label;
    friend bool operator==(const BasisTag&, const BasisTag&) = default;
};

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    cplx value{};
};

class SparseOperator {
public:
    SparseOperator() = default;

    /// Sorts, merges duplicates and drops entries with |value| <= drop_tol
    /// (exact zeros are always dropped).
    static SparseOperator from_triplets(std::size_t dim, std::vector<Triplet> entries, BasisTag tag,
                                        double drop_tol = 0.0);
    static SparseOperator identity(std::size_t dim, BasisTag tag);
    static SparseOperator zero(std::size_t dim, BasisTag tag);
    static SparseOperator diagonal(std::span<const cplx> diag, BasisTag tag);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    const BasisTag& tag() const noexcept { return tag_; }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> col_index() const noexcept { return col_; }
    std::span<const cplx> values() const noexcept { return values_; }

    /// Entry (r, c); zero when not stored.
    cplx at(std::size_t r, std::size_t c) const;

    std::vector<cplx> apply(std::span<const cplx> v) const;
    /// out += alpha * A v
    void apply_add(std::span<const cplx> v, std::span<cplx> out, cplx alpha = 1.0) const;

    double frobenius_norm() const;
    double max_abs() const;
    bool is_diagonal() const;
    std::vector<cplx> diagonal_values() const;

    Eigen::MatrixXcd to_dense() const;
    SparseOperator retagged(BasisTag tag) const;

private:
    std::size_t dim_ = 0;
    BasisTag tag_;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_;
    std::vector<cplx> values_;
};

SparseOperator add(const SparseOperator& a, const SparseOperator& b);
SparseOperator scale(cplx c, const SparseOperator& a);
/// Matrix product; entries with |value| <= drop_tol are removed.
SparseOperator mul(const SparseOperator& a, const SparseOperator& b, double drop_tol = 0.0);
SparseOperator adjoint(const SparseOperator& a);
SparseOperator transpose(const SparseOperator& a);
SparseOperator conjugate(const SparseOperator& a);
/// [A, B] = AB - BA
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
/// Kronecker product A (x) B with row index i_a * dim(B) + i_b.
SparseOperator kron(const SparseOperator& a, const SparseOperator& b, BasisTag tag);

inline SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) { return add(a, b); }
inline SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
    return add(a, scale(-1.0, b));
}
inline SparseOperator operator*(cplx c, const SparseOperator& a) { return scale(c, a); }
inline SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) { return mul(a, b); }

/// max |A_ij - B_ij|
double max_abs_diff(const SparseOperator& a, const SparseOperator& b);

}  // namespace dqlm
