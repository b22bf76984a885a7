// Copyright 2026 The dqlm Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force dense references built from 2x2 matrices and Kronecker
// products only; none of the library's operator machinery is used here.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Local 2x2 matrices in the (down = 0, up = 1) basis.
inline Mat local(char op) {
    Mat m = Mat::Zero(2, 2);
    switch (op) {
        case '+': m(1, 0) = 1.0; break;
        case '-': m(0, 1) = 1.0; break;
        case 'z': m(0, 0) = -0.5; m(1, 1) = 0.5; break;
        default: m = Mat::Identity(2, 2);
    }
    return m;
}

/// Operator `op` on slot k of an n-spin register, slot 0 the least significant bit.
inline Mat spin(std::size_t n, std::size_t k, char op) {
    Mat out = Mat::Identity(1, 1);
    for (std::size_t q = n; q-- > 0;) {
        const Mat f = q == k ? local(op) : Mat::Identity(2, 2);
        out = Eigen::kroneckerProduct(out, f).eval();
    }
    return out;
}

inline Mat identity(std::size_t n) { return Mat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n); }

/// Chain with sites 0..L-1 in slots 0..L-1 and link (n, n+1) in slot L + n.
inline Mat chain_hamiltonian(int L, bool pbc, double J, double phi = 0.0) {
    const std::size_t n = static_cast<std::size_t>(pbc ? 2 * L : 2 * L - 1);
    Mat h = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    const int bonds = pbc ? L : L - 1;
    for (int b = 0; b < bonds; ++b) {
        const std::size_t a = static_cast<std::size_t>(b);
        const std::size_t c = static_cast<std::size_t>((b + 1) % L);
        const std::size_t link = static_cast<std::size_t>(L + b);
        const cplx amp = (pbc && b == L - 1) ? J * std::exp(cplx(0.0, phi)) : cplx(J);
        const Mat term = amp * spin(n, a, '+') * spin(n, link, '+') * spin(n, c, '-');
        h += term + term.adjoint();
    }
    return h;
}

/// Chain Gauss generator G_n = tau_n - s_{n,n+1} + s_{n-1,n}.
inline Mat chain_gauss(int L, bool pbc, int site) {
    const std::size_t n = static_cast<std::size_t>(pbc ? 2 * L : 2 * L - 1);
    Mat g = spin(n, static_cast<std::size_t>(site), 'z');
    const int links = pbc ? L : L - 1;
    if (site < links) g -= spin(n, static_cast<std::size_t>(L + site), 'z');
    const int left = pbc ? (site - 1 + L) % L : site - 1;
    if (left >= 0 && left < links) g += spin(n, static_cast<std::size_t>(L + left), 'z');
    return g;
}

/// Biased link jumps sqrt(gu) s^+, sqrt(gd) s^- on the chain links.
inline std::vector<Mat> chain_link_jumps(int L, bool pbc, double gu, double gd) {
    const std::size_t n = static_cast<std::size_t>(pbc ? 2 * L : 2 * L - 1);
    std::vector<Mat> out;
    const int links = pbc ? L : L - 1;
    for (int b = 0; b < links; ++b) {
        out.push_back(std::sqrt(gu) * spin(n, static_cast<std::size_t>(L + b), '+'));
        out.push_back(std::sqrt(gd) * spin(n, static_cast<std::size_t>(L + b), '-'));
    }
    return out;
}

/// Dense generator on row-major vec(rho) (index ket * dim + bra):
/// -i (H (x) 1 - 1 (x) H^T) + sum 2 L (x) L^* - L^dag L (x) 1 - 1 (x) (L^dag L)^T.
inline Mat liouvillian(const Mat& h, const std::vector<Mat>& jumps) {
    const Eigen::Index d = h.rows();
    const Mat id = Mat::Identity(d, d);
    const cplx i(0.0, 1.0);
    Mat l = -i * (Eigen::kroneckerProduct(h, id).eval() - Eigen::kroneckerProduct(id, h.transpose()).eval());
    for (const Mat& j : jumps) {
        const Mat k = j.adjoint() * j;
        l += 2.0 * Eigen::kroneckerProduct(j, j.conjugate()).eval();
        l -= Eigen::kroneckerProduct(k, id).eval();
        l -= Eigen::kroneckerProduct(id, k.transpose()).eval();
    }
    return l;
}

/// Lindblad action in operator form, for residual references.
inline Mat apply(const Mat& h, const std::vector<Mat>& jumps, const Mat& rho) {
    const cplx i(0.0, 1.0);
    Mat out = -i * (h * rho - rho * h);
    for (const Mat& j : jumps) {
        const Mat k = j.adjoint() * j;
        out += 2.0 * j * rho * j.adjoint() - k * rho - rho * k;
    }
    return out;
}

inline std::size_t popcount_bits(std::size_t s, std::size_t lo, std::size_t hi) {
    std::size_t c = 0;
    for (std::size_t q = lo; q < hi; ++q) c += (s >> q) & 1U;
    return c;
}

/// Binomial coefficient for small arguments.
inline std::size_t choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace oracle
