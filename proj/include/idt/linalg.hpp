#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "idt/rng.hpp"

namespace idt {

// Dense symmetric matrix, row-major n x n.
struct SymMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    SymMatrix() = default;
    explicit SymMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    double max_diagonal() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, at(i, i));
        return m;
    }
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations. Adequate for
// the small Gram matrices used here (n up to a few hundred).
inline std::vector<double> sym_eigenvalues(SymMatrix m) {
    const std::size_t n = m.n;
    if (n == 0) return {};
    const double scale = std::max(1.0, m.max_diagonal());
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
        if (off <= 1e-30 * scale * scale) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = m.at(k, p), akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = m.at(p, k), aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Factor of a positive semidefinite matrix: B (n x rank) with B B^T = G.
struct PsdFactor {
    std::size_t n = 0;
    std::size_t rank = 0;
    std::vector<double> b;  // row-major n x rank

    // y = B z with z of length rank.
    void apply(std::span<const double> z, std::span<double> y) const {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = b.data() + i * rank;
            for (std::size_t k = 0; k < rank; ++k) acc += row[k] * z[k];
            y[i] = acc;
        }
    }
};

// Cholesky with diagonal (symmetric) pivoting; handles rank-deficient PSD
// input. Throws if a pivot falls below -tol_rel * max_diag.
inline PsdFactor pivoted_cholesky(SymMatrix g, double tol_rel = 1e-10) {
    const std::size_t n = g.n;
    const double dmax = std::max(g.max_diagonal(), 0.0);
    const double stop = std::max(dmax, 1.0) * 1e-14;
    const double floor_neg = -tol_rel * std::max(dmax, 1.0);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::vector<double> l(n * n, 0.0);

    std::size_t rank = n;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t j = k + 1; j < n; ++j)
            if (g.at(j, j) > g.at(piv, piv)) piv = j;
        if (g.at(piv, piv) < floor_neg)
            throw std::runtime_error("pivoted_cholesky: matrix is not positive semidefinite (pivot " +
                                     std::to_string(g.at(piv, piv)) + ")");
        if (g.at(piv, piv) <= stop) {
            rank = k;
            break;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(g.at(k, j), g.at(piv, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(g.at(i, k), g.at(i, piv));
            for (std::size_t j = 0; j < k; ++j) std::swap(l[k * n + j], l[piv * n + j]);
            std::swap(perm[k], perm[piv]);
        }
        const double lkk = std::sqrt(g.at(k, k));
        l[k * n + k] = lkk;
        for (std::size_t i = k + 1; i < n; ++i) l[i * n + k] = g.at(i, k) / lkk;
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j <= i; ++j) {
                const double v = g.at(i, j) - l[i * n + k] * l[j * n + k];
                g.at(i, j) = v;
                g.at(j, i) = v;
            }
    }

    PsdFactor f;
    f.n = n;
    f.rank = rank;
    f.b.assign(n * rank, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < rank; ++k) f.b[perm[i] * rank + k] = l[i * n + k];
    return f;
}

// Factor with the jitter policy: if the matrix fails the PSD floor, retry with
// increasing diagonal jitter before giving up.
inline PsdFactor psd_factor_with_jitter(const SymMatrix& g, double tol_rel = 1e-10, double jitter_max = 1e-8) {
    const double unit = std::max(g.max_diagonal(), 1.0);
    double jitter = 0.0;
    for (;;) {
        SymMatrix work = g;
        if (jitter > 0.0)
            for (std::size_t i = 0; i < work.n; ++i) work.at(i, i) += jitter * unit;
        try {
            return pivoted_cholesky(std::move(work), tol_rel);
        } catch (const std::runtime_error&) {
            if (jitter >= jitter_max) throw;
            jitter = (jitter == 0.0) ? 1e-12 : jitter * 100.0;
            if (jitter > jitter_max) jitter = jitter_max;
        }
    }
}

}  // namespace idt
