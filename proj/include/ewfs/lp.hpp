#pragma once

// Exact linear feasibility: find x >= 0 with A x = b over the rationals.
// Phase-1 simplex on a dense tableau with Bland's rule (no cycling).

#include <cstddef>
#include <optional>
#include <vector>

#include "ewfs/error.hpp"
#include "ewfs/rational.hpp"

namespace ewfs::lp {

using Matrix = std::vector<std::vector<Rational>>;

inline std::optional<std::vector<Rational>> find_nonnegative_solution(const Matrix& a, const std::vector<Rational>& b) {
    const std::size_t m = a.size();
    if (b.size() != m) throw error("lp: row count mismatch");
    const std::size_t n = m == 0 ? 0 : a.front().size();
    for (const auto& row : a)
        if (row.size() != n) throw error("lp: ragged matrix");
    if (m == 0) return std::vector<Rational>(n);

    // Columns: n structural, m artificial, then the right-hand side.
    const std::size_t width = n + m + 1;
    const std::size_t rhs = n + m;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = b[i] < 0;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = flip ? Rational(-a[i][j]) : a[i][j];
        t[i][n + i] = 1;
        t[i][rhs] = flip ? Rational(-b[i]) : b[i];
        basis[i] = n + i;
    }
    // Reduced costs of the phase-1 objective (sum of artificials).
    std::vector<Rational> cost(width);
    for (std::size_t j = 0; j < width; ++j) {
        if (j >= n && j < rhs) continue;
        Rational s = 0;
        for (std::size_t i = 0; i < m; ++i) s -= t[i][j];
        cost[j] = s;
    }

    for (;;) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < rhs; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == width) break;

        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][rhs] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break;  // unbounded direction; cannot happen for phase 1

        const Rational piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j)
                if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
        }
        if (cost[enter] != 0) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j < width; ++j)
                if (t[leave][j] != 0) cost[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    if (cost[rhs] != 0) return std::nullopt;  // positive residual artificial mass
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = t[i][rhs];
    return x;
}

}  // namespace ewfs::lp
