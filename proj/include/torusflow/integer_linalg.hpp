#pragma once

// Exact row reduction over Z. Rows are combined only by unimodular
// (extended-gcd) operations, so the nonzero rows of the result are a basis
// of the same lattice as the input rows.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <type_traits>
#include <utility>
#include <vector>

namespace torusflow::detail {

using BigInt = boost::multiprecision::cpp_int;
using Int128 = __int128;

struct Overflow {};

template <class Int>
Int mul(const Int& a, const Int& b) {
    if constexpr (std::is_same_v<Int, Int128>) {
        Int128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
        return r;
    } else {
        return a * b;
    }
}

template <class Int>
Int add(const Int& a, const Int& b) {
    if constexpr (std::is_same_v<Int, Int128>) {
        Int128 r;
        if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
        return r;
    } else {
        return a + b;
    }
}

template <class Int>
Int sub(const Int& a, const Int& b) {
    if constexpr (std::is_same_v<Int, Int128>) {
        Int128 r;
        if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
        return r;
    } else {
        return a - b;
    }
}

template <class Int>
Int abs_value(const Int& a) {
    return a < 0 ? Int(-a) : a;
}

/// Returns (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0.
template <class Int>
std::tuple<Int, Int, Int> extended_gcd(Int a, Int b) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int r = a - q * b;
        a = b;
        b = r;
        Int xt = x0 - q * x1;
        x0 = x1;
        x1 = xt;
        Int yt = y0 - q * y1;
        y0 = y1;
        y1 = yt;
    }
    if (a < 0) return {Int(-a), Int(-x0), Int(-y0)};
    return {a, x0, y0};
}

template <class Int>
using Matrix = std::vector<std::vector<Int>>;

/// Brings `rows` to row-echelon form on the first `ncols` columns.
/// Returns the pivot columns; rows [0, pivots.size()) carry the pivots
/// (positive), the remaining rows are zero on the first `ncols` columns.
template <class Int>
std::vector<std::size_t> echelon(Matrix<Int>& rows, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t top = 0;
    for (std::size_t c = 0; c < ncols && top < rows.size(); ++c) {
        for (std::size_t i = top + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            if (rows[top][c] == 0) {
                std::swap(rows[top], rows[i]);
                continue;
            }
            const Int a = rows[top][c];
            const Int b = rows[i][c];
            auto [g, x, y] = extended_gcd<Int>(a, b);
            const Int ag = a / g;
            const Int bg = b / g;
            auto& p = rows[top];
            auto& o = rows[i];
            for (std::size_t k = 0; k < p.size(); ++k) {
                const Int pk = p[k];
                const Int ok = o[k];
                p[k] = add(mul(x, pk), mul(y, ok));
                o[k] = sub(mul(ag, ok), mul(bg, pk));
            }
        }
        if (rows[top][c] == 0) continue;
        if (rows[top][c] < 0) {
            for (auto& v : rows[top]) v = -v;
        }
        pivots.push_back(c);
        ++top;
    }
    return pivots;
}

template <class Int>
Matrix<Int> widen(const std::vector<std::vector<std::int64_t>>& rows) {
    Matrix<Int> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
    return out;
}

/// Exact rank of an integer matrix. Runs in 128-bit arithmetic and
/// retries with arbitrary precision if any intermediate overflows.
inline std::size_t rank(const std::vector<std::vector<std::int64_t>>& rows) {
    if (rows.empty()) return 0;
    const std::size_t ncols = rows.front().size();
    try {
        auto m = widen<Int128>(rows);
        return echelon(m, ncols).size();
    } catch (const Overflow&) {
        auto m = widen<BigInt>(rows);
        return echelon(m, ncols).size();
    }
}

}  // namespace torusflow::detail
