#pragma once

// Exact integer geometry of the discrete paraboloid {(k, -|k|^2) : k in Z^d}.

#include "torusflow/error.hpp"
#include "torusflow/integer_linalg.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace torusflow {

inline constexpr int kMaxDim = 8;
inline constexpr std::int64_t kMaxCoord = std::int64_t{1} << 20;

/// A point of Z^d, 1 <= d <= 8, with every coordinate bounded by 2^20 in
/// magnitude so that |k|^2 and any chord's s fit in 64 bits.
class Frequency {
public:
    Frequency() = default;

    explicit Frequency(std::span<const std::int64_t> coords) : dim_(static_cast<int>(coords.size())) {
        if (coords.empty() || coords.size() > kMaxDim) {
            throw Error("frequency dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                        std::to_string(coords.size()));
        }
        for (std::size_t i = 0; i < coords.size(); ++i) c_[i] = checked(coords[i]);
    }

    Frequency(std::initializer_list<std::int64_t> coords)
        : Frequency(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

    static Frequency zero(int d) {
        std::vector<std::int64_t> z(static_cast<std::size_t>(d), 0);
        return Frequency(z);
    }

    static Frequency unit(int d, int axis) {
        std::vector<std::int64_t> z(static_cast<std::size_t>(d), 0);
        z.at(static_cast<std::size_t>(axis)) = 1;
        return Frequency(z);
    }

    int dim() const noexcept { return dim_; }
    std::int64_t operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
    std::span<const std::int64_t> coords() const noexcept { return {c_.data(), static_cast<std::size_t>(dim_)}; }

    std::int64_t norm2() const noexcept {
        std::int64_t n = 0;
        for (int i = 0; i < dim_; ++i) n += c_[i] * c_[i];
        return n;
    }

    std::int64_t max_abs() const noexcept {
        std::int64_t m = 0;
        for (int i = 0; i < dim_; ++i) m = std::max(m, c_[i] < 0 ? -c_[i] : c_[i]);
        return m;
    }

    bool is_zero() const noexcept {
        return std::all_of(c_.begin(), c_.begin() + dim_, [](std::int64_t v) { return v == 0; });
    }

    friend std::int64_t dot(const Frequency& a, const Frequency& b) {
        require_same_dim(a, b);
        std::int64_t s = 0;
        for (int i = 0; i < a.dim_; ++i) s += a.c_[i] * b.c_[i];
        return s;
    }

    friend Frequency operator+(const Frequency& a, const Frequency& b) {
        require_same_dim(a, b);
        Frequency r;
        r.dim_ = a.dim_;
        for (int i = 0; i < a.dim_; ++i) r.c_[i] = checked(a.c_[i] + b.c_[i]);
        return r;
    }

    friend Frequency operator-(const Frequency& a, const Frequency& b) {
        require_same_dim(a, b);
        Frequency r;
        r.dim_ = a.dim_;
        for (int i = 0; i < a.dim_; ++i) r.c_[i] = checked(a.c_[i] - b.c_[i]);
        return r;
    }

    friend Frequency operator-(const Frequency& a) {
        Frequency r = a;
        for (int i = 0; i < a.dim_; ++i) r.c_[i] = -a.c_[i];
        return r;
    }

    friend Frequency operator*(std::int64_t n, const Frequency& a) {
        Frequency r;
        r.dim_ = a.dim_;
        for (int i = 0; i < a.dim_; ++i) {
            if (n != 0 && (a.c_[i] > kMaxCoord / (n < 0 ? -n : n) || a.c_[i] < -kMaxCoord / (n < 0 ? -n : n))) {
                throw Error("magnitude bound exceeded");
            }
            r.c_[i] = checked(n * a.c_[i]);
        }
        return r;
    }

    /// Lexicographic order (dimension first; mixed dimensions never compare equal).
    friend std::strong_ordering operator<=>(const Frequency& a, const Frequency& b) noexcept {
        if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
        return a.c_ <=> b.c_;
    }
    friend bool operator==(const Frequency& a, const Frequency& b) noexcept = default;

    friend std::ostream& operator<<(std::ostream& os, const Frequency& k) {
        os << '(';
        for (int i = 0; i < k.dim_; ++i) os << (i ? "," : "") << k.c_[i];
        return os << ')';
    }

private:
    static std::int64_t checked(std::int64_t v) {
        if (v > kMaxCoord || v < -kMaxCoord) throw Error("magnitude bound exceeded");
        return v;
    }

    static void require_same_dim(const Frequency& a, const Frequency& b) {
        if (a.dim_ != b.dim_) {
            throw Error("dimension mismatch: " + std::to_string(a.dim_) + " vs " + std::to_string(b.dim_));
        }
    }

    int dim_ = 0;
    std::array<std::int64_t, kMaxDim> c_{};
};

/// A space-time frequency (l, s) in Z^d x Z, ordered lexicographically as the
/// concatenation (l_1, ..., l_d, s).
struct SpaceTime {
    Frequency l;
    std::int64_t s = 0;

    friend std::strong_ordering operator<=>(const SpaceTime&, const SpaceTime&) noexcept = default;
    friend bool operator==(const SpaceTime&, const SpaceTime&) noexcept = default;
};

/// A chord of the discrete paraboloid: l != 0. The set of origins j of the
/// chord is the lattice hyperplane H = {j : 2 l.j + s + |l|^2 = 0}.
struct Chord {
    Frequency l;
    std::int64_t s = 0;

    friend bool operator==(const Chord&, const Chord&) noexcept = default;
    friend std::strong_ordering operator<=>(const Chord&, const Chord&) noexcept = default;
};

inline Chord chord_of_pair(const Frequency& k, const Frequency& j) {
    if (k == j) throw Error("zero chord");
    Chord c{k - j, j.norm2() - k.norm2()};
    const std::int64_t alt = -c.l.norm2() - 2 * dot(c.l, j);
    if (alt != c.s) throw Error("chord identity violated");
    return c;
}

inline bool hyperplane_contains(const Chord& c, const Frequency& j) {
    if (c.l.is_zero()) throw Error("hyperplane of a zero chord");
    return 2 * dot(c.l, j) == -(c.s + c.l.norm2());
}

/// All j with |j|_inf <= radius on the hyperplane of `c`, in lexicographic order.
inline std::vector<Frequency> enumerate_hyperplane(const Chord& c, std::int64_t radius) {
    if (c.l.is_zero()) throw Error("hyperplane of a zero chord");
    if (radius < 0) throw Error("radius must be nonnegative");
    const int d = c.l.dim();
    const std::int64_t rhs = -(c.s + c.l.norm2());  // 2 l.j = rhs
    std::vector<Frequency> out;
    if (rhs % 2 != 0) return out;
    const std::int64_t target = rhs / 2;

    // Solve for the last coordinate with l_p != 0; scan the others.
    int pivot = d - 1;
    while (c.l[pivot] == 0) --pivot;
    std::vector<std::int64_t> j(static_cast<std::size_t>(d), -radius);
    j[static_cast<std::size_t>(pivot)] = 0;
    for (;;) {
        std::int64_t rest = target;
        for (int i = 0; i < d; ++i) {
            if (i != pivot) rest -= c.l[i] * j[static_cast<std::size_t>(i)];
        }
        if (rest % c.l[pivot] == 0) {
            const std::int64_t jp = rest / c.l[pivot];
            if (jp >= -radius && jp <= radius) {
                auto full = j;
                full[static_cast<std::size_t>(pivot)] = jp;
                out.emplace_back(full);
            }
        }
        int i = d - 1;
        for (; i >= 0; --i) {
            if (i == pivot) continue;
            auto& v = j[static_cast<std::size_t>(i)];
            if (v < radius) {
                ++v;
                break;
            }
            v = -radius;
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Dimension of the affine span of the points.
inline int affine_rank(std::span<const Frequency> points) {
    if (points.empty()) throw Error("affine_rank of an empty point list");
    const auto& base = points.front();
    std::vector<std::vector<std::int64_t>> diffs;
    diffs.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto dv = points[i] - base;
        if (dv.is_zero()) continue;
        diffs.emplace_back(dv.coords().begin(), dv.coords().end());
    }
    return static_cast<int>(detail::rank(diffs));
}

inline int affine_rank(std::initializer_list<Frequency> points) {
    return affine_rank(std::span<const Frequency>(points.begin(), points.size()));
}

/// An integer submodule of Z^d given by generators. Membership is decided
/// exactly against an echelon basis of the generated lattice.
class Submodule {
public:
    static Submodule from_generators(int d, std::vector<Frequency> gens) {
        if (d < 1 || d > kMaxDim) throw Error("submodule dimension out of range");
        for (const auto& g : gens) {
            if (g.dim() != d) throw Error("generator dimension mismatch");
        }
        Submodule m;
        m.dim_ = d;
        m.gens_ = std::move(gens);
        detail::Matrix<detail::BigInt> rows;
        for (const auto& g : m.gens_) rows.emplace_back(g.coords().begin(), g.coords().end());
        m.pivots_ = detail::echelon(rows, static_cast<std::size_t>(d));
        rows.resize(m.pivots_.size());
        m.basis_ = std::move(rows);
        return m;
    }

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return static_cast<int>(pivots_.size()); }
    const std::vector<Frequency>& generators() const noexcept { return gens_; }

    bool contains(const Frequency& v) const {
        if (v.dim() != dim_) throw Error("dimension mismatch in submodule membership");
        std::vector<detail::BigInt> r(v.coords().begin(), v.coords().end());
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const auto p = pivots_[i];
            if (r[p] == 0) continue;
            if (r[p] % basis_[i][p] != 0) return false;
            const detail::BigInt q = r[p] / basis_[i][p];
            for (std::size_t c = 0; c < r.size(); ++c) r[c] -= q * basis_[i][c];
        }
        return std::all_of(r.begin(), r.end(), [](const detail::BigInt& x) { return x == 0; });
    }

    /// Z^d itself.
    static Submodule full(int d) {
        std::vector<Frequency> g;
        for (int i = 0; i < d; ++i) g.push_back(Frequency::unit(d, i));
        return from_generators(d, std::move(g));
    }

private:
    int dim_ = 0;
    std::vector<Frequency> gens_;
    detail::Matrix<detail::BigInt> basis_;
    std::vector<std::size_t> pivots_;
};

inline Submodule submodule_from_generators(int d, std::vector<Frequency> gens) {
    return Submodule::from_generators(d, std::move(gens));
}

/// Lambda_k = {m in Z^d : m.k = 0}, with a lattice basis as generators.
inline Submodule orthogonal_submodule(const Frequency& k) {
    const int d = k.dim();
    const auto n = static_cast<std::size_t>(d);
    detail::Matrix<detail::BigInt> rows(n, std::vector<detail::BigInt>(n + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
        rows[i][0] = k[static_cast<int>(i)];
        rows[i][i + 1] = 1;
    }
    const auto piv = detail::echelon(rows, 1);
    std::vector<Frequency> gens;
    for (std::size_t i = piv.size(); i < n; ++i) {
        std::vector<std::int64_t> g;
        for (std::size_t c = 1; c <= n; ++c) {
            const auto& v = rows[i][c];
            if (v > kMaxCoord || v < -kMaxCoord) throw Error("magnitude bound exceeded");
            g.push_back(static_cast<std::int64_t>(v));
        }
        gens.emplace_back(g);
    }
    return Submodule::from_generators(d, std::move(gens));
}

/// d - rank(Lambda_k): 0 for k = 0, 1 for every nonzero integer direction.
inline int resonance_order(const Frequency& k) {
    return k.dim() - orthogonal_submodule(k).rank();
}

/// k / gcd(k); the zero vector maps to itself.
inline Frequency primitive_direction(const Frequency& k) {
    std::int64_t g = 0;
    for (auto v : k.coords()) g = std::gcd(g, v);
    if (g == 0) return k;
    std::vector<std::int64_t> out;
    for (auto v : k.coords()) out.push_back(v / g);
    return Frequency(out);
}

inline bool is_primitive(const Frequency& k) {
    std::int64_t g = 0;
    for (auto v : k.coords()) g = std::gcd(g, v);
    return g == 1;
}

}  // namespace torusflow
