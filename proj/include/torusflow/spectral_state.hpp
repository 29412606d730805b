#pragma once

// Finitely supported Fourier states u = sum_k a_k e^{ik.x} on the d-torus,
// their exact Schrodinger evolution, and the space-time Fourier
// coefficients b_u(l, s) of |e^{it Laplacian} u|^2.
//
// The L^2 norm is normalized as ||u||^2 = sum_k |a_k|^2.

#include "torusflow/lattice.hpp"
#include "torusflow/parallel.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace torusflow {

using Complex = std::complex<double>;

class FourierState {
public:
    using Modes = std::map<Frequency, Complex>;

    FourierState() = default;

    int dim() const noexcept { return dim_; }
    const Modes& modes() const& noexcept { return modes_; }
    Modes modes() && { return std::move(modes_); }
    std::size_t size() const noexcept { return modes_.size(); }
    bool empty() const noexcept { return modes_.empty(); }
    double norm2() const noexcept { return norm2_; }

    Complex amplitude(const Frequency& k) const {
        auto it = modes_.find(k);
        return it == modes_.end() ? Complex{} : it->second;
    }

    std::int64_t max_abs_coord() const noexcept {
        std::int64_t m = 0;
        for (const auto& [k, a] : modes_) m = std::max(m, k.max_abs());
        return m;
    }

    /// Builds a state; zero amplitudes are dropped.
    static FourierState make(int d, const std::vector<std::pair<Frequency, Complex>>& coeffs) {
        if (d < 1 || d > kMaxDim) throw Error("state dimension out of range");
        FourierState u;
        u.dim_ = d;
        std::set<Frequency> seen;
        for (const auto& [k, a] : coeffs) {
            if (k.dim() != d) throw Error("dimension mismatch: mode " + to_string(k) + " in d=" + std::to_string(d));
            if (!seen.insert(k).second) throw Error("duplicate frequency " + to_string(k));
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw Error("non-finite amplitude");
            if (a != Complex{}) u.modes_.emplace(k, a);
        }
        u.refresh_norm();
        return u;
    }

    /// Replaces amplitudes wholesale (used by evolution and generators).
    static FourierState from_modes(int d, Modes modes) {
        FourierState u;
        u.dim_ = d;
        u.modes_ = std::move(modes);
        std::erase_if(u.modes_, [](const auto& kv) { return kv.second == Complex{}; });
        u.refresh_norm();
        return u;
    }

private:
    static std::string to_string(const Frequency& k) {
        std::string s = "(";
        for (int i = 0; i < k.dim(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
        return s + ")";
    }

    void refresh_norm() {
        norm2_ = 0.0;
        for (const auto& [k, a] : modes_) norm2_ += std::norm(a);
    }

    int dim_ = 0;
    Modes modes_;
    double norm2_ = 0.0;
};

inline FourierState make_state(int d, const std::vector<std::pair<Frequency, Complex>>& coeffs) {
    return FourierState::make(d, coeffs);
}

/// Finitely supported (l, s) -> value map. Keys iterate in lexicographic
/// order of (l_1, ..., l_d, s).
class CoefficientTable {
public:
    using Entries = std::map<SpaceTime, Complex>;

    CoefficientTable() = default;
    explicit CoefficientTable(int d) : dim_(d) {}

    int dim() const noexcept { return dim_; }
    const Entries& entries() const& noexcept { return entries_; }
    Entries& entries() & noexcept { return entries_; }
    // Temporaries hand over their entries so range-for over a returned table is safe.
    Entries entries() && { return std::move(entries_); }
    std::size_t size() const noexcept { return entries_.size(); }

    Complex at(const Frequency& l, std::int64_t s) const {
        auto it = entries_.find(SpaceTime{l, s});
        return it == entries_.end() ? Complex{} : it->second;
    }

    void add(const Frequency& l, std::int64_t s, Complex v) { entries_[SpaceTime{l, s}] += v; }

    /// Largest |b(-l,-s) - conj(b(l,s))| over the table.
    double hermitian_defect() const {
        double worst = 0.0;
        for (const auto& [key, v] : entries_) {
            worst = std::max(worst, std::abs(at(-key.l, -key.s) - std::conj(v)));
        }
        return worst;
    }

private:
    int dim_ = 0;
    Entries entries_;
};

/// max over the union of keys of |a(l,s) - b(l,s)|; missing keys read as 0.
inline double max_abs_difference(const CoefficientTable& a, const CoefficientTable& b) {
    double worst = 0.0;
    for (const auto& [key, v] : a.entries()) worst = std::max(worst, std::abs(v - b.at(key.l, key.s)));
    for (const auto& [key, v] : b.entries()) worst = std::max(worst, std::abs(v - a.at(key.l, key.s)));
    return worst;
}

/// a_k -> a_k exp(-i |k|^2 t).
inline FourierState evolve(const FourierState& u, double t) {
    FourierState::Modes out;
    for (const auto& [k, a] : u.modes()) {
        const double phase = -static_cast<double>(k.norm2()) * t;
        out.emplace(k, a * std::polar(1.0, phase));
    }
    return FourierState::from_modes(u.dim(), std::move(out));
}

/// Samples on the uniform grid x_m = 2 pi m / n, m in {0..n-1}^d, stored
/// row-major with the first axis slowest.
struct GridValues {
    int dim = 0;
    std::size_t n = 0;
    std::vector<Complex> values;

    Complex operator()(std::span<const std::size_t> index) const {
        std::size_t flat = 0;
        for (auto i : index) flat = flat * n + i;
        return values[flat];
    }
};

/// Exact evaluation of e^{it Laplacian} u on the n^d grid. Each exponential
/// e^{i k_a x_a} is taken from a per-axis table of n-th roots of unity, so
/// values are exact up to rounding.
inline GridValues evaluate_grid(const FourierState& u, double t, std::size_t n) {
    const int d = u.dim();
    if (n < 2 * static_cast<std::size_t>(u.max_abs_coord()) + 1) {
        throw Error("grid of " + std::to_string(n) + " points per axis aliases frequencies up to " +
                    std::to_string(u.max_abs_coord()));
    }
    const auto evolved = evolve(u, t);
    std::vector<Complex> roots(n);
    for (std::size_t m = 0; m < n; ++m) {
        roots[m] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n));
    }
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    GridValues g{d, n, std::vector<Complex>(total)};
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int i = d - 1; i >= 0; --i) {
            idx[static_cast<std::size_t>(i)] = rem % n;
            rem /= n;
        }
        Complex sum{};
        for (const auto& [k, a] : evolved.modes()) {
            Complex e{1.0, 0.0};
            for (int i = 0; i < d; ++i) {
                const auto nn = static_cast<std::int64_t>(n);
                const auto pos = ((k[i] * static_cast<std::int64_t>(idx[static_cast<std::size_t>(i)])) % nn + nn) % nn;
                e *= roots[static_cast<std::size_t>(pos)];
            }
            sum += a * e;
        }
        g.values[flat] = sum;
    }
    return g;
}

/// b(l, s) = sum over ordered pairs (k, j) of the support with k - j = l and
/// |j|^2 - |k|^2 = s of a_k conj(a_j). Pairs are visited in lexicographic order.
inline CoefficientTable density_table_bruteforce(const FourierState& u) {
    CoefficientTable table(u.dim());
    for (const auto& [k, ak] : u.modes()) {
        for (const auto& [j, aj] : u.modes()) {
            table.add(k - j, j.norm2() - k.norm2(), ak * std::conj(aj));
        }
    }
    return table;
}

/// Same coefficients assembled chord by chord: b(0,0) = ||u||^2 and, for
/// l != 0, b(l, s) = sum over j in H_(l,s) of a_{j+l} conj(a_j). Within each
/// (l, s) the j are summed in lexicographic order, which matches the pair
/// order of the brute-force path.
inline CoefficientTable density_table_hyperplane(const FourierState& u, unsigned threads = 1) {
    CoefficientTable table(u.dim());
    if (u.empty()) return table;
    table.add(Frequency::zero(u.dim()), 0, Complex{u.norm2(), 0.0});

    std::vector<Frequency> chords_l;
    {
        std::vector<Frequency> diffs;
        for (const auto& [k, ak] : u.modes()) {
            for (const auto& [j, aj] : u.modes()) {
                if (k != j) diffs.push_back(k - j);
            }
        }
        std::sort(diffs.begin(), diffs.end());
        diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
        chords_l = std::move(diffs);
    }

    std::vector<std::vector<std::pair<std::int64_t, Complex>>> partial(chords_l.size());
    parallel_for(chords_l.size(), threads, [&](std::size_t idx) {
        const Frequency& l = chords_l[idx];
        const std::int64_t l2 = l.norm2();
        std::map<std::int64_t, Complex> by_s;
        for (const auto& [j, aj] : u.modes()) {
            const auto it = u.modes().find(j + l);
            if (it == u.modes().end()) continue;
            const Chord c{l, -l2 - 2 * dot(l, j)};
            if (!hyperplane_contains(c, j)) throw Error("hyperplane membership failed");
            by_s[c.s] += it->second * std::conj(aj);
        }
        partial[idx].assign(by_s.begin(), by_s.end());
    });
    for (std::size_t idx = 0; idx < chords_l.size(); ++idx) {
        for (const auto& [s, v] : partial[idx]) table.add(chords_l[idx], s, v);
    }
    return table;
}

struct MassSplit {
    double low = 0.0;
    double high = 0.0;
};

/// low = sum_{|k| < delta/h} |a_k|^2, high = sum_{|k| > R/h} |a_k|^2.
inline MassSplit oscillation_profile(const FourierState& u, double h, double delta, double R) {
    if (!(h > 0) || !(delta > 0) || !(R > 0)) throw Error("h, delta and R must be positive");
    MassSplit m;
    for (const auto& [k, a] : u.modes()) {
        const double r = std::sqrt(static_cast<double>(k.norm2()));
        if (r < delta / h) m.low += std::norm(a);
        if (r > R / h) m.high += std::norm(a);
    }
    return m;
}

}  // namespace torusflow
