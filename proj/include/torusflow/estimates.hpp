#pragma once

// Executable forms of the uniform l^p bounds on the coefficients b_u and b_rho.

#include "torusflow/density_matrix.hpp"
#include "torusflow/spectral_state.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace torusflow {

inline constexpr double kBoundSlack = 1e-9;
inline constexpr std::uint64_t kTupleBudget = 10'000'000;

struct BoundReport {
    std::string context;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;

    static BoundReport make(std::string context, double lhs, double rhs) {
        BoundReport r{std::move(context), lhs, rhs, 0.0, false};
        if (rhs > 0.0) {
            r.ratio = lhs / rhs;
        } else if (lhs > 0.0) {
            r.ratio = std::numeric_limits<double>::infinity();
        }
        r.pass = lhs <= rhs * (1.0 + kBoundSlack);
        return r;
    }
};

/// (sum |b|^p)^(1/p), evaluated as m * (sum (|b|/m)^p)^(1/p) with m = max |b|.
inline double lp_norm(const CoefficientTable& table, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error("lp_norm needs a finite p >= 1");
    double m = 0.0;
    for (const auto& [key, v] : table.entries()) m = std::max(m, std::abs(v));
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& [key, v] : table.entries()) acc += std::pow(std::abs(v) / m, p);
    return m * std::pow(acc, 1.0 / p);
}

/// sum |b|^p (no root).
inline double power_sum(const CoefficientTable& table, double p) {
    double acc = 0.0;
    for (const auto& [key, v] : table.entries()) acc += std::pow(std::abs(v), p);
    return acc;
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

/// Norm-form constant of the l^{d+1} bound implied by sum |b|^{d+1} <= 2^d ||u||^{2(d+1)}.
inline double thm1_norm_constant(int d) {
    return std::pow(2.0, static_cast<double>(d) / static_cast<double>(d + 1));
}

/// sum_(l,s) |b_u(l,s)|^{d+1} against 2^d ||u||^{2(d+1)}.
inline BoundReport verify_thm1(const FourierState& u) {
    if (u.empty()) throw Error("bound check on the zero state");
    const int d = u.dim();
    const auto table = density_table_hyperplane(u);
    const double lhs = power_sum(table, d + 1);
    const double rhs = std::pow(2.0, d) * std::pow(u.norm2(), d + 1);
    return BoundReport::make("l^(d+1) bound d=" + std::to_string(d), lhs, rhs);
}

namespace detail {

/// For every chord (l, s), l != 0: the origins j with a_j != 0 and
/// a_{j+l} != 0, sorted lexicographically, together with |a_{j+l} a_j|.
struct ChordFibre {
    Frequency l;
    std::int64_t s = 0;
    std::vector<Frequency> points;
    std::vector<double> weights;
};

inline std::vector<ChordFibre> chord_fibres(const FourierState& u) {
    std::map<Chord, ChordFibre> fibres;
    for (const auto& [k, ak] : u.modes()) {
        for (const auto& [j, aj] : u.modes()) {
            if (k == j) continue;
            const Chord c = chord_of_pair(k, j);
            auto& f = fibres[c];
            f.l = c.l;
            f.s = c.s;
            f.points.push_back(j);
            f.weights.push_back(std::abs(ak * aj));
        }
    }
    std::vector<ChordFibre> out;
    out.reserve(fibres.size());
    for (auto& [c, f] : fibres) out.push_back(std::move(f));
    return out;
}

inline std::uint64_t tuple_count(const std::vector<ChordFibre>& fibres, int length) {
    std::uint64_t total = 0;
    for (const auto& f : fibres) {
        std::uint64_t n = 1;
        for (int i = 0; i < length; ++i) {
            n *= f.points.size();
            if (n > kTupleBudget) return kTupleBudget + 1;
        }
        total += n;
        if (total > kTupleBudget) return kTupleBudget + 1;
    }
    return total;
}

/// Sum of T_{r,delta} for every r in [0, delta-1] in one pass over tuples.
inline std::vector<double> stratified_sums(const FourierState& u, int delta) {
    const auto fibres = chord_fibres(u);
    const int length = delta + 1;
    if (tuple_count(fibres, length) > kTupleBudget) {
        throw Error("tuple budget of " + std::to_string(kTupleBudget) + " exceeded");
    }
    std::vector<double> sums(static_cast<std::size_t>(delta), 0.0);
    std::vector<std::size_t> idx(static_cast<std::size_t>(length));
    std::vector<Frequency> pts;
    for (const auto& f : fibres) {
        const std::size_t n = f.points.size();
        // The affine rank only depends on which points occur in the tuple.
        std::unordered_map<std::uint64_t, int> rank_of_set;
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
            double prod = 1.0;
            std::uint64_t mask = 0;
            for (auto i : idx) {
                prod *= f.weights[i];
                if (n <= 64) mask |= std::uint64_t{1} << i;
            }
            int r;
            auto it = n <= 64 ? rank_of_set.find(mask) : rank_of_set.end();
            if (it != rank_of_set.end()) {
                r = it->second;
            } else {
                pts.clear();
                for (auto i : idx) pts.push_back(f.points[i]);
                r = affine_rank(pts);
                if (n <= 64) rank_of_set.emplace(mask, r);
            }
            if (r < delta) sums[static_cast<std::size_t>(r)] += prod;
            int pos = length - 1;
            for (; pos >= 0; --pos) {
                if (++idx[static_cast<std::size_t>(pos)] < n) break;
                idx[static_cast<std::size_t>(pos)] = 0;
            }
            if (pos < 0) break;
        }
    }
    return sums;
}

inline void check_T_params(const FourierState& u, int r, int delta) {
    if (delta < 1 || delta > u.dim() || r < 0 || r > delta - 1) {
        throw Error("need 0 <= r <= delta-1 <= d-1; got r=" + std::to_string(r) + " delta=" + std::to_string(delta) +
                    " d=" + std::to_string(u.dim()));
    }
}

}  // namespace detail

/// T_{r,delta}(u): over chords (l, s), l != 0, the sum over (delta+1)-tuples
/// of origins in H_(l,s) whose affine span has dimension r of
/// prod |a_{j+l} a_j|; bounded by binom(delta, r) ||u||^{2(delta+1)}.
inline BoundReport compute_T(const FourierState& u, int r, int delta) {
    detail::check_T_params(u, r, delta);
    const auto sums = detail::stratified_sums(u, delta);
    const double rhs = binomial(delta, r) * std::pow(u.norm2(), delta + 1);
    return BoundReport::make("T r=" + std::to_string(r) + " delta=" + std::to_string(delta), sums[static_cast<std::size_t>(r)],
                             rhs);
}

/// All T_{r,delta}, r = 0..delta-1, from a single tuple enumeration.
inline std::vector<BoundReport> compute_T_all(const FourierState& u, int delta) {
    detail::check_T_params(u, 0, delta);
    const auto sums = detail::stratified_sums(u, delta);
    std::vector<BoundReport> out;
    for (int r = 0; r < delta; ++r) {
        out.push_back(BoundReport::make("T r=" + std::to_string(r) + " delta=" + std::to_string(delta),
                                        sums[static_cast<std::size_t>(r)],
                                        binomial(delta, r) * std::pow(u.norm2(), delta + 1)));
    }
    return out;
}

/// sum |b_u|^{d+1} <= ||u||^{2(d+1)} + sum_{r<d} T_{r,d}(u).
inline BoundReport verify_thm1_decomposition(const FourierState& u) {
    if (u.empty()) throw Error("bound check on the zero state");
    const int d = u.dim();
    const auto table = density_table_hyperplane(u);
    const double lhs = power_sum(table, d + 1);
    double rhs = std::pow(u.norm2(), d + 1);
    for (double t : detail::stratified_sums(u, d)) rhs += t;
    return BoundReport::make("stratified split d=" + std::to_string(d), lhs, rhs);
}

/// ||b_rho||_{l^{rk+1}} <= 2^{rk/(rk+1)} ||t_rho||_{L^1} for rho supported on
/// a submodule of rank rk >= 1.
inline BoundReport verify_dm_bound(const DensityMatrix& rho, const Submodule& lattice) {
    if (lattice.rank() < 1) throw Error("submodule rank must be at least 1");
    if (!submodule_support_check(rho, lattice)) throw Error("not in L1+(Lambda)");
    const int rk = lattice.rank();
    const double lhs = lp_norm(trace_density_table(rho), rk + 1);
    const double rhs = std::pow(2.0, static_cast<double>(rk) / (rk + 1)) * rho.trace();
    return BoundReport::make("density matrix rank=" + std::to_string(rk), lhs, rhs);
}

struct L4Check {
    double quadrature = 0.0;
    double table_sum = 0.0;

    double relative_gap() const {
        const double scale = std::max(std::abs(quadrature), std::abs(table_sum));
        return scale == 0.0 ? 0.0 : std::abs(quadrature - table_sum) / scale;
    }
};

/// d = 1: (1/(2pi)^2) int int |psi|^4 dx dt against sum |b(l,s)|^2. The t
/// integral is done exactly by grouping the pair products a_k conj(a_j) by
/// their time frequency s = j^2 - k^2; the x integral is an n-point rule,
/// exact once n > 4 max|k|.
inline L4Check parseval_L4_check(const FourierState& u, std::size_t n) {
    if (u.dim() != 1) throw Error("the L4 identity check is one-dimensional");
    if (n < 4 * static_cast<std::size_t>(u.max_abs_coord()) + 1) {
        throw Error("grid too coarse for the density: need n >= 4 max|k| + 1");
    }
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, Complex>>> by_s;
    for (const auto& [k, ak] : u.modes()) {
        for (const auto& [j, aj] : u.modes()) by_s[j.norm2() - k.norm2()].emplace_back(k[0] - j[0], ak * std::conj(aj));
    }
    const auto nn = static_cast<std::int64_t>(n);
    std::vector<Complex> roots(n);
    for (std::size_t m = 0; m < n; ++m) roots[m] = std::polar(1.0, 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(n));
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const auto mm = static_cast<std::int64_t>(m);
        for (const auto& [s, terms] : by_s) {
            Complex c{};
            for (const auto& [l, v] : terms) c += v * roots[static_cast<std::size_t>(((l * mm) % nn + nn) % nn)];
            acc += std::norm(c);
        }
    }
    L4Check out;
    out.quadrature = acc / static_cast<double>(n);
    out.table_sum = power_sum(density_table_hyperplane(u), 2.0);
    return out;
}

struct EigenfunctionReport {
    std::int64_t lambda = 0;
    double ld_norm = 0.0;
    bool support_on_s_zero = false;
};

/// For u supported on one sphere |k|^2 = lambda: the l^d norm of the
/// spatial coefficients b_u(l). No threshold is attached.
inline EigenfunctionReport eigenfunction_report(const FourierState& u) {
    if (u.empty()) throw Error("eigenfunction report on the zero state");
    const std::int64_t lambda = u.modes().begin()->first.norm2();
    for (const auto& [k, a] : u.modes()) {
        if (k.norm2() != lambda) throw Error("not an eigenfunction: mixed |k|^2 values");
    }
    const auto table = density_table_hyperplane(u);
    EigenfunctionReport r;
    r.lambda = lambda;
    r.support_on_s_zero = true;
    CoefficientTable spatial(u.dim());
    for (const auto& [key, v] : table.entries()) {
        if (key.s != 0 && v != Complex{}) r.support_on_s_zero = false;
        spatial.add(key.l, 0, v);
    }
    r.ld_norm = lp_norm(spatial, u.dim());
    return r;
}

}  // namespace torusflow
