#pragma once

// Sequence lab: generators of oscillating initial data, oscillation (S)
// diagnostics, and windowed coefficient trends b_{u_n}(l, s) as n grows.

#include "torusflow/estimates.hpp"
#include "torusflow/spectral_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace torusflow {

enum class SequenceKind { modulated_wave, sphere_eigenfunctions, custom_list };

enum class AmplitudeRule { equal, random_phase, explicit_values };

struct SphereAmplitudes {
    AmplitudeRule rule = AmplitudeRule::equal;
    std::uint64_t seed = 0;
    /// Used by explicit_values; frequencies off the sphere are rejected.
    std::map<Frequency, Complex> values;
};

/// n -> h_n.
struct ScaleRule {
    enum class Kind { reciprocal_index, inverse_sqrt_lambda, explicit_values };
    Kind kind = Kind::reciprocal_index;
    double scale = 1.0;
    std::vector<double> values;
};

struct SequenceSpec {
    SequenceKind kind = SequenceKind::modulated_wave;
    int first = 1;
    int last = 1;
    ScaleRule h;

    // modulated_wave
    FourierState profile;
    Frequency direction;

    // sphere_eigenfunctions; lambda_n = lambdas[n - first], or n^2 when empty
    int dim = 0;
    std::vector<std::int64_t> lambdas;
    SphereAmplitudes amplitudes;

    // custom_list; u_n = states[n - first]
    std::vector<FourierState> states;
};

struct SequenceMember {
    int n = 0;
    FourierState state;
    double h = 0.0;
};

/// u_n with amplitudes a_k = v(k - n e): the profile translated by n e.
inline FourierState gen_modulated_wave(const FourierState& v, const Frequency& e, int n) {
    if (v.empty()) throw Error("modulated wave of the zero profile");
    if (e.dim() != v.dim()) throw Error("direction dimension mismatch");
    if (!is_primitive(e)) throw Error("direction must be primitive (coordinate gcd 1)");
    if (n < 1) throw Error("modulation index must be >= 1");
    const Frequency shift = static_cast<std::int64_t>(n) * e;
    FourierState::Modes modes;
    for (const auto& [k, a] : v.modes()) modes.emplace(k + shift, a);
    return FourierState::from_modes(v.dim(), std::move(modes));
}

/// {k in Z^d : |k|^2 = lambda} in lexicographic order.
inline std::vector<Frequency> sphere_points(int d, std::int64_t lambda) {
    if (d < 1 || d > kMaxDim) throw Error("dimension out of range");
    if (lambda < 0) throw Error("lambda must be nonnegative");
    std::vector<Frequency> out;
    std::vector<std::int64_t> k(static_cast<std::size_t>(d), 0);
    auto isqrt = [](std::int64_t x) {
        auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
        while (r * r > x) --r;
        while ((r + 1) * (r + 1) <= x) ++r;
        return r;
    };
    auto rec = [&](auto&& self, int axis, std::int64_t rem) -> void {
        if (axis == d - 1) {
            const auto r = isqrt(rem);
            if (r * r != rem) return;
            k[static_cast<std::size_t>(axis)] = -r;
            out.emplace_back(k);
            if (r != 0) {
                k[static_cast<std::size_t>(axis)] = r;
                out.emplace_back(k);
            }
            return;
        }
        const auto r = isqrt(rem);
        for (std::int64_t c = -r; c <= r; ++c) {
            k[static_cast<std::size_t>(axis)] = c;
            self(self, axis + 1, rem - c * c);
        }
    };
    rec(rec, 0, lambda);
    return out;
}

/// Eigenfunction of the Laplacian with eigenvalue lambda, ||u|| = 1.
inline FourierState gen_sphere_state(int d, std::int64_t lambda, const SphereAmplitudes& amps = {}) {
    const auto pts = sphere_points(d, lambda);
    if (pts.empty()) {
        std::int64_t below = lambda - 1;
        while (below >= 0 && sphere_points(d, below).empty()) --below;
        std::int64_t above = lambda + 1;
        while (sphere_points(d, above).empty()) ++above;
        throw Error(std::to_string(lambda) + " is not a sum of " + std::to_string(d) +
                    " squares; nearest representable values: " + (below >= 0 ? std::to_string(below) + ", " : "") +
                    std::to_string(above));
    }
    std::vector<std::pair<Frequency, Complex>> coeffs;
    const double inv = 1.0 / std::sqrt(static_cast<double>(pts.size()));
    switch (amps.rule) {
        case AmplitudeRule::equal:
            for (const auto& k : pts) coeffs.emplace_back(k, Complex{inv, 0.0});
            break;
        case AmplitudeRule::random_phase: {
            std::mt19937_64 rng(amps.seed);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
            for (const auto& k : pts) coeffs.emplace_back(k, std::polar(inv, phase(rng)));
            break;
        }
        case AmplitudeRule::explicit_values: {
            double norm2 = 0.0;
            for (const auto& [k, a] : amps.values) {
                if (k.dim() != d || k.norm2() != lambda) throw Error("explicit amplitude off the sphere");
                norm2 += std::norm(a);
            }
            if (norm2 == 0.0) throw Error("explicit amplitudes are all zero");
            for (const auto& [k, a] : amps.values) coeffs.emplace_back(k, a / std::sqrt(norm2));
            break;
        }
    }
    return make_state(d, coeffs);
}

inline std::int64_t sequence_lambda(const SequenceSpec& spec, int n) {
    if (spec.lambdas.empty()) return static_cast<std::int64_t>(n) * n;
    return spec.lambdas.at(static_cast<std::size_t>(n - spec.first));
}

inline double sequence_scale(const SequenceSpec& spec, int n) {
    switch (spec.h.kind) {
        case ScaleRule::Kind::reciprocal_index:
            return spec.h.scale / static_cast<double>(n);
        case ScaleRule::Kind::inverse_sqrt_lambda: {
            if (spec.kind != SequenceKind::sphere_eigenfunctions) throw Error("h = 1/sqrt(lambda) needs a sphere sequence");
            return spec.h.scale / std::sqrt(static_cast<double>(sequence_lambda(spec, n)));
        }
        case ScaleRule::Kind::explicit_values:
            return spec.h.values.at(static_cast<std::size_t>(n - spec.first));
    }
    return 0.0;
}

/// Materializes u_n and h_n for n in [first, last].
inline std::vector<SequenceMember> generate_sequence(const SequenceSpec& spec) {
    if (spec.last < spec.first) throw Error("empty index range");
    const auto count = static_cast<std::size_t>(spec.last - spec.first + 1);
    if (spec.h.kind == ScaleRule::Kind::explicit_values && spec.h.values.size() != count) {
        throw Error("explicit h list must have one value per index");
    }
    std::vector<SequenceMember> out;
    for (int n = spec.first; n <= spec.last; ++n) {
        SequenceMember m;
        m.n = n;
        switch (spec.kind) {
            case SequenceKind::modulated_wave:
                m.state = gen_modulated_wave(spec.profile, spec.direction, n);
                break;
            case SequenceKind::sphere_eigenfunctions: {
                auto amps = spec.amplitudes;
                amps.seed += static_cast<std::uint64_t>(n);
                m.state = gen_sphere_state(spec.dim, sequence_lambda(spec, n), amps);
                break;
            }
            case SequenceKind::custom_list:
                if (spec.states.size() != count) throw Error("custom list must have one state per index");
                m.state = spec.states[static_cast<std::size_t>(n - spec.first)];
                break;
        }
        m.h = sequence_scale(spec, n);
        if (!(m.h > 0.0) || !std::isfinite(m.h)) throw Error("h_n must be positive");
        if (!std::isfinite(m.state.norm2())) throw Error("state norm is not finite");
        out.push_back(std::move(m));
    }
    return out;
}

struct ConditionSReport {
    std::vector<double> deltas;      // as given, sorted so delta decreases
    std::vector<double> low_proxy;   // sup over trailing half of the low-frequency mass
    std::vector<double> Rs;          // sorted so R increases
    std::vector<double> high_proxy;  // sup over trailing half of the high-frequency mass
    double max_norm2 = 0.0;
    bool consistent = false;
};

/// Empirical limsup (sup over the trailing half of the index range) of the
/// masses below delta/h_n and above R/h_n. Flags the sequence consistent with
/// (S) when both proxies are nonincreasing as delta decreases and R increases
/// and reach at most tol * sup ||u_n||^2 at the extreme samples.
inline ConditionSReport condition_S_check(const SequenceSpec& spec, std::vector<double> deltas, std::vector<double> Rs,
                                          double tol = 1e-9) {
    if (deltas.empty() || Rs.empty()) throw Error("need at least one delta and one R");
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
    std::sort(Rs.begin(), Rs.end());
    const auto members = generate_sequence(spec);
    const std::size_t tail = members.size() / 2;
    ConditionSReport rep;
    rep.deltas = deltas;
    rep.Rs = Rs;
    rep.low_proxy.assign(deltas.size(), 0.0);
    rep.high_proxy.assign(Rs.size(), 0.0);
    for (const auto& m : members) rep.max_norm2 = std::max(rep.max_norm2, m.state.norm2());
    for (std::size_t i = tail; i < members.size(); ++i) {
        const auto& m = members[i];
        for (std::size_t a = 0; a < deltas.size(); ++a) {
            rep.low_proxy[a] = std::max(rep.low_proxy[a], oscillation_profile(m.state, m.h, deltas[a], Rs.front()).low);
        }
        for (std::size_t b = 0; b < Rs.size(); ++b) {
            rep.high_proxy[b] = std::max(rep.high_proxy[b], oscillation_profile(m.state, m.h, deltas.front(), Rs[b]).high);
        }
    }
    const auto nonincreasing = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::less<>()) == v.end();
    };
    const double floor = tol * rep.max_norm2;
    rep.consistent = nonincreasing(rep.low_proxy) && nonincreasing(rep.high_proxy) && rep.low_proxy.back() <= floor &&
                     rep.high_proxy.back() <= floor;
    return rep;
}

/// Mass on frequencies whose direction has resonance order < r. Integer
/// directions have order 1 and k = 0 has order 0.
inline double resonance_mass(const FourierState& u, int r) {
    if (r < 1 || r > u.dim()) throw Error("resonance order bound must be in [1, d]");
    double m = 0.0;
    for (const auto& [k, a] : u.modes()) {
        if (resonance_order(primitive_direction(k)) < r) m += std::norm(a);
    }
    return m;
}

struct TrendReport {
    std::int64_t L = 0;
    std::int64_t S = 0;
    std::vector<double> qs;
    std::vector<int> indices;
    std::map<int, CoefficientTable> per_index;          // restricted to the window
    std::map<int, std::vector<double>> partial_sums;    // one value per q
    std::map<SpaceTime, double> convergence_gap;        // over the trailing half

    double max_convergence_gap() const {
        double g = 0.0;
        for (const auto& [key, v] : convergence_gap) g = std::max(g, v);
        return g;
    }
};

inline bool in_window(const SpaceTime& key, std::int64_t L, std::int64_t S) {
    return key.l.max_abs() <= L && key.s <= S && key.s >= -S;
}

inline CoefficientTable restrict_to_window(const CoefficientTable& t, std::int64_t L, std::int64_t S) {
    CoefficientTable out(t.dim());
    for (const auto& [key, v] : t.entries()) {
        if (in_window(key, L, S)) out.entries().emplace(key, v);
    }
    return out;
}

/// Per-index windowed tables of b_{u_n}, their windowed l^q sums, and the
/// spread of each windowed coefficient over the trailing half of indices.
inline TrendReport weak_star_trend(const SequenceSpec& spec, std::int64_t L, std::int64_t S, std::vector<double> qs,
                                   unsigned threads = 1) {
    if (L < 1 || S < 1) throw Error("window bounds must be positive");
    for (double q : qs) {
        if (!(q >= 1.0)) throw Error("exponents must be >= 1");
    }
    const auto members = generate_sequence(spec);
    if (members.size() < 4) throw Error("trend needs at least 4 indices");
    std::vector<CoefficientTable> tables(members.size());
    parallel_for(members.size(), threads,
                 [&](std::size_t i) { tables[i] = restrict_to_window(density_table_hyperplane(members[i].state), L, S); });

    TrendReport rep;
    rep.L = L;
    rep.S = S;
    rep.qs = qs;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const int n = members[i].n;
        rep.indices.push_back(n);
        std::vector<double> sums;
        for (double q : qs) sums.push_back(lp_norm(tables[i], q));
        rep.partial_sums.emplace(n, std::move(sums));
        rep.per_index.emplace(n, std::move(tables[i]));
    }
    const std::size_t tail = members.size() / 2;
    std::set<SpaceTime> keys;
    for (std::size_t i = tail; i < members.size(); ++i) {
        for (const auto& [key, v] : rep.per_index.at(members[i].n).entries()) keys.insert(key);
    }
    for (const auto& key : keys) {
        double gap = 0.0;
        for (std::size_t i = tail; i < members.size(); ++i) {
            const auto bi = rep.per_index.at(members[i].n).at(key.l, key.s);
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                gap = std::max(gap, std::abs(bi - rep.per_index.at(members[j].n).at(key.l, key.s)));
            }
        }
        rep.convergence_gap.emplace(key, gap);
    }
    return rep;
}

/// For the translates of `v` along `e`: the largest n >= 1 for which some
/// coefficient with e.l != 0 lies in the window |l|_inf <= L, |s| <= S
/// (0 if none ever does). Uses s_n = s_0 - 2 n (e.l) for each pair of v.
inline int window_escape_index(const FourierState& v, const Frequency& e, std::int64_t L, std::int64_t S) {
    std::int64_t last = 0;
    for (const auto& [k, ak] : v.modes()) {
        for (const auto& [j, aj] : v.modes()) {
            if (k == j) continue;
            const Frequency l = k - j;
            const std::int64_t c = dot(e, l);
            if (c == 0 || l.max_abs() > L) continue;
            const std::int64_t s0 = j.norm2() - k.norm2();
            // |s0 - 2 n c| <= S  <=>  sign(c) s0 - S <= 2 n |c| <= sign(c) s0 + S
            const std::int64_t centre = c > 0 ? s0 : -s0;
            const std::int64_t den = 2 * (c > 0 ? c : -c);
            if (centre + S < den) continue;
            const std::int64_t hi = (centre + S) / den;
            const std::int64_t lo_num = centre - S;
            const std::int64_t lo = lo_num > 0 ? (lo_num + den - 1) / den : 1;
            if (hi >= std::max<std::int64_t>(lo, 1)) last = std::max(last, hi);
        }
    }
    return static_cast<int>(last);
}

}  // namespace torusflow
