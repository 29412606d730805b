#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace torusflow;
using namespace std::complex_literals;
using torusflow::testing::random_state;

namespace {

FourierState escape_profile() {
    const double r = 1.0 / std::sqrt(2.0);
    return make_state(2, {{Frequency{-10, 0}, Complex{r, 0.0}}, {Frequency{-9, 1}, Complex{0.0, r}}});
}

SequenceSpec modulated_spec(int last) {
    SequenceSpec spec;
    spec.kind = SequenceKind::modulated_wave;
    spec.first = 1;
    spec.last = last;
    spec.profile = escape_profile();
    spec.direction = Frequency{1, 0};
    return spec;
}

SequenceSpec sphere_spec(int last) {
    SequenceSpec spec;
    spec.kind = SequenceKind::sphere_eigenfunctions;
    spec.dim = 2;
    spec.first = 1;
    spec.last = last;
    spec.h.kind = ScaleRule::Kind::inverse_sqrt_lambda;
    return spec;
}

}  // namespace

TEST(SpherePoints, Examples) {
    const auto p = sphere_points(2, 1);
    ASSERT_EQ(p.size(), 4u);
    EXPECT_EQ(p[0], (Frequency{-1, 0}));
    EXPECT_EQ(p[1], (Frequency{0, -1}));
    EXPECT_EQ(p[2], (Frequency{0, 1}));
    EXPECT_EQ(p[3], (Frequency{1, 0}));
    EXPECT_TRUE(sphere_points(2, 3).empty());
    EXPECT_EQ(sphere_points(3, 2).size(), 12u);
    EXPECT_EQ(sphere_points(2, 25).size(), 12u);
    EXPECT_EQ(sphere_points(1, 0).size(), 1u);
    EXPECT_THROW(sphere_points(0, 1), Error);
}

TEST(SpherePoints, MatchBoxScan) {
    for (int d = 1; d <= 3; ++d) {
        for (std::int64_t lambda = 0; lambda <= 30; ++lambda) {
            std::size_t count = 0;
            const auto box = torusflow::testing::box_filter(Chord{Frequency::zero(d), 0}, 6);
            for (const auto& k : box) count += k.norm2() == lambda;
            const auto pts = sphere_points(d, lambda);
            EXPECT_EQ(pts.size(), count) << d << " " << lambda;
            EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
        }
    }
}

TEST(GenSphereState, Examples) {
    const auto u = gen_sphere_state(3, 2);
    EXPECT_EQ(u.size(), 12u);
    for (const auto& [k, a] : u.modes()) {
        EXPECT_EQ(k.norm2(), 2);
        EXPECT_NEAR(std::abs(a - 1.0 / std::sqrt(12.0)), 0.0, 1e-15);
    }
    EXPECT_NEAR(u.norm2(), 1.0, 1e-14);

    try {
        gen_sphere_state(2, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("nearest representable values: 2, 4"), std::string::npos) << e.what();
    }

    SphereAmplitudes rp;
    rp.rule = AmplitudeRule::random_phase;
    rp.seed = 9;
    const auto a = gen_sphere_state(2, 25, rp);
    const auto b = gen_sphere_state(2, 25, rp);
    EXPECT_NEAR(a.norm2(), 1.0, 1e-14);
    EXPECT_EQ(a.modes(), b.modes());

    SphereAmplitudes ex;
    ex.rule = AmplitudeRule::explicit_values;
    ex.values = {{Frequency{3, 4}, 2.0}, {Frequency{5, 0}, 2.0i}};
    const auto c = gen_sphere_state(2, 25, ex);
    EXPECT_NEAR(std::abs(c.amplitude(Frequency{5, 0}) - 1i / std::sqrt(2.0)), 0.0, 1e-15);
    ex.values.emplace(Frequency{1, 1}, 1.0);
    EXPECT_THROW(gen_sphere_state(2, 25, ex), Error);
}

TEST(GenModulatedWave, Examples) {
    const auto v = make_state(2, {{Frequency{0, 0}, 1.0}, {Frequency{0, 1}, 1.0}});
    const auto u = gen_modulated_wave(v, Frequency{1, 0}, 3);
    EXPECT_EQ(u.amplitude(Frequency{3, 0}), Complex{1.0});
    EXPECT_EQ(u.amplitude(Frequency{3, 1}), Complex{1.0});
    EXPECT_EQ(u.size(), 2u);
    EXPECT_THROW(gen_modulated_wave(v, Frequency{2, 0}, 1), Error);
    EXPECT_THROW(gen_modulated_wave(v, Frequency{1, 0}, 0), Error);
    EXPECT_THROW(gen_modulated_wave(FourierState{}, Frequency{1, 0}, 1), Error);
}

TEST(GenModulatedWave, ShiftIdentity) {
    // b_{u_n}(l, s) = b_v(l, s + 2n e.l).
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const auto v = random_state(rng, 2, 8, 4);
        const Frequency e{2, -3};
        const auto bv = density_table_bruteforce(v);
        for (int n = 1; n <= 20; ++n) {
            const auto bn = density_table_hyperplane(gen_modulated_wave(v, e, n));
            ASSERT_EQ(bn.size(), bv.size());
            for (const auto& [key, val] : bn.entries()) {
                EXPECT_LE(std::abs(val - bv.at(key.l, key.s + 2 * n * dot(e, key.l))), 1e-12);
            }
        }
    }
}

TEST(GenerateSequence, ScalesAndErrors) {
    auto spec = sphere_spec(6);
    const auto members = generate_sequence(spec);
    ASSERT_EQ(members.size(), 6u);
    for (const auto& m : members) {
        EXPECT_DOUBLE_EQ(m.h, 1.0 / m.n);
        EXPECT_EQ(m.state.modes().begin()->first.norm2(), static_cast<std::int64_t>(m.n) * m.n);
    }
    spec.lambdas = {1, 2, 3, 4, 5, 8};
    EXPECT_THROW(generate_sequence(spec), Error);

    auto wave = modulated_spec(4);
    wave.h.kind = ScaleRule::Kind::explicit_values;
    wave.h.values = {1.0, 0.5};
    EXPECT_THROW(generate_sequence(wave), Error);
    wave.h.values = {1.0, 0.5, 0.25, 0.0};
    EXPECT_THROW(generate_sequence(wave), Error);
    wave.h.kind = ScaleRule::Kind::inverse_sqrt_lambda;
    EXPECT_THROW(generate_sequence(wave), Error);
    wave.last = 0;
    EXPECT_THROW(generate_sequence(wave), Error);
}

TEST(ConditionS, ConstantSequenceIsNotConsistent) {
    SequenceSpec spec;
    spec.kind = SequenceKind::custom_list;
    spec.first = 1;
    spec.last = 10;
    spec.states.assign(10, make_state(1, {{Frequency{1}, 1.0}, {Frequency{-2}, 1.0}}));
    const auto r = condition_S_check(spec, {0.5, 0.25}, {2.0, 4.0});
    EXPECT_FALSE(r.consistent);
    EXPECT_DOUBLE_EQ(r.max_norm2, 2.0);
    // h = 1/n, trailing half n = 6..10: both modes satisfy |k| < delta n
    // at n = 10 for either delta.
    EXPECT_DOUBLE_EQ(r.low_proxy.front(), 2.0);
    EXPECT_DOUBLE_EQ(r.low_proxy.back(), 2.0);
    EXPECT_DOUBLE_EQ(r.high_proxy.back(), 0.0);
}

TEST(ConditionS, OscillatingSequencesAreConsistent) {
    const auto wave = condition_S_check(modulated_spec(50), {0.1, 0.5, 0.25}, {8.0, 2.0});
    EXPECT_TRUE(wave.consistent);
    EXPECT_EQ(wave.deltas, (std::vector<double>{0.5, 0.25, 0.1}));
    EXPECT_EQ(wave.Rs, (std::vector<double>{2.0, 8.0}));
    for (double x : wave.low_proxy) EXPECT_EQ(x, 0.0);

    const auto sphere = condition_S_check(sphere_spec(30), {0.5, 0.1}, {2.0});
    EXPECT_TRUE(sphere.consistent);
    EXPECT_NEAR(sphere.max_norm2, 1.0, 1e-14);

    EXPECT_THROW(condition_S_check(sphere_spec(4), {}, {2.0}), Error);
}

TEST(ResonanceMass, Examples) {
    const auto u = make_state(2, {{Frequency{0, 0}, 2.0}, {Frequency{3, 6}, 1.0}});
    EXPECT_DOUBLE_EQ(resonance_mass(u, 1), 4.0);
    EXPECT_DOUBLE_EQ(resonance_mass(u, 2), 5.0);
    EXPECT_THROW(resonance_mass(u, 0), Error);
    EXPECT_THROW(resonance_mass(u, 3), Error);
}

TEST(WindowEscape, ModulatedFixture) {
    EXPECT_EQ(window_escape_index(escape_profile(), Frequency{1, 0}, 5, 5), 11);
    // Oracle: scan n directly.
    int last = 0;
    for (int n = 1; n <= 40; ++n) {
        const auto t = density_table_hyperplane(gen_modulated_wave(escape_profile(), Frequency{1, 0}, n));
        for (const auto& [key, v] : t.entries()) {
            if (!key.l.is_zero() && in_window(key, 5, 5)) last = n;
        }
    }
    EXPECT_EQ(last, 11);
    // Chords orthogonal to e never escape and are skipped.
    const auto flat = make_state(2, {{Frequency{0, 0}, 1.0}, {Frequency{0, 1}, 1.0}});
    EXPECT_EQ(window_escape_index(flat, Frequency{1, 0}, 5, 5), 0);
}

TEST(WindowEscape, RandomProfilesAgainstScan) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto v = random_state(rng, 2, 5, 3, 2);
        const Frequency e = trial % 2 ? Frequency{1, 2} : Frequency{-1, 1};
        const auto want = window_escape_index(v, e, 3, 6);
        int last = 0;
        for (int n = 1; n <= 60; ++n) {
            for (const auto& [key, x] : density_table_bruteforce(gen_modulated_wave(v, e, n)).entries()) {
                if (dot(e, key.l) != 0 && in_window(key, 3, 6)) last = n;
            }
        }
        EXPECT_EQ(want, last);
    }
}

TEST(WeakStarTrend, ModulatedWaveSettles) {
    const auto rep = weak_star_trend(modulated_spec(30), 5, 5, {1.0, 2.0});
    ASSERT_EQ(rep.indices.size(), 30u);
    EXPECT_EQ(rep.max_convergence_gap(), 0.0);
    for (int n = 12; n <= 30; ++n) {
        const auto& t = rep.per_index.at(n);
        ASSERT_EQ(t.size(), 1u);
        EXPECT_NEAR(t.at(Frequency::zero(2), 0).real(), 1.0, 1e-15);
        EXPECT_NEAR(rep.partial_sums.at(n)[0], 1.0, 1e-15);
    }
    EXPECT_GT(rep.per_index.at(9).size(), 1u);
    EXPECT_THROW(weak_star_trend(modulated_spec(3), 5, 5, {2.0}), Error);
    EXPECT_THROW(weak_star_trend(modulated_spec(8), 0, 5, {2.0}), Error);
    EXPECT_THROW(weak_star_trend(modulated_spec(8), 5, 5, {0.5}), Error);
}

TEST(WeakStarTrend, SpherePartialSumsBounded) {
    const auto rep = weak_star_trend(sphere_spec(25), 5, 5, {3.0}, 3);
    for (int n : rep.indices) {
        EXPECT_LE(rep.partial_sums.at(n)[0], thm1_norm_constant(2) + 1e-12);
        for (const auto& [key, v] : rep.per_index.at(n).entries()) EXPECT_EQ(key.s, 0);
    }
    const auto serial = weak_star_trend(sphere_spec(25), 5, 5, {3.0}, 1);
    EXPECT_EQ(serial.partial_sums, rep.partial_sums);
}
