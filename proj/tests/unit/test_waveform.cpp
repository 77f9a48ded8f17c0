#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pulseforge/error.hpp"
#include "pulseforge/fft.hpp"
#include "pulseforge/metrics.hpp"
#include "pulseforge/phasing.hpp"
#include "pulseforge/waveform.hpp"

using namespace pulseforge;

TEST_CASE("single tone is a unit-energy constant") {
    const PulseSpec spec{1, 1, 1e5, 1};
    const auto pulse = synthesize(spec, PhaseCodeMatrix(1, 1, 0.7), WeightVector{{1.0}});
    REQUIRE(pulse.samples.size() == 1);
    CHECK(pulse.energy() == doctest::Approx(1.0).epsilon(1e-12));

    const auto tone = synthesize(PulseSpec{1, 1, 1e5, 16}, PhaseCodeMatrix(1, 1, 0.7), WeightVector{{1.0}});
    for (const auto& s : tone.samples) CHECK(std::abs(s) == doctest::Approx(std::abs(tone.samples[0])));
}

TEST_CASE("oversampled pulse decimates to the critically sampled one") {
    Rng rng(3);
    const auto codes = random_phases(3, 3, std::nullopt, rng);
    const auto full = SparsityMask::full(3);
    const auto w = uniform_weights(full);
    const auto fine = synthesize(PulseSpec{3, 3, 1e5, 20}, codes, w, full);
    const auto coarse = synthesize(PulseSpec{3, 3, 1e5, 1}, codes, w, full);
    REQUIRE(fine.samples.size() == 20 * coarse.samples.size());
    for (std::size_t p = 0; p < coarse.samples.size(); ++p)
        CHECK(std::abs(fine.samples[20 * p] - coarse.samples[p]) < 1e-9);
}

TEST_CASE("coherent sum peaks at the origin") {
    const auto pulse = synthesize(PulseSpec{4, 1, 1e5, 20}, noncoded_phases(4, 1), uniform_weights(SparsityMask::full(4)));
    std::size_t arg = 0;
    for (std::size_t p = 0; p < pulse.samples.size(); ++p)
        if (std::abs(pulse.samples[p]) > std::abs(pulse.samples[arg])) arg = p;
    CHECK(arg == 0);
    CHECK(pmepr(pulse) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("uniform weights") {
    const auto w = uniform_weights(SparsityMask::full(100));
    for (double v : w.values) CHECK(v == doctest::Approx(w.values[0]));
    CHECK(w.energy() == doctest::Approx(1.0));

    Rng rng(5);
    const auto mask = random_mask(100, 0.5, rng);
    const auto half = uniform_weights(mask);
    std::size_t nonzero = 0;
    for (std::size_t n = 0; n < 100; ++n) {
        CHECK((half.values[n] > 0.0) == mask[n]);
        nonzero += half.values[n] > 0.0;
    }
    CHECK(nonzero == 50);

    std::vector<bool> two(7, false);
    two.front() = two.back() = true;
    const auto pair = uniform_weights(SparsityMask(two));
    CHECK(pair.values.front() == doctest::Approx(pair.values.back()));
}

TEST_CASE("random masks keep the band edges") {
    Rng rng(9);
    const auto m = random_mask(100, 0.7, rng);
    CHECK(m.active_count() == 70);
    CHECK(m[0]);
    CHECK(m[99]);
    CHECK(random_mask(100, 1.0, rng).active_count() == 100);

    std::vector<int> hits(10, 0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto small = random_mask(10, 0.5, rng);
        REQUIRE(small.active_count() == 5);
        for (std::size_t n = 0; n < 10; ++n) hits[n] += small[n];
    }
    for (std::size_t n = 1; n < 9; ++n) CHECK(std::abs(hits[n] / double(draws) - 3.0 / 8.0) < 0.05);

    CHECK_THROWS_AS(SparsityMask(std::vector<bool>{false, true, true}), Error);
    CHECK_THROWS_AS(random_mask(10, 0.0, rng), Error);
}

TEST_CASE("energy normalization holds for random pulses") {
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t N = 2 + uniform_index(rng, 40);
        const std::size_t K = 1 + uniform_index(rng, 4);
        const std::size_t L = 1 + uniform_index(rng, 8);
        const PulseSpec spec{N, K, uniform(rng, 1e3, 1e6), L};
        const auto mask = random_mask(N, std::max(uniform(rng, 0.3, 1.0), 2.0 / double(N)), rng);
        WeightVector w;
        for (std::size_t n = 0; n < N; ++n) w.values.push_back(uniform(rng, 0.0, 3.0));
        w.values.front() += 0.1;
        const auto pulse = synthesize(spec, random_phases(N, K, std::nullopt, rng), w, mask);
        REQUIRE(pulse.energy() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("global phase and weight scale invariance") {
    Rng rng(21);
    const PulseSpec spec{12, 2, 1e5, 8};
    auto codes = random_phases(12, 2, std::nullopt, rng);
    WeightVector w;
    for (int n = 0; n < 12; ++n) w.values.push_back(uniform(rng, 0.1, 1.0));
    const auto base = synthesize(spec, codes, w);

    auto shifted = codes;
    for (auto& v : shifted.values()) v += 1.234;
    const auto rotated = synthesize(spec, shifted, w);
    const cplx rot = std::polar(1.0, 1.234);
    for (std::size_t p = 0; p < base.samples.size(); ++p) {
        CHECK(std::abs(rotated.samples[p]) == doctest::Approx(std::abs(base.samples[p])));
        CHECK(std::abs(rotated.samples[p] - rot * base.samples[p]) < 1e-9);
    }

    WeightVector scaled = w;
    for (auto& v : scaled.values) v *= 37.5;
    const auto same = synthesize(spec, codes, scaled);
    for (std::size_t p = 0; p < base.samples.size(); ++p) CHECK(std::abs(same.samples[p] - base.samples[p]) < 1e-12);
}

TEST_CASE("critically sampled single symbol recovers the weights") {
    Rng rng(2);
    const std::size_t N = 16;
    const PulseSpec spec{N, 1, 1e5, 1};
    std::vector<bool> on(N, true);
    on[3] = on[7] = false;
    const SparsityMask mask(on);
    WeightVector w;
    for (std::size_t n = 0; n < N; ++n) w.values.push_back(uniform(rng, 0.2, 1.0));
    const auto pulse = synthesize(spec, random_phases(N, 1, std::nullopt, rng), w, mask);

    auto bins = pulse.samples;
    fft::forward(bins);
    const auto eff = effective_weights(w, mask);
    double norm = 0.0;
    for (double v : eff) norm += v * v;
    // Amplitude ties the DFT magnitude to w / sqrt(sum w^2) through N*A*sqrt(t_b).
    const double scale = std::abs(bins[0]) / (eff[0] / std::sqrt(norm));
    for (std::size_t n = 0; n < N; ++n) CHECK(std::abs(bins[n]) / scale == doctest::Approx(eff[n] / std::sqrt(norm)).epsilon(1e-9));
}

TEST_CASE("shape errors") {
    const PulseSpec spec{4, 2, 1e5, 4};
    CHECK_THROWS_AS(synthesize(spec, PhaseCodeMatrix(4, 1), WeightVector{{1, 1, 1, 1}}), Error);
    CHECK_THROWS_AS(synthesize(spec, PhaseCodeMatrix(4, 2), WeightVector{{1, 1, 1}}), Error);
    CHECK_THROWS_AS(synthesize(spec, PhaseCodeMatrix(4, 2), WeightVector{{0, 0, 0, 0}}), Error);
    CHECK_THROWS_AS(PhaseCodeMatrix(2, 2, std::vector<double>{1.0}), Error);
}
