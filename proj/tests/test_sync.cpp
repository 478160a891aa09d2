#include <doctest.h>

#include <random>

#include "adforge/sync.hpp"
#include "support/oracles.hpp"

using namespace adforge;

namespace {

AudioTrack track_of(std::vector<float> samples, int rate) {
    AudioTrack t;
    t.samples = std::move(samples);
    t.sample_rate_hz = rate;
    return t;
}

std::vector<double> random_envelope(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> amp(0.0, 1.0);
    std::vector<double> env(n);
    for (double& x : env) x = amp(rng);
    return env;
}

}  // namespace

TEST_SUITE("sync") {

TEST_CASE("envelope of a constant signal is constant") {
    auto env = envelope(track_of(std::vector<float>(1000, 0.5f), 1000), 100);
    REQUIRE(env.size() == 100);
    for (double v : env) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("envelope of silence is zero") {
    auto env = envelope(track_of(std::vector<float>(500, 0.0f), 1000), 100);
    for (double v : env) CHECK(v == 0.0);
}

TEST_CASE("envelope: one second of silence then one second of 0.8") {
    std::vector<float> samples(2000, 0.0f);
    for (std::size_t i = 1000; i < 2000; ++i) samples[i] = 0.8f;
    auto env = envelope(track_of(samples, 1000), 100);
    REQUIRE(env.size() == 200);
    for (std::size_t i = 0; i < 100; ++i) CHECK(env[i] == 0.0);
    for (std::size_t i = 100; i < 200; ++i) CHECK(env[i] == doctest::Approx(0.8));
}

TEST_CASE("envelope length is ceil(duration * rate)") {
    auto env = envelope(track_of(std::vector<float>(1050, 0.2f), 1000), 100);
    CHECK(env.size() == 105);
    auto partial = envelope(track_of(std::vector<float>(1005, 0.2f), 1000), 100);
    CHECK(partial.size() == 101);  // last window holds 5 samples
    CHECK(partial.back() == doctest::Approx(0.2));
}

TEST_CASE("envelope rejects bad input") {
    CHECK_THROWS_AS(envelope(track_of({}, 1000), 100), std::invalid_argument);
    CHECK_THROWS_AS(envelope(track_of({0.1f}, 1000), 2000), std::invalid_argument);
    CHECK_THROWS_AS(envelope(track_of({0.1f}, 1000), 0), std::invalid_argument);
}

TEST_CASE("identical signals: tau 0, confidence 1") {
    std::mt19937 rng(5);
    auto env = random_envelope(rng, 400);
    auto estimate = estimate_delay(env, env, 100);
    CHECK(estimate.tau_s == 0.0);
    CHECK(estimate.confidence == doctest::Approx(1.0));
    CHECK(estimate.resolution_s == doctest::Approx(0.01));
}

TEST_CASE("1.50 s of prepended silence gives tau +1.50") {
    std::mt19937 rng(9);
    auto reference = random_envelope(rng, 500);
    std::vector<double> mixed(150, 0.0);
    mixed.insert(mixed.end(), reference.begin(), reference.end());

    auto estimate = estimate_delay(reference, mixed, 100);
    CHECK(estimate.tau_s == doctest::Approx(1.50).epsilon(0.01));
    CHECK(estimate.confidence > 0.5);
}

TEST_CASE("independent white noise fails the confidence gate") {
    std::mt19937 rng(13);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> a(2000), b(2000);
    for (double& x : a) x = noise(rng);
    for (double& x : b) x = noise(rng);

    try {
        estimate_delay(a, b, 100);
        FAIL("expected sync_error");
    } catch (const sync_error& e) {
        CHECK(e.estimate().confidence < 0.10);
    }
}

TEST_CASE("FFT correlation equals the direct sum to 1e-9 relative") {
    std::mt19937 rng(21);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (auto [la, lb] : {std::pair<std::size_t, std::size_t>{256, 256},
                          {100, 256},
                          {256, 37},
                          {1, 1},
                          {2, 255}}) {
        std::vector<double> a(la), b(lb);
        for (double& x : a) x = noise(rng);
        for (double& x : b) x = noise(rng);

        auto cc = cross_correlation_fft(a, b);
        long min_lag = 0;
        auto direct = oracle::direct_correlation(a, b, min_lag);
        REQUIRE(cc.min_lag == min_lag);
        REQUIRE(cc.values.size() == direct.size());

        double max_abs = 0.0;
        for (double v : direct) max_abs = std::max(max_abs, std::fabs(v));
        for (std::size_t i = 0; i < direct.size(); ++i)
            CHECK(std::fabs(cc.values[i] - direct[i]) <= 1e-9 * std::max(1.0, max_abs));
    }
}

TEST_CASE("property: antisymmetry of the estimated delay") {
    std::mt19937 rng(27);
    for (int trial = 0; trial < 5; ++trial) {
        auto base = random_envelope(rng, 600);
        std::vector<double> shifted(base.begin() + 40, base.end());

        auto forward = estimate_delay(base, shifted, 100);
        auto backward = estimate_delay(shifted, base, 100);
        CHECK(forward.tau_s == doctest::Approx(-backward.tau_s).epsilon(1e-9));
        CHECK(std::fabs(forward.tau_s - (-0.40)) <= forward.resolution_s);
    }
}

TEST_CASE("shift: tau 0 is the identity") {
    std::vector<ADRecord> records{{"m", 3.0, 4.0, "a"}, {"m", 8.0, 9.0, "b"}};
    auto result = shift_records(records, 0.0);
    CHECK(result.clamped.empty());
    CHECK(result.records[0].start_s == 3.0);
    CHECK(result.records[1].end_s == 9.0);
}

TEST_CASE("shift: positive tau moves records earlier") {
    std::vector<ADRecord> records{{"m", 10.0, 12.0, "a"}};
    auto result = shift_records(records, 2.0);
    CHECK(result.records[0].start_s == 8.0);
    CHECK(result.records[0].end_s == 10.0);
    CHECK(result.clamped.empty());
}

TEST_CASE("shift: clamping at zero warns per record") {
    std::vector<ADRecord> records{{"m", 1.0, 2.0, "a"}, {"m", 5.0, 6.0, "b"}};
    auto result = shift_records(records, 3.0);
    REQUIRE(result.clamped == std::vector<std::size_t>{0});
    CHECK(result.records[0].start_s == 0.0);
    CHECK(result.records[0].end_s == 0.0);
    CHECK(result.records[1].start_s == 2.0);
}

TEST_CASE("shift: inverse recovers the input when nothing clamps") {
    std::vector<ADRecord> records{{"m", 2.25, 3.5, "a"}, {"m", 7.75, 9.0, "b"}};
    auto shifted = shift_records(records, 1.5);
    REQUIRE(shifted.clamped.empty());
    auto back = shift_records(shifted.records, -1.5);
    REQUIRE(back.clamped.empty());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back.records[i].start_s == records[i].start_s);
        CHECK(back.records[i].end_s == records[i].end_s);
    }
}

TEST_CASE("shift preserves record order") {
    std::vector<SubtitleRecord> records{{"m", 4.0, 5.0, "x", 1}, {"m", 6.0, 7.0, "y", 2}};
    auto result = shift_records(records, -3.0);
    CHECK(result.records[0].text == "x");
    CHECK(result.records[0].start_s == 7.0);
    CHECK(result.records[1].start_s == 9.0);
    CHECK(result.records[0].speaker == 1);
}

}  // TEST_SUITE
