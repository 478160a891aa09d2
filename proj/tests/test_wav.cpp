#include <doctest.h>

#include <cstring>

#include "adforge/wav.hpp"

using namespace adforge;

namespace {

void put_u32(std::string& s, std::uint32_t v) {
    s += static_cast<char>(v & 0xff);
    s += static_cast<char>((v >> 8) & 0xff);
    s += static_cast<char>((v >> 16) & 0xff);
    s += static_cast<char>((v >> 24) & 0xff);
}

void put_u16(std::string& s, std::uint16_t v) {
    s += static_cast<char>(v & 0xff);
    s += static_cast<char>((v >> 8) & 0xff);
}

std::string wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint16_t bits,
                      std::uint32_t rate, const std::string& data) {
    std::string s = "RIFF";
    put_u32(s, 36 + static_cast<std::uint32_t>(data.size()));
    s += "WAVEfmt ";
    put_u32(s, 16);
    put_u16(s, format);
    put_u16(s, channels);
    put_u32(s, rate);
    put_u32(s, rate * channels * bits / 8);
    put_u16(s, static_cast<std::uint16_t>(channels * bits / 8));
    put_u16(s, bits);
    s += "data";
    put_u32(s, static_cast<std::uint32_t>(data.size()));
    s += data;
    return s;
}

}  // namespace

TEST_SUITE("wav") {

TEST_CASE("16-bit sample 16384 scales to 0.5") {
    std::string data;
    put_u16(data, 16384);
    auto track = load_audio(wav_bytes(1, 1, 16, 8000, data));
    REQUIRE(track.samples.size() == 1);
    CHECK(track.sample_rate_hz == 8000);
    CHECK(track.samples[0] == doctest::Approx(0.5));
}

TEST_CASE("stereo downmixes by mean") {
    std::string data;
    float left = 0.2f, right = 0.6f;
    char buf[4];
    std::memcpy(buf, &left, 4);
    data.append(buf, 4);
    std::memcpy(buf, &right, 4);
    data.append(buf, 4);
    auto track = load_audio(wav_bytes(3, 2, 32, 44100, data));
    REQUIRE(track.samples.size() == 1);
    CHECK(track.samples[0] == doctest::Approx(0.4));
}

TEST_CASE("truncated data chunk is an error") {
    std::string data;
    put_u16(data, 1000);
    put_u16(data, 2000);
    std::string file = wav_bytes(1, 1, 16, 8000, data);
    file.resize(file.size() - 2);
    CHECK_THROWS_AS(load_audio(file), parse_error);
}

TEST_CASE("non-PCM compression is an error") {
    std::string data;
    put_u16(data, 0);
    CHECK_THROWS_AS(load_audio(wav_bytes(85, 1, 16, 8000, data)), parse_error);  // mp3
}

TEST_CASE("negative 16-bit samples scale by 1/32768") {
    std::string data;
    put_u16(data, static_cast<std::uint16_t>(-32768));
    auto track = load_audio(wav_bytes(1, 1, 16, 8000, data));
    CHECK(track.samples[0] == doctest::Approx(-1.0));
}

TEST_CASE("writer round-trips through the reader") {
    AudioTrack track;
    track.sample_rate_hz = 100;
    track.samples = {0.0f, 0.25f, -0.5f, 1.0f, -1.0f};
    auto back = load_audio(serialize_wav_pcm16(track));
    REQUIRE(back.samples.size() == track.samples.size());
    CHECK(back.sample_rate_hz == 100);
    for (std::size_t i = 0; i < track.samples.size(); ++i)
        CHECK(back.samples[i] == doctest::Approx(track.samples[i]).epsilon(1e-3));
}

}  // TEST_SUITE
