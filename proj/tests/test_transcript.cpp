#include <doctest.h>

#include <random>

#include "adforge/transcript.hpp"

using namespace adforge;

TEST_SUITE("transcript") {

TEST_CASE("canonical JSON maps 1:1") {
    auto tokens = parse_word_transcript(
        R"([{"w":"She","s":1.0,"e":1.2},{"w":"stands.","s":1.3,"e":1.7}])",
        TranscriptFormat::CanonicalJson);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].text == "She");
    CHECK(tokens[0].start_s == 1.0);
    CHECK(tokens[0].end_s == 1.2);
    CHECK(tokens[1].text == "stands.");
    CHECK(tokens[1].start_s == 1.3);
    CHECK(tokens[1].end_s == 1.7);
    CHECK_FALSE(tokens[0].confidence.has_value());
}

TEST_CASE("canonical JSON keeps confidence") {
    auto tokens = parse_word_transcript(R"([{"w":"hi","s":0.0,"e":0.5,"c":0.93}])",
                                        TranscriptFormat::CanonicalJson);
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].confidence == doctest::Approx(0.93));
}

TEST_CASE("empty file yields empty list") {
    CHECK(parse_word_transcript("", TranscriptFormat::CanonicalJson).empty());
    CHECK(parse_word_transcript("  \n", TranscriptFormat::CanonicalJson).empty());
    CHECK(parse_word_transcript("", TranscriptFormat::Srt).empty());
}

TEST_CASE("decreasing start times are rejected") {
    CHECK_THROWS_AS(parse_word_transcript(
                        R"([{"w":"b","s":2.0,"e":2.5},{"w":"a","s":1.0,"e":1.5}])",
                        TranscriptFormat::CanonicalJson),
                    parse_error);
}

TEST_CASE("invalid tokens are rejected") {
    CHECK_THROWS_AS(parse_word_transcript(R"([{"w":"","s":0,"e":1}])",
                                          TranscriptFormat::CanonicalJson),
                    parse_error);
    CHECK_THROWS_AS(parse_word_transcript(R"([{"w":"a b","s":0,"e":1}])",
                                          TranscriptFormat::CanonicalJson),
                    parse_error);
    CHECK_THROWS_AS(parse_word_transcript(R"([{"w":"a","s":1.0,"e":0.5}])",
                                          TranscriptFormat::CanonicalJson),
                    parse_error);
    CHECK_THROWS_AS(parse_word_transcript(R"([{"w":"a","s":"x","e":0.5}])",
                                          TranscriptFormat::CanonicalJson),
                    parse_error);
}

TEST_CASE("SRT words interpolate by character share") {
    const char* srt =
        "1\n"
        "00:00:01,000 --> 00:00:02,000\n"
        "ab cd\n";
    auto tokens = parse_word_transcript(srt, TranscriptFormat::Srt);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].text == "ab");
    CHECK(tokens[0].start_s == doctest::Approx(1.0));
    CHECK(tokens[0].end_s == doctest::Approx(1.5));
    CHECK(tokens[1].text == "cd");
    CHECK(tokens[1].start_s == doctest::Approx(1.5));
    CHECK(tokens[1].end_s == doctest::Approx(2.0));
}

TEST_CASE("SRT interpolation hits cue boundaries exactly") {
    const char* srt =
        "1\n"
        "00:00:03,250 --> 00:00:07,750\n"
        "one twoo threee\n";
    auto tokens = parse_word_transcript(srt, TranscriptFormat::Srt);
    REQUIRE(tokens.size() == 3);
    CHECK(tokens.front().start_s == 3.25);
    CHECK(tokens.back().end_s == 7.75);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        CHECK(tokens[i].start_s == tokens[i - 1].end_s);
        CHECK(tokens[i].start_s >= tokens[i - 1].start_s);
    }
}

TEST_CASE("SRT malformed timestamp reports the line") {
    const char* srt =
        "1\n"
        "00:00:xx,000 --> 00:00:02,000\n"
        "hello\n";
    try {
        parse_word_transcript(srt, TranscriptFormat::Srt);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("overlapping SRT cues are an error for word transcripts") {
    const char* srt =
        "1\n"
        "00:00:01,000 --> 00:00:04,000\n"
        "aa bb cc\n"
        "\n"
        "2\n"
        "00:00:02,000 --> 00:00:05,000\n"
        "dd\n";
    CHECK_THROWS_AS(parse_word_transcript(srt, TranscriptFormat::Srt), parse_error);
}

TEST_CASE("VTT transcripts parse") {
    const char* vtt =
        "WEBVTT\n"
        "\n"
        "00:01.000 --> 00:02.000 align:start\n"
        "ab cd\n";
    auto tokens = parse_word_transcript(vtt, TranscriptFormat::Vtt);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].start_s == doctest::Approx(1.0));
    CHECK(tokens[1].end_s == doctest::Approx(2.0));
}

TEST_CASE("round-trip: serialize then parse is identity") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dur(0.01, 0.8);
    std::uniform_int_distribution<int> word_len(1, 10);
    std::uniform_int_distribution<int> with_conf(0, 1);

    std::vector<WordToken> tokens;
    double t = 0.0;
    for (int i = 0; i < 200; ++i) {
        WordToken token;
        for (int c = 0; c < word_len(rng); ++c)
            token.text += static_cast<char>('a' + (rng() % 26));
        token.start_s = t;
        t += dur(rng);
        token.end_s = t;
        if (with_conf(rng)) token.confidence = 0.5 + 0.5 * dur(rng);
        t += dur(rng);
        tokens.push_back(std::move(token));
    }

    auto reparsed = parse_word_transcript(serialize_word_transcript(tokens),
                                          TranscriptFormat::CanonicalJson);
    REQUIRE(reparsed.size() == tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        CHECK(reparsed[i].text == tokens[i].text);
        CHECK(reparsed[i].start_s == tokens[i].start_s);
        CHECK(reparsed[i].end_s == tokens[i].end_s);
        CHECK(reparsed[i].confidence == tokens[i].confidence);
    }
}

TEST_CASE("parser outputs are non-decreasing in start time") {
    const char* srt =
        "2\n"
        "00:00:05,000 --> 00:00:06,000\n"
        "later cue\n"
        "\n"
        "1\n"
        "00:00:01,000 --> 00:00:02,000\n"
        "early cue\n";
    auto tokens = parse_word_transcript(srt, TranscriptFormat::Srt);
    for (std::size_t i = 1; i < tokens.size(); ++i)
        CHECK(tokens[i].start_s >= tokens[i - 1].start_s);

    auto subs = parse_subtitles(srt, TranscriptFormat::Srt, "m");
    for (std::size_t i = 1; i < subs.size(); ++i)
        CHECK(subs[i].start_s >= subs[i - 1].start_s);
}

TEST_CASE("subtitles: one cue, markup stripped, out-of-order sorted") {
    const char* srt =
        "1\n"
        "00:00:10,000 --> 00:00:12,500\n"
        "<i>Where are we?</i>\n"
        "\n"
        "2\n"
        "00:00:02,000 --> 00:00:03,000\n"
        "{\\an8}Hold on.\n";
    auto subs = parse_subtitles(srt, TranscriptFormat::Srt, "movie");
    REQUIRE(subs.size() == 2);
    CHECK(subs[0].start_s == doctest::Approx(2.0));
    CHECK(subs[0].text == "Hold on.");
    CHECK(subs[1].start_s == doctest::Approx(10.0));
    CHECK(subs[1].end_s == doctest::Approx(12.5));
    CHECK(subs[1].text == "Where are we?");
    CHECK(subs[1].movie_id == "movie");
}

TEST_CASE("multi-line cues join with spaces") {
    const char* srt =
        "1\n"
        "00:00:01,000 --> 00:00:02,000\n"
        "line one\n"
        "line two\n";
    auto subs = parse_subtitles(srt, TranscriptFormat::Srt);
    REQUIRE(subs.size() == 1);
    CHECK(subs[0].text == "line one line two");
}

TEST_CASE("format names resolve") {
    CHECK(transcript_format_from_name("srt") == TranscriptFormat::Srt);
    CHECK(transcript_format_from_name("VTT") == TranscriptFormat::Vtt);
    CHECK(transcript_format_from_name("json") == TranscriptFormat::CanonicalJson);
    CHECK(transcript_format_from_path("a/b.srt") == TranscriptFormat::Srt);
    CHECK(transcript_format_from_path("a/b.json") == TranscriptFormat::CanonicalJson);
    CHECK_THROWS_AS(transcript_format_from_name("ass"), parse_error);
}

}  // TEST_SUITE
