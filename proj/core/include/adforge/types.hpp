#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adforge {

// One transcribed word with start/end time in seconds.
struct WordToken {
    std::string text;
    double start_s = 0.0;
    double end_s = 0.0;
    std::optional<double> confidence;
};

// Final AD dataset row.
struct ADRecord {
    std::string movie_id;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string text;
};

// Subtitle / dialogue row. `speaker` is a diarization cluster id when the
// record came out of the speaker-split stage; unset for parsed subtitle files.
struct SubtitleRecord {
    std::string movie_id;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string text;
    std::optional<int> speaker;
};

// Fixed-dimension voice embedding keyed to one sentence segment.
struct SpeakerEmbedding {
    std::size_t segment_id = 0;
    std::vector<float> vector;
};

// Mono audio, samples in [-1, 1].
struct AudioTrack {
    std::vector<float> samples;
    int sample_rate_hz = 0;

    double duration_s() const {
        return sample_rate_hz > 0
                   ? static_cast<double>(samples.size()) / sample_rate_hz
                   : 0.0;
    }
};

// One movie's input files. Paths are resolved relative to the manifest file.
struct MovieManifest {
    std::string movie_id;
    std::string transcript_path;
    std::string transcript_format;  // "json" | "srt" | "vtt", empty = by extension
    std::string embeddings_path;
    std::string mixed_audio_path;      // optional unless sync is wanted
    std::string reference_audio_path;  // optional; presence enables sync
    std::string subtitles_path;        // optional official subtitles
    std::string names_path;            // optional character-name lexicon
};

// Error with an optional 1-based source line, for the line-oriented parsers.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")"
                                       : what),
          line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

}  // namespace adforge
