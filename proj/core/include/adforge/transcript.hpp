#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

enum class TranscriptFormat { CanonicalJson, Srt, Vtt };

// "json" | "srt" | "vtt" (case-insensitive); throws parse_error otherwise.
TranscriptFormat transcript_format_from_name(std::string_view name);

// Guess from a file extension, defaulting to canonical JSON.
TranscriptFormat transcript_format_from_path(std::string_view path);

// Parse a word-timestamped transcript.
//
// Canonical JSON is an array of {"w": text, "s": start, "e": end[, "c": conf]}
// and must already be sorted by start time. SRT/VTT cues carry no per-word
// times, so word boundaries are interpolated across the cue span proportional
// to character length; cues are sorted by start time first, and overlapping
// cues (which would make word starts go backwards) are an error.
std::vector<WordToken> parse_word_transcript(std::string_view bytes,
                                             TranscriptFormat format);

// Serialize tokens back to the canonical JSON array. Round-trips exactly.
std::string serialize_word_transcript(const std::vector<WordToken>& tokens);

// Parse a subtitle file into records sorted by start time, formatting tags
// stripped. `movie_id` is stamped on every record.
std::vector<SubtitleRecord> parse_subtitles(std::string_view bytes,
                                            TranscriptFormat format,
                                            const std::string& movie_id = "");

}  // namespace adforge
