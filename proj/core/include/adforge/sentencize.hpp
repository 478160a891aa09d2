#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

// A tokenized sentence spanning a contiguous run of word tokens.
// start_s/end_s are the first word's start and the last word's end.
struct SentenceSegment {
    std::string text;          // words joined with single spaces
    double start_s = 0.0;
    double end_s = 0.0;
    std::size_t first_word = 0;
    std::size_t word_count = 0;
    std::optional<int> speaker;  // cluster id, filled by the speaker stage
};

// Default English abbreviation list (lowercase, no trailing period).
const std::set<std::string>& default_abbreviations();

// Rule-based sentence splitter. A boundary is placed after any token ending
// in '.', '!' or '?' unless the token (lowercased, trailing periods stripped)
// is in the abbreviation set or is a single letter (initials). A trailing
// ellipsis ("..." or U+2026) terminates only if the next token starts with an
// uppercase letter. Trailing tokens with no terminal form the final sentence.
std::vector<SentenceSegment> segment_sentences(
    const std::vector<WordToken>& tokens,
    const std::set<std::string>& abbreviations = default_abbreviations());

// Newline-delimited word list, '#' comments and blank lines skipped,
// entries lowercased. Used for abbreviation and pronoun-lexicon overrides.
std::set<std::string> parse_word_list(std::string_view bytes);

}  // namespace adforge
