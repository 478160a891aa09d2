#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

enum class FilterReasonKind { TooFewAds, PronounRateExceeded, ExcludedByList };

struct FilterReason {
    FilterReasonKind kind;
    std::size_t count = 0;    // TooFewAds
    double rate = 0.0;        // PronounRateExceeded
    std::string list_name;    // ExcludedByList
};

struct FilterVerdict {
    std::string movie_id;
    bool kept = true;
    std::vector<FilterReason> reasons;  // kept <=> reasons empty
};

// Replace every maximal, word-bounded, case-sensitive name match by
// "someone" (always lowercase, LSMDC style). Possessives fall out of the
// boundary rule: "Gatsby's" -> "someone's". Multi-word names are matched
// longest-first. Idempotent.
std::string anonymize_names(std::string_view text, const std::set<std::string>& names);

// Crude stand-in for NER when no name lexicon is available: replaces
// capitalized tokens that do not open a sentence. Off by default in the
// pipeline; enable explicitly.
std::string anonymize_capitalized_fallback(std::string_view text);

// Movie-level quality gate: rejects when the record count is below min_ads or
// the corpus-level pronoun token frequency exceeds max_pronoun_rate
// (boundary values kept). All records must share one movie_id.
FilterVerdict filter_movie(const std::vector<ADRecord>& records,
                           const std::set<std::string>& lexicon,
                           std::size_t min_ads = 100,
                           double max_pronoun_rate = 0.05);

// Title normalization: lowercase, punctuation stripped, whitespace collapsed,
// leading article (a/an/the) dropped, trailing 4-digit year dropped.
std::string title_key(std::string_view title);

// Drop manifest entries whose title_key is in `exclusion` (keys produced by
// the same keyer). Both outputs preserve input order.
std::pair<std::vector<MovieManifest>, std::vector<MovieManifest>> dedup_movies(
    const std::vector<MovieManifest>& manifest,
    const std::set<std::string>& exclusion);

}  // namespace adforge
