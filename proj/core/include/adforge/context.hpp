#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

enum class WindowAnchor { Start, End };

// One training row: the target AD, its K immediately preceding ADs and the
// most recent L subtitles whose start falls inside the time window ending at
// the anchor. Both context lists are chronological.
struct ContextExample {
    std::string movie_id;
    ADRecord target;
    std::vector<ADRecord> past_ads;
    std::vector<SubtitleRecord> subtitles;
};

// One example per AD record, in order. Inputs must be time-sorted and from
// one movie.
std::vector<ContextExample> build_examples(const std::vector<ADRecord>& ads,
                                           const std::vector<SubtitleRecord>& subs,
                                           std::size_t k,
                                           std::size_t l,
                                           double window_s = 60.0,
                                           WindowAnchor anchor = WindowAnchor::Start);

// Join each context list into a single paragraph, single-space separated,
// appending '.' to any element lacking terminal punctuation.
std::pair<std::string, std::string> render_paragraphs(const ContextExample& example);

}  // namespace adforge
