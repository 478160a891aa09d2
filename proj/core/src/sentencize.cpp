#include "adforge/sentencize.hpp"

#include <algorithm>
#include <cctype>

namespace adforge {

namespace {

std::string strip_trailing_periods_lower(std::string_view word) {
    std::size_t end = word.size();
    while (end > 0 && word[end - 1] == '.') --end;
    std::string out(word.substr(0, end));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool ends_with_ellipsis(std::string_view word) {
    if (word.size() >= 3 && word.substr(word.size() - 3) == "...") return true;
    // U+2026 HORIZONTAL ELLIPSIS
    return word.size() >= 3 && word.substr(word.size() - 3) == "\xe2\x80\xa6";
}

bool starts_uppercase(std::string_view word) {
    // skip opening quotes/brackets
    std::size_t i = 0;
    while (i < word.size() && !std::isalpha(static_cast<unsigned char>(word[i])) &&
           static_cast<unsigned char>(word[i]) < 0x80)
        ++i;
    return i < word.size() && std::isupper(static_cast<unsigned char>(word[i]));
}

bool is_boundary(const std::vector<WordToken>& tokens, std::size_t i,
                 const std::set<std::string>& abbreviations) {
    const std::string& text = tokens[i].text;
    if (text.empty()) return false;

    if (ends_with_ellipsis(text)) {
        // trailing-off narration: close only before a capitalized token
        return i + 1 < tokens.size() && starts_uppercase(tokens[i + 1].text);
    }

    const char last = text.back();
    if (last != '.' && last != '!' && last != '?') return false;

    if (last == '.') {
        std::string stripped = strip_trailing_periods_lower(text);
        if (abbreviations.count(stripped) > 0) return false;
        // single letter = initials ("J." in "J. Smith")
        if (stripped.size() == 1 && std::isalpha(static_cast<unsigned char>(stripped[0])))
            return false;
    }
    return true;
}

}  // namespace

const std::set<std::string>& default_abbreviations() {
    static const std::set<std::string> abbrevs = {
        "mr", "mrs", "ms", "dr", "st", "vs", "etc", "e.g", "i.e",
        "jr", "sr", "prof", "no",
    };
    return abbrevs;
}

std::set<std::string> parse_word_list(std::string_view bytes) {
    std::set<std::string> out;
    std::size_t pos = 0;
    while (pos <= bytes.size()) {
        std::size_t nl = bytes.find('\n', pos);
        std::string_view line = bytes.substr(
            pos, nl == std::string_view::npos ? bytes.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? bytes.size() + 1 : nl + 1;

        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        std::string word(line.substr(b, e - b + 1));
        if (word[0] == '#') continue;
        std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        out.insert(std::move(word));
    }
    return out;
}

std::vector<SentenceSegment> segment_sentences(
    const std::vector<WordToken>& tokens,
    const std::set<std::string>& abbreviations) {
    std::vector<SentenceSegment> segments;
    if (tokens.empty()) return segments;

    std::size_t first = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const bool last_token = i + 1 == tokens.size();
        if (!last_token && !is_boundary(tokens, i, abbreviations)) continue;

        SentenceSegment seg;
        seg.first_word = first;
        seg.word_count = i - first + 1;
        seg.start_s = tokens[first].start_s;
        seg.end_s = tokens[i].end_s;
        for (std::size_t w = first; w <= i; ++w) {
            if (w > first) seg.text += ' ';
            seg.text += tokens[w].text;
        }
        segments.push_back(std::move(seg));
        first = i + 1;
    }
    return segments;
}

}  // namespace adforge
