#include "adforge/curate.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "adforge/speaker.hpp"

namespace adforge {

namespace {

constexpr std::string_view kReplacement = "someone";

bool wordish(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

bool boundary_before(std::string_view text, std::size_t pos) {
    return pos == 0 || !wordish(static_cast<unsigned char>(text[pos - 1]));
}

bool boundary_after(std::string_view text, std::size_t end) {
    return end >= text.size() || !wordish(static_cast<unsigned char>(text[end]));
}

}  // namespace

std::string anonymize_names(std::string_view text, const std::set<std::string>& names) {
    if (names.empty()) return std::string(text);

    // longest first so "Leia Organa" beats "Leia"
    std::vector<std::string_view> ordered(names.begin(), names.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](std::string_view a, std::string_view b) { return a.size() > b.size(); });

    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const std::string_view rest = text.substr(i);
        std::string_view matched;
        if (boundary_before(text, i)) {
            for (std::string_view name : ordered) {
                if (name.empty() || rest.size() < name.size()) continue;
                if (rest.substr(0, name.size()) == name &&
                    boundary_after(text, i + name.size())) {
                    matched = name;
                    break;
                }
            }
        }
        if (!matched.empty()) {
            out += kReplacement;  // lowercase even sentence-initially (LSMDC style)
            i += matched.size();
        } else {
            out += text[i];
            ++i;
        }
    }
    return out;
}

std::string anonymize_capitalized_fallback(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool sentence_start = true;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (!wordish(c)) {
            if (c == '.' || c == '!' || c == '?') sentence_start = true;
            out += text[i];
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < text.size() && wordish(static_cast<unsigned char>(text[end]))) ++end;
        std::string_view word = text.substr(i, end - i);
        const bool capitalized = std::isupper(static_cast<unsigned char>(word[0])) != 0 &&
                                 word.size() >= 2;
        if (capitalized && !sentence_start)
            out += kReplacement;
        else
            out.append(word);
        sentence_start = false;
        i = end;
    }
    return out;
}

FilterVerdict filter_movie(const std::vector<ADRecord>& records,
                           const std::set<std::string>& lexicon, std::size_t min_ads,
                           double max_pronoun_rate) {
    FilterVerdict verdict;
    if (!records.empty()) {
        verdict.movie_id = records.front().movie_id;
        for (const ADRecord& r : records)
            if (r.movie_id != verdict.movie_id)
                throw std::invalid_argument("filter_movie: records span several movies");
    }

    if (records.size() < min_ads) {
        verdict.reasons.push_back(
            {FilterReasonKind::TooFewAds, records.size(), 0.0, {}});
    }

    std::size_t total = 0, hits = 0;
    for (const ADRecord& r : records) {
        for (const std::string& token : pronoun_tokens(r.text)) {
            ++total;
            if (lexicon.count(token) > 0) ++hits;
        }
    }
    const double rate = total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
    if (rate > max_pronoun_rate) {
        verdict.reasons.push_back({FilterReasonKind::PronounRateExceeded, 0, rate, {}});
    }

    verdict.kept = verdict.reasons.empty();
    return verdict;
}

std::string title_key(std::string_view title) {
    // lowercase + punctuation -> space
    std::string spaced;
    spaced.reserve(title.size());
    for (char ch : title) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c >= 0x80)
            spaced += static_cast<char>(std::tolower(c));
        else
            spaced += ' ';
    }

    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < spaced.size()) {
        while (i < spaced.size() && spaced[i] == ' ') ++i;
        std::size_t start = i;
        while (i < spaced.size() && spaced[i] != ' ') ++i;
        if (i > start) words.push_back(spaced.substr(start, i - start));
    }

    if (!words.empty() &&
        (words.front() == "a" || words.front() == "an" || words.front() == "the"))
        words.erase(words.begin());

    if (words.size() > 1 && words.back().size() == 4 &&
        std::all_of(words.back().begin(), words.back().end(),
                    [](unsigned char c) { return std::isdigit(c); }))
        words.pop_back();

    std::string key;
    for (const std::string& w : words) {
        if (!key.empty()) key += ' ';
        key += w;
    }
    return key;
}

std::pair<std::vector<MovieManifest>, std::vector<MovieManifest>> dedup_movies(
    const std::vector<MovieManifest>& manifest, const std::set<std::string>& exclusion) {
    std::vector<MovieManifest> kept, dropped;
    for (const MovieManifest& m : manifest) {
        if (exclusion.count(title_key(m.movie_id)) > 0)
            dropped.push_back(m);
        else
            kept.push_back(m);
    }
    return {std::move(kept), std::move(dropped)};
}

}  // namespace adforge
