#include "adforge/context.hpp"

#include <algorithm>
#include <stdexcept>

namespace adforge {

std::vector<ContextExample> build_examples(const std::vector<ADRecord>& ads,
                                           const std::vector<SubtitleRecord>& subs,
                                           std::size_t k, std::size_t l,
                                           double window_s, WindowAnchor anchor) {
    if (!(window_s > 0.0)) throw std::invalid_argument("build_examples: window must be > 0");
    for (std::size_t i = 1; i < ads.size(); ++i)
        if (ads[i].start_s < ads[i - 1].start_s)
            throw std::invalid_argument("build_examples: ads not time-sorted");
    for (std::size_t i = 1; i < subs.size(); ++i)
        if (subs[i].start_s < subs[i - 1].start_s)
            throw std::invalid_argument("build_examples: subtitles not time-sorted");

    std::vector<ContextExample> examples;
    examples.reserve(ads.size());

    for (std::size_t i = 0; i < ads.size(); ++i) {
        ContextExample ex;
        ex.movie_id = ads[i].movie_id;
        ex.target = ads[i];

        const std::size_t first = i >= k ? i - k : 0;
        ex.past_ads.assign(ads.begin() + static_cast<long>(first),
                           ads.begin() + static_cast<long>(i));

        const double t = anchor == WindowAnchor::Start ? ads[i].start_s : ads[i].end_s;
        // most recent l subtitles starting inside [t - window, t]
        auto upper = std::upper_bound(
            subs.begin(), subs.end(), t,
            [](double value, const SubtitleRecord& s) { return value < s.start_s; });
        std::vector<SubtitleRecord> window;
        for (auto it = upper; it != subs.begin() && window.size() < l;) {
            --it;
            if (it->start_s < t - window_s) break;
            window.push_back(*it);
        }
        std::reverse(window.begin(), window.end());
        ex.subtitles = std::move(window);

        examples.push_back(std::move(ex));
    }
    return examples;
}

namespace {

std::string join_terminated(const std::vector<std::string>& texts) {
    std::string out;
    for (const std::string& text : texts) {
        if (text.empty()) continue;
        if (!out.empty()) out += ' ';
        out += text;
        const char last = text.back();
        if (last != '.' && last != '!' && last != '?') out += '.';
    }
    return out;
}

}  // namespace

std::pair<std::string, std::string> render_paragraphs(const ContextExample& example) {
    std::vector<std::string> ad_texts, sub_texts;
    ad_texts.reserve(example.past_ads.size());
    for (const ADRecord& r : example.past_ads) ad_texts.push_back(r.text);
    sub_texts.reserve(example.subtitles.size());
    for (const SubtitleRecord& r : example.subtitles) sub_texts.push_back(r.text);
    return {join_terminated(ad_texts), join_terminated(sub_texts)};
}

}  // namespace adforge
