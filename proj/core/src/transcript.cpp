#include "adforge/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace adforge {

namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool has_internal_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

long line_of_offset(std::string_view bytes, std::size_t offset) {
    offset = std::min(offset, bytes.size());
    return 1 + std::count(bytes.begin(), bytes.begin() + static_cast<long>(offset), '\n');
}

std::vector<WordToken> parse_canonical_json(std::string_view bytes) {
    if (bytes.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};

    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw parse_error("transcript JSON: " + std::string(e.what()),
                          line_of_offset(bytes, e.byte));
    }
    if (!doc.is_array())
        throw parse_error("transcript JSON: expected a top-level array");

    std::vector<WordToken> tokens;
    tokens.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& item = doc[i];
        const std::string where = "transcript token " + std::to_string(i);
        if (!item.is_object() || !item.contains("w") || !item.contains("s") ||
            !item.contains("e"))
            throw parse_error(where + ": expected {\"w\", \"s\", \"e\"}");
        if (!item["w"].is_string() || !item["s"].is_number() || !item["e"].is_number())
            throw parse_error(where + ": malformed field types");

        WordToken token;
        token.text = item["w"].get<std::string>();
        token.start_s = item["s"].get<double>();
        token.end_s = item["e"].get<double>();
        if (item.contains("c")) {
            if (!item["c"].is_number())
                throw parse_error(where + ": malformed confidence");
            token.confidence = item["c"].get<double>();
        }

        if (token.text.empty())
            throw parse_error(where + ": empty word");
        if (has_internal_whitespace(token.text))
            throw parse_error(where + ": word contains whitespace");
        if (!std::isfinite(token.start_s) || !std::isfinite(token.end_s))
            throw parse_error(where + ": non-finite timestamp");
        if (token.start_s < 0)
            throw parse_error(where + ": negative start time");
        if (token.end_s < token.start_s)
            throw parse_error(where + ": end before start");
        if (token.confidence && (*token.confidence < 0.0 || *token.confidence > 1.0))
            throw parse_error(where + ": confidence outside [0,1]");
        if (!tokens.empty() && token.start_s < tokens.back().start_s)
            throw parse_error(where + ": start time decreases (overlapping words)");

        tokens.push_back(std::move(token));
    }
    return tokens;
}

struct Cue {
    double start_s = 0.0;
    double end_s = 0.0;
    std::string text;
    long line = 0;  // timing line, for error messages
};

// HH:MM:SS,mmm or HH:MM:SS.mmm; VTT also allows MM:SS.mmm.
double parse_cue_timestamp(std::string_view ts, long line) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : ts) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 2 && parts.size() != 3)
        throw parse_error("malformed timestamp '" + std::string(ts) + "'", line);

    double hours = 0.0;
    std::size_t idx = 0;
    auto to_int = [&](const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
                return std::isdigit(c);
            }))
            throw parse_error("malformed timestamp '" + std::string(ts) + "'", line);
        return std::stol(s);
    };
    if (parts.size() == 3) hours = static_cast<double>(to_int(parts[idx++]));
    double minutes = static_cast<double>(to_int(parts[idx++]));

    std::string sec = parts[idx];
    std::replace(sec.begin(), sec.end(), ',', '.');
    double seconds = 0.0;
    auto [ptr, ec] = std::from_chars(sec.data(), sec.data() + sec.size(), seconds);
    if (ec != std::errc() || ptr != sec.data() + sec.size() || seconds < 0.0)
        throw parse_error("malformed timestamp '" + std::string(ts) + "'", line);

    return hours * 3600.0 + minutes * 60.0 + seconds;
}

std::string strip_tags(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    int angle = 0, brace = 0;
    for (char c : text) {
        if (c == '<') ++angle;
        else if (c == '>' && angle > 0) --angle;
        else if (c == '{') ++brace;
        else if (c == '}' && brace > 0) --brace;
        else if (angle == 0 && brace == 0) out += c;
    }
    // collapse whitespace left behind by removed tags
    std::string collapsed;
    collapsed.reserve(out.size());
    bool in_space = false;
    for (char c : out) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
        } else {
            if (in_space && !collapsed.empty()) collapsed += ' ';
            in_space = false;
            collapsed += c;
        }
    }
    return collapsed;
}

std::vector<std::string> split_lines(std::string_view bytes) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : bytes) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t") == std::string::npos;
}

std::vector<Cue> parse_cues(std::string_view bytes, bool vtt) {
    std::vector<std::string> lines = split_lines(bytes);
    std::vector<Cue> cues;

    std::size_t i = 0;
    if (vtt) {
        while (i < lines.size() && is_blank(lines[i])) ++i;
        if (i >= lines.size()) return cues;
        if (lines[i].rfind("WEBVTT", 0) != 0)
            throw parse_error("missing WEBVTT header", static_cast<long>(i + 1));
        ++i;
    }

    while (i < lines.size()) {
        if (is_blank(lines[i])) {
            ++i;
            continue;
        }
        if (vtt && (lines[i].rfind("NOTE", 0) == 0 || lines[i].rfind("STYLE", 0) == 0 ||
                    lines[i].rfind("REGION", 0) == 0)) {
            while (i < lines.size() && !is_blank(lines[i])) ++i;
            continue;
        }
        // optional cue identifier / index line
        if (lines[i].find("-->") == std::string::npos) {
            ++i;
            if (i >= lines.size() || lines[i].find("-->") == std::string::npos)
                throw parse_error("expected a cue timing line", static_cast<long>(i));
        }

        const long timing_line = static_cast<long>(i + 1);
        const std::string& timing = lines[i];
        std::size_t arrow = timing.find("-->");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t");
            std::size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string left = trim(timing.substr(0, arrow));
        std::string right = trim(timing.substr(arrow + 3));
        // VTT cue settings follow the end timestamp
        if (std::size_t sp = right.find_first_of(" \t"); sp != std::string::npos)
            right = right.substr(0, sp);

        Cue cue;
        cue.line = timing_line;
        cue.start_s = parse_cue_timestamp(left, timing_line);
        cue.end_s = parse_cue_timestamp(right, timing_line);
        if (cue.end_s < cue.start_s)
            throw parse_error("cue end before start", timing_line);

        ++i;
        std::string text;
        while (i < lines.size() && !is_blank(lines[i])) {
            if (!text.empty()) text += ' ';
            text += lines[i];
            ++i;
        }
        cue.text = strip_tags(text);
        cues.push_back(std::move(cue));
    }

    std::stable_sort(cues.begin(), cues.end(),
                     [](const Cue& a, const Cue& b) { return a.start_s < b.start_s; });
    return cues;
}

// Word boundaries interpolated across the cue span proportional to character
// length; first word starts at the cue start, last word ends at the cue end.
void interpolate_cue_words(const Cue& cue, std::vector<WordToken>& out) {
    std::vector<std::string> words;
    std::istringstream iss(cue.text);
    std::string w;
    while (iss >> w) words.push_back(w);
    if (words.empty()) return;

    std::size_t total_chars = 0;
    for (const auto& word : words) total_chars += word.size();
    const double span = cue.end_s - cue.start_s;

    std::size_t cum = 0;
    for (const auto& word : words) {
        WordToken token;
        token.text = word;
        token.start_s =
            cue.start_s + span * (static_cast<double>(cum) / static_cast<double>(total_chars));
        cum += word.size();
        token.end_s =
            cue.start_s + span * (static_cast<double>(cum) / static_cast<double>(total_chars));
        out.push_back(std::move(token));
    }
}

}  // namespace

TranscriptFormat transcript_format_from_name(std::string_view name) {
    std::string n = lower(name);
    if (n == "json" || n == "canonical-json") return TranscriptFormat::CanonicalJson;
    if (n == "srt") return TranscriptFormat::Srt;
    if (n == "vtt" || n == "webvtt") return TranscriptFormat::Vtt;
    throw parse_error("unknown transcript format '" + std::string(name) + "'");
}

TranscriptFormat transcript_format_from_path(std::string_view path) {
    std::size_t dot = path.rfind('.');
    if (dot == std::string_view::npos) return TranscriptFormat::CanonicalJson;
    std::string ext = lower(path.substr(dot + 1));
    if (ext == "srt") return TranscriptFormat::Srt;
    if (ext == "vtt") return TranscriptFormat::Vtt;
    return TranscriptFormat::CanonicalJson;
}

std::vector<WordToken> parse_word_transcript(std::string_view bytes,
                                             TranscriptFormat format) {
    if (format == TranscriptFormat::CanonicalJson) return parse_canonical_json(bytes);

    std::vector<Cue> cues = parse_cues(bytes, format == TranscriptFormat::Vtt);
    std::vector<WordToken> tokens;
    for (const Cue& cue : cues) {
        std::size_t before = tokens.size();
        interpolate_cue_words(cue, tokens);
        if (before > 0 && tokens.size() > before &&
            tokens[before].start_s < tokens[before - 1].start_s)
            throw parse_error("overlapping cue makes word start times decrease",
                              cue.line);
    }
    return tokens;
}

std::string serialize_word_transcript(const std::vector<WordToken>& tokens) {
    json arr = json::array();
    for (const WordToken& token : tokens) {
        json item{{"w", token.text}, {"s", token.start_s}, {"e", token.end_s}};
        if (token.confidence) item["c"] = *token.confidence;
        arr.push_back(std::move(item));
    }
    return arr.dump();
}

std::vector<SubtitleRecord> parse_subtitles(std::string_view bytes,
                                            TranscriptFormat format,
                                            const std::string& movie_id) {
    std::vector<SubtitleRecord> records;

    if (format == TranscriptFormat::CanonicalJson) {
        if (bytes.find_first_not_of(" \t\r\n") == std::string_view::npos) return records;
        json doc;
        try {
            doc = json::parse(bytes);
        } catch (const json::parse_error& e) {
            throw parse_error("subtitle JSON: " + std::string(e.what()),
                              line_of_offset(bytes, e.byte));
        }
        if (!doc.is_array())
            throw parse_error("subtitle JSON: expected a top-level array");
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const json& item = doc[i];
            const std::string where = "subtitle record " + std::to_string(i);
            if (!item.is_object() || !item.contains("s") || !item.contains("e") ||
                !item.contains("text"))
                throw parse_error(where + ": expected {\"s\", \"e\", \"text\"}");
            if (!item["s"].is_number() || !item["e"].is_number() || !item["text"].is_string())
                throw parse_error(where + ": malformed field types");
            SubtitleRecord rec;
            rec.movie_id = movie_id;
            rec.start_s = item["s"].get<double>();
            rec.end_s = item["e"].get<double>();
            rec.text = item["text"].get<std::string>();
            if (rec.end_s < rec.start_s)
                throw parse_error(where + ": end before start");
            if (item.contains("speaker") && item["speaker"].is_number_integer())
                rec.speaker = item["speaker"].get<int>();
            records.push_back(std::move(rec));
        }
    } else {
        for (const Cue& cue : parse_cues(bytes, format == TranscriptFormat::Vtt)) {
            SubtitleRecord rec;
            rec.movie_id = movie_id;
            rec.start_s = cue.start_s;
            rec.end_s = cue.end_s;
            rec.text = cue.text;
            records.push_back(std::move(rec));
        }
    }

    std::stable_sort(records.begin(), records.end(),
                     [](const SubtitleRecord& a, const SubtitleRecord& b) {
                         return a.start_s < b.start_s;
                     });
    return records;
}

}  // namespace adforge
