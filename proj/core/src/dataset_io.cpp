#include "adforge/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include <json.hpp>

namespace adforge {

namespace {

using nlohmann::json;

std::string csv_quote(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// RFC 4180 line splitter; returns fields of one record starting at `pos`,
// advancing past the record's line terminator.
std::vector<std::string> csv_record(std::string_view bytes, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    while (pos < bytes.size()) {
        char c = bytes[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < bytes.size() && bytes[pos + 1] == '"') {
                    cur += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < bytes.size() && bytes[pos + 1] == '\n') ++pos;
            ++pos;
            fields.push_back(std::move(cur));
            return fields;
        } else {
            cur += c;
        }
        ++pos;
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double_field(const std::string& s, const char* what, long line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw parse_error(std::string("bad ") + what + " '" + s + "'", line);
    return v;
}

json ad_to_json(const ADRecord& r) {
    return json{{"movie_id", r.movie_id},
                {"start_s", r.start_s},
                {"end_s", r.end_s},
                {"text", r.text}};
}

json sub_to_json(const SubtitleRecord& r) {
    json j{{"movie_id", r.movie_id},
           {"start_s", r.start_s},
           {"end_s", r.end_s},
           {"text", r.text}};
    if (r.speaker) j["speaker"] = *r.speaker;
    return j;
}

ADRecord ad_from_json(const json& j, long line) {
    if (!j.is_object() || !j.contains("start_s") || !j.contains("end_s") ||
        !j.contains("text"))
        throw parse_error("AD record: expected {movie_id, start_s, end_s, text}", line);
    ADRecord r;
    r.movie_id = j.value("movie_id", "");
    r.start_s = j["start_s"].get<double>();
    r.end_s = j["end_s"].get<double>();
    r.text = j["text"].get<std::string>();
    return r;
}

SubtitleRecord sub_from_json(const json& j, long line) {
    if (!j.is_object() || !j.contains("start_s") || !j.contains("end_s") ||
        !j.contains("text"))
        throw parse_error("subtitle record: expected {movie_id, start_s, end_s, text}",
                          line);
    SubtitleRecord r;
    r.movie_id = j.value("movie_id", "");
    r.start_s = j["start_s"].get<double>();
    r.end_s = j["end_s"].get<double>();
    r.text = j["text"].get<std::string>();
    if (j.contains("speaker") && j["speaker"].is_number_integer())
        r.speaker = j["speaker"].get<int>();
    return r;
}

template <typename Fn>
void for_each_jsonl(std::string_view bytes, Fn&& fn) {
    std::size_t pos = 0;
    long line_no = 0;
    while (pos <= bytes.size()) {
        std::size_t nl = bytes.find('\n', pos);
        std::string_view line = bytes.substr(
            pos, nl == std::string_view::npos ? bytes.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? bytes.size() + 1 : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw parse_error("JSONL: " + std::string(e.what()), line_no);
        }
        fn(j, line_no);
    }
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        const bool space = c == ' ' || c == '\t' || c == '\n';
        if (!space && !in_word) ++count;
        in_word = !space;
    }
    return count;
}

json reason_to_json(const FilterReason& reason) {
    switch (reason.kind) {
        case FilterReasonKind::TooFewAds:
            return json{{"kind", "too_few_ads"}, {"count", reason.count}};
        case FilterReasonKind::PronounRateExceeded:
            return json{{"kind", "pronoun_rate_exceeded"}, {"rate", reason.rate}};
        default:
            return json{{"kind", "excluded_by_list"}, {"list", reason.list_name}};
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string to_csv(const std::vector<ADRecord>& records) {
    std::string out = "movie_id,start_s,end_s,text\n";
    for (const ADRecord& r : records) {
        out += csv_quote(r.movie_id);
        out += ',';
        out += format_double(r.start_s);
        out += ',';
        out += format_double(r.end_s);
        out += ',';
        out += csv_quote(r.text);
        out += '\n';
    }
    return out;
}

std::string to_csv(const std::vector<SubtitleRecord>& records) {
    std::string out = "movie_id,start_s,end_s,text,speaker\n";
    for (const SubtitleRecord& r : records) {
        out += csv_quote(r.movie_id);
        out += ',';
        out += format_double(r.start_s);
        out += ',';
        out += format_double(r.end_s);
        out += ',';
        out += csv_quote(r.text);
        out += ',';
        if (r.speaker) out += std::to_string(*r.speaker);
        out += '\n';
    }
    return out;
}

std::string to_jsonl(const std::vector<ADRecord>& records) {
    std::string out;
    for (const ADRecord& r : records) {
        out += ad_to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::string to_jsonl(const std::vector<SubtitleRecord>& records) {
    std::string out;
    for (const SubtitleRecord& r : records) {
        out += sub_to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::string to_jsonl(const std::vector<ContextExample>& examples) {
    std::string out;
    for (const ContextExample& ex : examples) {
        auto [ad_paragraph, sub_paragraph] = render_paragraphs(ex);
        json j{{"movie_id", ex.movie_id},
               {"target", {{"s", ex.target.start_s}, {"e", ex.target.end_s}, {"text", ex.target.text}}}};
        json past = json::array();
        for (const ADRecord& r : ex.past_ads)
            past.push_back({{"s", r.start_s}, {"e", r.end_s}, {"text", r.text}});
        json subs = json::array();
        for (const SubtitleRecord& r : ex.subtitles) {
            json s{{"s", r.start_s}, {"e", r.end_s}, {"text", r.text}};
            if (r.speaker) s["speaker"] = *r.speaker;
            subs.push_back(std::move(s));
        }
        j["past_ads"] = std::move(past);
        j["subtitles"] = std::move(subs);
        j["past_ad_paragraph"] = ad_paragraph;
        j["subtitle_paragraph"] = sub_paragraph;
        j["past_ad_word_count"] = word_count(ad_paragraph);
        j["subtitle_word_count"] = word_count(sub_paragraph);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<ADRecord> ad_records_from_jsonl(std::string_view bytes) {
    std::vector<ADRecord> records;
    for_each_jsonl(bytes, [&](const json& j, long line) {
        records.push_back(ad_from_json(j, line));
    });
    return records;
}

std::vector<SubtitleRecord> subtitle_records_from_jsonl(std::string_view bytes) {
    std::vector<SubtitleRecord> records;
    for_each_jsonl(bytes, [&](const json& j, long line) {
        records.push_back(sub_from_json(j, line));
    });
    return records;
}

std::vector<ADRecord> ad_records_from_csv(std::string_view bytes) {
    std::vector<ADRecord> records;
    std::size_t pos = 0;
    long line = 0;
    bool header = true;
    while (pos < bytes.size()) {
        std::vector<std::string> fields = csv_record(bytes, pos);
        ++line;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (header) {
            header = false;
            if (!fields.empty() && fields[0] == "movie_id") continue;
        }
        if (fields.size() < 4) throw parse_error("AD CSV: expected 4 fields", line);
        ADRecord r;
        r.movie_id = fields[0];
        r.start_s = parse_double_field(fields[1], "start_s", line);
        r.end_s = parse_double_field(fields[2], "end_s", line);
        r.text = fields[3];
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<SubtitleRecord> subtitle_records_from_csv(std::string_view bytes) {
    std::vector<SubtitleRecord> records;
    std::size_t pos = 0;
    long line = 0;
    bool header = true;
    while (pos < bytes.size()) {
        std::vector<std::string> fields = csv_record(bytes, pos);
        ++line;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (header) {
            header = false;
            if (!fields.empty() && fields[0] == "movie_id") continue;
        }
        if (fields.size() < 4) throw parse_error("subtitle CSV: expected 4+ fields", line);
        SubtitleRecord r;
        r.movie_id = fields[0];
        r.start_s = parse_double_field(fields[1], "start_s", line);
        r.end_s = parse_double_field(fields[2], "end_s", line);
        r.text = fields[3];
        if (fields.size() >= 5 && !fields[4].empty())
            r.speaker = static_cast<int>(parse_double_field(fields[4], "speaker", line));
        records.push_back(std::move(r));
    }
    return records;
}

std::string sentences_to_json(const std::string& movie_id,
                              const std::vector<SentenceSegment>& sentences) {
    json arr = json::array();
    for (const SentenceSegment& s : sentences) {
        json j{{"text", s.text},
               {"start_s", s.start_s},
               {"end_s", s.end_s},
               {"first_word", s.first_word},
               {"word_count", s.word_count}};
        if (s.speaker) j["speaker"] = *s.speaker;
        arr.push_back(std::move(j));
    }
    return json{{"movie_id", movie_id}, {"sentences", std::move(arr)}}.dump(2);
}

std::vector<SentenceSegment> sentences_from_json(std::string_view bytes,
                                                 std::string* movie_id) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw parse_error("sentences JSON: " + std::string(e.what()));
    }
    if (!doc.is_object() || !doc.contains("sentences") || !doc["sentences"].is_array())
        throw parse_error("sentences JSON: expected {movie_id, sentences: [...]}");
    if (movie_id != nullptr) *movie_id = doc.value("movie_id", "");

    std::vector<SentenceSegment> out;
    for (const json& j : doc["sentences"]) {
        SentenceSegment s;
        s.text = j.at("text").get<std::string>();
        s.start_s = j.at("start_s").get<double>();
        s.end_s = j.at("end_s").get<double>();
        s.first_word = j.value("first_word", 0u);
        s.word_count = j.value("word_count", 0u);
        if (j.contains("speaker") && j["speaker"].is_number_integer())
            s.speaker = j["speaker"].get<int>();
        out.push_back(std::move(s));
    }
    return out;
}

std::string narrator_report_to_json(const NarratorReport& report) {
    json clusters = json::array();
    for (const ClusterStats& s : report.clusters) {
        clusters.push_back({{"cluster", s.cluster},
                            {"segment_count", s.segment_count},
                            {"token_count", s.token_count},
                            {"pronoun_count", s.pronoun_count},
                            {"pronoun_ratio", s.pronoun_ratio}});
    }
    return json{{"narrator_cluster", report.narrator_cluster},
                {"clusters", std::move(clusters)}}
        .dump(2);
}

std::string delay_estimate_to_json(const DelayEstimate& estimate, bool applied) {
    return json{{"tau_s", estimate.tau_s},
                {"confidence", estimate.confidence},
                {"resolution_s", estimate.resolution_s},
                {"applied", applied}}
        .dump(2);
}

std::string verdicts_to_json(const std::vector<FilterVerdict>& verdicts) {
    json arr = json::array();
    for (const FilterVerdict& v : verdicts) {
        json reasons = json::array();
        for (const FilterReason& r : v.reasons) reasons.push_back(reason_to_json(r));
        arr.push_back({{"movie_id", v.movie_id}, {"kept", v.kept}, {"reasons", std::move(reasons)}});
    }
    return arr.dump(2);
}

std::vector<EvalPair> read_eval_pairs(std::string_view candidates_jsonl,
                                      std::string_view references_jsonl) {
    std::vector<EvalPair> pairs;
    std::map<std::string, std::size_t> index;

    for_each_jsonl(candidates_jsonl, [&](const json& j, long line) {
        if (!j.contains("id"))
            throw parse_error("candidates: missing id", line);
        std::string text;
        if (j.contains("text")) text = j["text"].get<std::string>();
        else if (j.contains("candidate")) text = j["candidate"].get<std::string>();
        else throw parse_error("candidates: missing text", line);
        EvalPair pair;
        pair.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
        pair.candidate = std::move(text);
        if (index.count(pair.id) > 0)
            throw parse_error("candidates: duplicate id '" + pair.id + "'", line);
        index[pair.id] = pairs.size();
        pairs.push_back(std::move(pair));
    });

    for_each_jsonl(references_jsonl, [&](const json& j, long line) {
        if (!j.contains("id")) throw parse_error("references: missing id", line);
        const std::string id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
        auto it = index.find(id);
        if (it == index.end()) return;  // references for unscored ids are fine
        if (j.contains("references") && j["references"].is_array()) {
            for (const json& r : j["references"])
                pairs[it->second].references.push_back(r.get<std::string>());
        } else if (j.contains("text")) {
            pairs[it->second].references.push_back(j["text"].get<std::string>());
        } else {
            throw parse_error("references: missing text", line);
        }
    });

    for (const EvalPair& pair : pairs)
        if (pair.references.empty())
            throw parse_error("candidate '" + pair.id + "' has no references");
    return pairs;
}

std::string score_report_to_json(const ScoreReport& report) {
    json per_id = json::object();
    for (const auto& [metric, scores] : report.per_id) {
        json m = json::object();
        for (const auto& [id, score] : scores) m[id] = score;
        per_id[metric] = std::move(m);
    }
    json corpus = json::object();
    for (const auto& [metric, score] : report.corpus) corpus[metric] = score;
    // external_scores stays empty here; downstream tooling merges model-based
    // metrics (SPICE, BertScore, ...) into it
    return json{{"corpus", std::move(corpus)},
                {"per_id", std::move(per_id)},
                {"warnings", report.warnings},
                {"external_scores", json::object()}}
        .dump(2);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp =
        target.parent_path() /
        (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

}  // namespace adforge
