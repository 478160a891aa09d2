#include "adforge/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "adforge/context.hpp"
#include "adforge/dataset_io.hpp"
#include "adforge/embeddings.hpp"
#include "adforge/sentencize.hpp"
#include "adforge/speaker.hpp"
#include "adforge/sync.hpp"
#include "adforge/transcript.hpp"
#include "adforge/wav.hpp"

namespace adforge {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sanitize_id(const std::string& movie_id) {
    std::string out = movie_id;
    for (char& c : out)
        if (c == '/' || c == '\\' || c == ':' || c == '\0') c = '_';
    return out;
}

std::set<std::string> load_name_list(const std::string& path) {
    std::set<std::string> names;
    const std::string bytes = read_file(path);
    std::size_t pos = 0;
    while (pos <= bytes.size()) {
        std::size_t nl = bytes.find('\n', pos);
        std::string line = bytes.substr(
            pos, nl == std::string::npos ? bytes.size() - pos : nl - pos);
        pos = nl == std::string::npos ? bytes.size() + 1 : nl + 1;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line[0] == '#') continue;
        names.insert(line);  // case preserved: names are surface forms
    }
    return names;
}

struct SharedInputs {
    std::set<std::string> pronoun_lexicon;
    std::set<std::string> abbreviations;
    std::vector<std::pair<std::string, std::set<std::string>>> exclusions;  // name, keys
};

SharedInputs load_shared(const PipelineConfig& config) {
    SharedInputs shared;
    shared.pronoun_lexicon = config.pronoun_lexicon_path.empty()
                                 ? default_pronoun_lexicon()
                                 : parse_word_list(read_file(config.pronoun_lexicon_path));
    shared.abbreviations = config.abbreviations_path.empty()
                               ? default_abbreviations()
                               : parse_word_list(read_file(config.abbreviations_path));
    for (const std::string& path : config.exclude_lists) {
        std::set<std::string> keys;
        const std::string bytes = read_file(path);
        std::size_t pos = 0;
        while (pos <= bytes.size()) {
            std::size_t nl = bytes.find('\n', pos);
            std::string line = bytes.substr(
                pos, nl == std::string::npos ? bytes.size() - pos : nl - pos);
            pos = nl == std::string::npos ? bytes.size() + 1 : nl + 1;
            std::string key = title_key(line);
            if (!key.empty()) keys.insert(std::move(key));
        }
        shared.exclusions.emplace_back(fs::path(path).stem().string(), std::move(keys));
    }
    return shared;
}

// Reorder embedding rows into segment order; segment_ids must cover 0..n-1.
std::vector<SpeakerEmbedding> embeddings_in_segment_order(
    std::vector<SpeakerEmbedding> embeddings, std::size_t segment_count) {
    if (embeddings.size() != segment_count)
        throw std::runtime_error("embeddings: " + std::to_string(embeddings.size()) +
                                 " rows for " + std::to_string(segment_count) +
                                 " sentences (one per sentence expected)");
    std::vector<SpeakerEmbedding> ordered(segment_count);
    std::vector<bool> seen(segment_count, false);
    for (SpeakerEmbedding& e : embeddings) {
        if (e.segment_id >= segment_count)
            throw std::runtime_error("embeddings: segment_id " +
                                     std::to_string(e.segment_id) + " out of range");
        if (seen[e.segment_id])
            throw std::runtime_error("embeddings: duplicate segment_id " +
                                     std::to_string(e.segment_id));
        seen[e.segment_id] = true;
        ordered[e.segment_id] = std::move(e);
    }
    return ordered;
}

MovieResult process_movie(const MovieManifest& entry, const PipelineConfig& config,
                          const SharedInputs& shared) {
    const auto t0 = std::chrono::steady_clock::now();
    MovieResult result;
    result.movie_id = entry.movie_id;
    const fs::path out_dir = fs::path(config.output_dir) / sanitize_id(entry.movie_id);

    try {
        // stage 2: sentences from the word-timestamped transcript
        const TranscriptFormat format =
            entry.transcript_format.empty()
                ? transcript_format_from_path(entry.transcript_path)
                : transcript_format_from_name(entry.transcript_format);
        const std::vector<WordToken> tokens =
            parse_word_transcript(read_file(entry.transcript_path), format);
        std::vector<SentenceSegment> sentences =
            segment_sentences(tokens, shared.abbreviations);
        if (sentences.empty()) throw std::runtime_error("transcript has no sentences");

        // stage 3: diarization over per-sentence embeddings
        const std::vector<SpeakerEmbedding> embeddings = embeddings_in_segment_order(
            load_embeddings(read_file(entry.embeddings_path)), sentences.size());
        const ClusterAssignment assignment = cluster_segments(
            embeddings, config.cluster_threshold, linkage_from_name(config.linkage),
            cluster_metric_from_name(config.cluster_metric));
        for (std::size_t i = 0; i < sentences.size(); ++i)
            sentences[i].speaker = assignment.labels[i];
        write_file_atomic((out_dir / "sentences.json").string(),
                          sentences_to_json(entry.movie_id, sentences));

        // stage 4: narrator identification
        const NarratorReport narrator = select_narrator(
            assignment, sentences, shared.pronoun_lexicon, config.min_narrator_segments);
        write_file_atomic((out_dir / "narrator.json").string(),
                          narrator_report_to_json(narrator));

        auto [ads, derived_subs] = split_streams(sentences, assignment,
                                                 narrator.narrator_cluster, entry.movie_id);

        // stage 5: clock alignment against the reference audio
        if (!entry.reference_audio_path.empty()) {
            if (entry.mixed_audio_path.empty())
                throw std::runtime_error("reference audio given but no mixed audio");
            const AudioTrack reference = load_audio(read_file(entry.reference_audio_path));
            const AudioTrack mixed = load_audio(read_file(entry.mixed_audio_path));
            const std::vector<double> ref_env = envelope(reference, config.envelope_rate);
            const std::vector<double> mix_env = envelope(mixed, config.envelope_rate);

            DelayEstimate delay;
            try {
                delay = estimate_delay(ref_env, mix_env, config.envelope_rate,
                                       config.min_sync_confidence);
            } catch (const sync_error& e) {
                write_file_atomic((out_dir / "delay.json").string(),
                                  delay_estimate_to_json(e.estimate(), false));
                throw;
            }
            write_file_atomic((out_dir / "delay.json").string(),
                              delay_estimate_to_json(delay, true));
            result.tau_s = delay.tau_s;

            ads = shift_records(ads, delay.tau_s).records;
            derived_subs = shift_records(derived_subs, delay.tau_s).records;
        }

        // official subtitles, when provided, take precedence for context
        std::vector<SubtitleRecord> context_subs = derived_subs;
        if (!entry.subtitles_path.empty()) {
            context_subs = parse_subtitles(read_file(entry.subtitles_path),
                                           transcript_format_from_path(entry.subtitles_path),
                                           entry.movie_id);
        }

        // curate: quality verdict, named/unnamed variants
        result.verdict = filter_movie(ads, shared.pronoun_lexicon, config.min_ads,
                                      config.max_pronoun_rate);
        result.verdict.movie_id = entry.movie_id;

        write_file_atomic((out_dir / "ad_named.csv").string(), to_csv(ads));
        write_file_atomic((out_dir / "ad_named.jsonl").string(), to_jsonl(ads));
        write_file_atomic((out_dir / "subtitles.csv").string(), to_csv(derived_subs));
        write_file_atomic((out_dir / "subtitles.jsonl").string(), to_jsonl(derived_subs));

        const bool want_unnamed = config.variant == "unnamed" || config.variant == "both";
        std::vector<ADRecord> unnamed;
        if (want_unnamed) {
            std::set<std::string> names;
            if (!entry.names_path.empty()) {
                names = load_name_list(entry.names_path);
            } else if (!config.names_dir.empty()) {
                const fs::path per_movie =
                    fs::path(config.names_dir) / (sanitize_id(entry.movie_id) + ".txt");
                if (fs::exists(per_movie)) names = load_name_list(per_movie.string());
            }
            unnamed = ads;
            for (ADRecord& r : unnamed) {
                r.text = anonymize_names(r.text, names);
                if (config.anonymize_fallback) r.text = anonymize_capitalized_fallback(r.text);
            }
            write_file_atomic((out_dir / "ad_unnamed.csv").string(), to_csv(unnamed));
            write_file_atomic((out_dir / "ad_unnamed.jsonl").string(), to_jsonl(unnamed));
        }

        // context windows per produced variant
        const WindowAnchor anchor =
            config.window_anchor == "end" ? WindowAnchor::End : WindowAnchor::Start;
        const std::vector<ContextExample> named_examples =
            build_examples(ads, context_subs, config.context_k, config.context_l,
                           config.window_s, anchor);
        write_file_atomic((out_dir / "context_named.jsonl").string(),
                          to_jsonl(named_examples));
        if (want_unnamed) {
            const std::vector<ContextExample> unnamed_examples =
                build_examples(unnamed, context_subs, config.context_k, config.context_l,
                               config.window_s, anchor);
            write_file_atomic((out_dir / "context_unnamed.jsonl").string(),
                              to_jsonl(unnamed_examples));
        }

        result.ad_count = ads.size();
        result.subtitle_count = derived_subs.size();
        result.context_count = named_examples.size();
        result.status = MovieStatus::Ok;
    } catch (const std::exception& e) {
        result.status = MovieStatus::Failed;
        result.error = e.what();
    }

    result.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string status_name(MovieStatus status) {
    switch (status) {
        case MovieStatus::Ok: return "ok";
        case MovieStatus::Failed: return "failed";
        default: return "excluded";
    }
}

void write_run_log(const PipelineConfig& config, const PipelineSummary& summary) {
    json movies = json::array();
    for (const MovieResult& r : summary.movies) {
        json m{{"movie_id", r.movie_id},
               {"status", status_name(r.status)},
               {"ad_count", r.ad_count},
               {"subtitle_count", r.subtitle_count},
               {"context_count", r.context_count},
               {"elapsed_s", r.elapsed_s}};
        if (!r.error.empty()) m["error"] = r.error;
        if (r.tau_s) m["tau_s"] = *r.tau_s;
        movies.push_back(std::move(m));
    }
    json log{{"manifest", config.manifest_path},
             {"config", json::parse(config_to_json(config))},
             {"movies", std::move(movies)},
             {"ok", summary.ok},
             {"failed", summary.failed},
             {"excluded", summary.excluded}};
    write_file_atomic((fs::path(config.output_dir) / "run_log.json").string(),
                      log.dump(2));
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(cluster_threshold > 0.0))
        throw std::invalid_argument("cluster_threshold must be positive");
    if (cluster_metric == "cosine" && cluster_threshold > 2.0)
        throw std::invalid_argument("cosine cluster_threshold must be in (0, 2]");
    linkage_from_name(linkage);
    cluster_metric_from_name(cluster_metric);
    if (envelope_rate < 1) throw std::invalid_argument("envelope_rate must be >= 1");
    if (min_sync_confidence < 0.0 || min_sync_confidence > 1.0)
        throw std::invalid_argument("min_sync_confidence must be in [0, 1]");
    if (max_pronoun_rate < 0.0 || max_pronoun_rate > 1.0)
        throw std::invalid_argument("max_pronoun_rate must be in [0, 1]");
    if (!(window_s > 0.0)) throw std::invalid_argument("window_s must be positive");
    if (window_anchor != "start" && window_anchor != "end")
        throw std::invalid_argument("window_anchor must be 'start' or 'end'");
    if (variant != "named" && variant != "unnamed" && variant != "both")
        throw std::invalid_argument("variant must be named, unnamed or both");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

PipelineConfig config_from_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw parse_error("config JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw parse_error("config JSON: expected an object");

    PipelineConfig config;
    for (const auto& [key, value] : doc.items()) {
        if (key == "cluster_threshold") config.cluster_threshold = value.get<double>();
        else if (key == "linkage") config.linkage = value.get<std::string>();
        else if (key == "cluster_metric") config.cluster_metric = value.get<std::string>();
        else if (key == "min_narrator_segments")
            config.min_narrator_segments = value.get<std::size_t>();
        else if (key == "pronoun_lexicon") config.pronoun_lexicon_path = value.get<std::string>();
        else if (key == "abbreviations") config.abbreviations_path = value.get<std::string>();
        else if (key == "envelope_rate") config.envelope_rate = value.get<int>();
        else if (key == "min_sync_confidence")
            config.min_sync_confidence = value.get<double>();
        else if (key == "min_ads") config.min_ads = value.get<std::size_t>();
        else if (key == "max_pronoun_rate") config.max_pronoun_rate = value.get<double>();
        else if (key == "k") config.context_k = value.get<std::size_t>();
        else if (key == "l") config.context_l = value.get<std::size_t>();
        else if (key == "window_s") config.window_s = value.get<double>();
        else if (key == "window_anchor") config.window_anchor = value.get<std::string>();
        else if (key == "variant") config.variant = value.get<std::string>();
        else if (key == "names_dir") config.names_dir = value.get<std::string>();
        else if (key == "exclude") config.exclude_lists = value.get<std::vector<std::string>>();
        else if (key == "anonymize_fallback") config.anonymize_fallback = value.get<bool>();
        else if (key == "jobs") config.jobs = value.get<unsigned>();
        else if (key == "strict") config.strict = value.get<bool>();
        else if (key == "manifest") config.manifest_path = value.get<std::string>();
        else if (key == "out") config.output_dir = value.get<std::string>();
        else throw parse_error("config JSON: unknown key '" + key + "'");
    }
    return config;
}

std::string config_to_json(const PipelineConfig& config) {
    json j{{"cluster_threshold", config.cluster_threshold},
           {"linkage", config.linkage},
           {"cluster_metric", config.cluster_metric},
           {"min_narrator_segments", config.min_narrator_segments},
           {"pronoun_lexicon", config.pronoun_lexicon_path},
           {"abbreviations", config.abbreviations_path},
           {"envelope_rate", config.envelope_rate},
           {"min_sync_confidence", config.min_sync_confidence},
           {"min_ads", config.min_ads},
           {"max_pronoun_rate", config.max_pronoun_rate},
           {"k", config.context_k},
           {"l", config.context_l},
           {"window_s", config.window_s},
           {"window_anchor", config.window_anchor},
           {"variant", config.variant},
           {"names_dir", config.names_dir},
           {"exclude", config.exclude_lists},
           {"anonymize_fallback", config.anonymize_fallback},
           {"jobs", config.jobs},
           {"strict", config.strict},
           {"manifest", config.manifest_path},
           {"out", config.output_dir}};
    return j.dump(2);
}

PipelineSummary run_pipeline(const std::vector<MovieManifest>& manifest,
                             const PipelineConfig& config) {
    config.validate();
    if (config.output_dir.empty())
        throw std::invalid_argument("run_pipeline: output_dir not set");
    fs::create_directories(config.output_dir);

    const SharedInputs shared = load_shared(config);

    PipelineSummary summary;
    summary.movies.resize(manifest.size());

    // exclusion first, so dropped movies never spend work
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        MovieResult& result = summary.movies[i];
        result.movie_id = manifest[i].movie_id;
        result.verdict.movie_id = manifest[i].movie_id;

        const std::string key = title_key(manifest[i].movie_id);
        bool excluded = false;
        for (const auto& [list_name, keys] : shared.exclusions) {
            if (keys.count(key) > 0) {
                result.status = MovieStatus::Excluded;
                result.verdict.kept = false;
                result.verdict.reasons.push_back(
                    {FilterReasonKind::ExcludedByList, 0, 0.0, list_name});
                excluded = true;
                break;
            }
        }
        if (!excluded) active.push_back(i);
    }

    const unsigned workers =
        std::max(1u, std::min<unsigned>(config.jobs,
                                        static_cast<unsigned>(active.size() == 0 ? 1 : active.size())));
    std::atomic<std::size_t> cursor{0};
    auto run_worker = [&]() {
        while (true) {
            const std::size_t slot = cursor.fetch_add(1);
            if (slot >= active.size()) break;
            const std::size_t idx = active[slot];
            summary.movies[idx] = process_movie(manifest[idx], config, shared);
        }
    };
    if (workers == 1) {
        run_worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_worker);
        for (std::thread& t : pool) t.join();
    }

    std::vector<FilterVerdict> verdicts;
    for (const MovieResult& r : summary.movies) {
        switch (r.status) {
            case MovieStatus::Ok: ++summary.ok; verdicts.push_back(r.verdict); break;
            case MovieStatus::Failed: ++summary.failed; break;
            default: ++summary.excluded; verdicts.push_back(r.verdict); break;
        }
    }
    write_file_atomic((fs::path(config.output_dir) / "verdicts.json").string(),
                      verdicts_to_json(verdicts));
    write_run_log(config, summary);
    return summary;
}

}  // namespace adforge
