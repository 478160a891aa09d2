#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "adforge/curate.hpp"
#include "adforge/types.hpp"

namespace adforge {

// All stage parameters plus the input/output roots. Defaults follow the
// pipeline's documented values (threshold 0.95, narrator gate 95, min 100
// ADs, 5% pronoun rate, L=4 subtitles in a 60 s window).
struct PipelineConfig {
    double cluster_threshold = 0.95;
    std::string linkage = "average";
    std::string cluster_metric = "cosine";
    std::size_t min_narrator_segments = 95;
    std::string pronoun_lexicon_path;
    std::string abbreviations_path;
    int envelope_rate = 100;
    double min_sync_confidence = 0.10;
    std::size_t min_ads = 100;
    double max_pronoun_rate = 0.05;
    std::size_t context_k = 6;
    std::size_t context_l = 4;
    double window_s = 60.0;
    std::string window_anchor = "start";
    std::string variant = "both";  // named | unnamed | both
    std::string names_dir;
    std::vector<std::string> exclude_lists;  // paths to title lists
    bool anonymize_fallback = false;
    unsigned jobs = 1;
    bool strict = false;

    std::string manifest_path;
    std::string output_dir;

    void validate() const;  // throws std::invalid_argument on out-of-domain values
};

// Merge config-file values into a default-constructed config. Unknown keys
// are an error so typos do not silently fall back to defaults.
PipelineConfig config_from_json(std::string_view bytes);
std::string config_to_json(const PipelineConfig& config);

enum class MovieStatus { Ok, Failed, Excluded };

struct MovieResult {
    std::string movie_id;
    MovieStatus status = MovieStatus::Ok;
    std::string error;  // set when status == Failed
    FilterVerdict verdict;
    std::size_t ad_count = 0;
    std::size_t subtitle_count = 0;
    std::size_t context_count = 0;
    std::optional<double> tau_s;
    double elapsed_s = 0.0;
};

struct PipelineSummary {
    std::vector<MovieResult> movies;  // manifest order
    std::size_t ok = 0;
    std::size_t failed = 0;
    std::size_t excluded = 0;
};

// Run sentencize -> cluster -> narrator -> split -> (sync when reference
// audio is present) -> curate -> context for every manifest movie, writing
// per-stage artifacts under output_dir/<movie_id>/ and corpus-level
// verdicts.json + run_log.json. A movie failing any stage is recorded and
// skipped; the corpus run continues. Movies run on a worker pool of
// config.jobs threads; dataset files are byte-identical regardless.
PipelineSummary run_pipeline(const std::vector<MovieManifest>& manifest,
                             const PipelineConfig& config);

}  // namespace adforge
