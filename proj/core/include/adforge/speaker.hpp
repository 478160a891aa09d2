#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adforge/sentencize.hpp"
#include "adforge/types.hpp"

namespace adforge {

enum class Linkage { Average, Single, Complete };
enum class ClusterMetric { Cosine, Euclidean };

Linkage linkage_from_name(std::string_view name);
ClusterMetric cluster_metric_from_name(std::string_view name);

// Per-segment cluster labels, dense 0..k-1 ordered by first occurrence.
struct ClusterAssignment {
    std::vector<int> labels;
    int k = 0;
};

struct ClusterStats {
    int cluster = 0;
    std::size_t segment_count = 0;
    std::size_t token_count = 0;
    std::size_t pronoun_count = 0;
    double pronoun_ratio = 0.0;
};

struct NarratorReport {
    int narrator_cluster = -1;
    std::vector<ClusterStats> clusters;
};

// "no narrator found", carrying the per-cluster stats for audit.
class narrator_error : public std::runtime_error {
public:
    narrator_error(const std::string& what, std::vector<ClusterStats> stats)
        : std::runtime_error(what), stats_(std::move(stats)) {}

    const std::vector<ClusterStats>& stats() const { return stats_; }

private:
    std::vector<ClusterStats> stats_;
};

// 1 - a.b / (|a||b|), in [0, 2]. Throws on dimension mismatch or zero norm.
double cosine_distance(std::span<const float> a, std::span<const float> b);

// Agglomerative clustering of the embedding rows. Merging proceeds while the
// minimum inter-cluster distance is below `threshold`; ties on merge distance
// break toward the pair with the smaller (min member index, min member index)
// key. Average linkage recomputes cluster distances as the mean over all
// cross pairs of the base metric.
ClusterAssignment cluster_segments(const std::vector<SpeakerEmbedding>& embeddings,
                                   double threshold,
                                   Linkage linkage = Linkage::Average,
                                   ClusterMetric metric = ClusterMetric::Cosine);

// First- and second-person pronouns (lowercase).
const std::set<std::string>& default_pronoun_lexicon();

// Normalization used by every pronoun count: lowercase, strip leading and
// trailing punctuation, split contractions at apostrophes (the suffix keeps
// its apostrophe, so "I'm" yields "i" and "'m").
std::vector<std::string> pronoun_tokens(std::string_view text);

// Lexicon hits / total normalized tokens over the segments; 0 if no tokens.
double pronoun_ratio(const std::vector<SentenceSegment>& segments,
                     const std::set<std::string>& lexicon = default_pronoun_lexicon());

// Among clusters with segment_count >= min_segments, pick the one with the
// lowest pronoun ratio; ties break by larger segment count, then lower id.
// Throws narrator_error when no cluster reaches the gate.
NarratorReport select_narrator(const ClusterAssignment& assignment,
                               const std::vector<SentenceSegment>& segments,
                               const std::set<std::string>& lexicon = default_pronoun_lexicon(),
                               std::size_t min_segments = 95);

// Narrator-cluster sentences become ADRecords, everything else becomes
// SubtitleRecords tagged with their cluster id; both sorted by start time.
std::pair<std::vector<ADRecord>, std::vector<SubtitleRecord>> split_streams(
    const std::vector<SentenceSegment>& segments,
    const ClusterAssignment& assignment,
    int narrator_cluster,
    const std::string& movie_id);

}  // namespace adforge
