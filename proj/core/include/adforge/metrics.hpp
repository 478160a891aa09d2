#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

struct EvalPair {
    std::string id;
    std::string candidate;
    std::vector<std::string> references;  // non-empty
};

// Per-id scores and corpus means, one entry per requested metric.
struct ScoreReport {
    std::map<std::string, std::map<std::string, double>> per_id;  // metric -> id -> score
    std::map<std::string, double> corpus;                         // metric -> mean
    std::vector<std::string> warnings;
};

// Lowercase; every character outside letters, digits and word-internal
// apostrophes becomes a space; split on whitespace. Common UTF-8 punctuation
// (dashes, curly quotes, ellipsis) is treated as punctuation too.
std::vector<std::string> normalize_text(std::string_view text);

// LCS-based F-measure, max over references. P = LCS/|cand|, R = LCS/|ref|,
// F = (1+b^2)PR / (R + b^2 P), 0 when the LCS is empty.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references,
               double beta = 1.2);

// CIDEr-D over the corpus: per-n tf-idf vectors with document frequencies
// over the reference sets, min-clipped candidate terms, gaussian length
// penalty exp(-(|c|-|r|)^2 / (2 sigma^2)), averaged over n = 1..n_max, mean
// over references, times 10. A single-pair corpus has all-zero idf and scores
// 0 with a degenerate-corpus warning.
ScoreReport cider_d(const std::vector<EvalPair>& corpus,
                    std::size_t n_max = 4,
                    double sigma = 6.0);

// Normalize and score the corpus with the requested metrics
// ("rouge_l", "cider_d"); merges the per-metric reports.
ScoreReport score_corpus(const std::vector<EvalPair>& corpus,
                         const std::vector<std::string>& metrics);

}  // namespace adforge
