// Brute-force reference implementations used only by tests. These transcribe
// the target formulas directly and share no code with the library: clustering
// recomputes every cluster distance from scratch each merge, the LCS is found
// by subsequence enumeration, and CIDEr-D works on token-vector keyed maps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// average-linkage agglomerative clustering, exhaustive recompute
// ---------------------------------------------------------------------------

inline double cosine_dist(const std::vector<float>& a, const std::vector<float>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
    return std::min(2.0, std::max(0.0, d));
}

// labels ordered by first occurrence, merges while min average distance is
// below threshold, ties toward the lexicographically smallest
// (min member, min member) pair
inline std::vector<int> average_linkage_labels(const std::vector<std::vector<float>>& rows,
                                               double threshold) {
    const std::size_t n = rows.size();
    std::vector<std::vector<double>> base(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            base[i][j] = base[j][i] = cosine_dist(rows[i], rows[j]);

    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});

    while (clusters.size() > 1) {
        double best = 0.0;
        std::size_t best_a = 0, best_b = 0;
        bool have = false;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                double sum = 0.0;
                for (std::size_t i : clusters[a])
                    for (std::size_t j : clusters[b]) sum += base[i][j];
                const double d =
                    sum / (static_cast<double>(clusters[a].size()) * clusters[b].size());
                std::size_t lo = std::min(clusters[a].front(), clusters[b].front());
                std::size_t hi = std::max(clusters[a].front(), clusters[b].front());
                std::size_t cur_lo = std::min(clusters[best_a].front(), clusters[best_b].front());
                std::size_t cur_hi = std::max(clusters[best_a].front(), clusters[best_b].front());
                if (!have || d < best ||
                    (d == best && (lo < cur_lo || (lo == cur_lo && hi < cur_hi)))) {
                    have = true;
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (!have || !(best < threshold)) break;
        std::vector<std::size_t> merged = clusters[best_a];
        merged.insert(merged.end(), clusters[best_b].begin(), clusters[best_b].end());
        std::sort(merged.begin(), merged.end());
        clusters.erase(clusters.begin() + static_cast<long>(best_b));
        clusters[best_a] = std::move(merged);
    }

    std::vector<int> cluster_of(n, -1);
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (std::size_t i : clusters[c]) cluster_of[i] = static_cast<int>(c);

    std::vector<int> labels(n, -1);
    std::map<int, int> dense;
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, fresh] = dense.try_emplace(cluster_of[i], next);
        if (fresh) ++next;
        labels[i] = it->second;
    }
    return labels;
}

// ---------------------------------------------------------------------------
// ROUGE-L via exponential subsequence enumeration (tokens <= ~16)
// ---------------------------------------------------------------------------

inline bool is_subsequence(const std::vector<std::string>& needle,
                           const std::vector<std::string>& hay) {
    std::size_t i = 0;
    for (const std::string& h : hay) {
        if (i < needle.size() && needle[i] == h) ++i;
    }
    return i == needle.size();
}

inline std::size_t lcs_by_enumeration(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (mask & (1u << i)) sub.push_back(a[i]);
        if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
    }
    return best;
}

inline double rouge_l(const std::vector<std::string>& cand,
                      const std::vector<std::vector<std::string>>& refs,
                      double beta = 1.2) {
    double best = 0.0;
    for (const auto& ref : refs) {
        const double lcs = static_cast<double>(lcs_by_enumeration(cand, ref));
        if (lcs == 0.0 || cand.empty() || ref.empty()) continue;
        const double p = lcs / static_cast<double>(cand.size());
        const double r = lcs / static_cast<double>(ref.size());
        const double f = (1.0 + beta * beta) * p * r / (r + beta * beta * p);
        best = std::max(best, f);
    }
    return best;
}

// ---------------------------------------------------------------------------
// CIDEr-D, token-vector keyed direct transcription
// ---------------------------------------------------------------------------

using Tokens = std::vector<std::string>;
using Ngram = std::vector<std::string>;

inline Tokens split_ws(const std::string& text) {
    Tokens out;
    std::istringstream iss(text);
    std::string w;
    while (iss >> w) out.push_back(w);
    return out;
}

inline std::map<Ngram, double> ngrams_of(const Tokens& tokens, std::size_t n) {
    std::map<Ngram, double> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        counts[Ngram(tokens.begin() + static_cast<long>(i),
                     tokens.begin() + static_cast<long>(i + n))] += 1.0;
    return counts;
}

struct CiderPair {
    std::string candidate;
    std::vector<std::string> references;
};

// per-pair CIDEr-D scores; texts must already be normalized (plain lowercase
// tokens separated by single spaces)
inline std::vector<double> cider_d(const std::vector<CiderPair>& corpus,
                                   std::size_t n_max = 4, double sigma = 6.0) {
    const std::size_t big_n = corpus.size();

    std::map<Ngram, double> df;
    for (const CiderPair& pair : corpus) {
        std::set<Ngram> seen;
        for (const std::string& ref : pair.references) {
            const Tokens tokens = split_ws(ref);
            for (std::size_t n = 1; n <= n_max; ++n)
                for (const auto& [g, c] : ngrams_of(tokens, n)) seen.insert(g);
        }
        for (const Ngram& g : seen) df[g] += 1.0;
    }

    auto weight = [&](const Ngram& g, double count) {
        const double d = df.count(g) ? std::max(1.0, df.at(g)) : 1.0;
        return count * (std::log(static_cast<double>(big_n)) - std::log(d));
    };

    std::vector<double> scores;
    for (const CiderPair& pair : corpus) {
        const Tokens cand = split_ws(pair.candidate);
        double ref_total = 0.0;
        for (const std::string& ref_text : pair.references) {
            const Tokens ref = split_ws(ref_text);
            const double delta =
                static_cast<double>(cand.size()) - static_cast<double>(ref.size());
            const double penalty = std::exp(-delta * delta / (2.0 * sigma * sigma));
            double acc = 0.0;
            for (std::size_t n = 1; n <= n_max; ++n) {
                const auto cgrams = ngrams_of(cand, n);
                const auto rgrams = ngrams_of(ref, n);
                double dot = 0.0, cnorm = 0.0, rnorm = 0.0;
                for (const auto& [g, c] : cgrams) {
                    const double cw = weight(g, c);
                    cnorm += cw * cw;
                    if (rgrams.count(g)) dot += std::min(cw, weight(g, rgrams.at(g))) *
                                                 weight(g, rgrams.at(g));
                }
                for (const auto& [g, c] : rgrams) {
                    const double rw = weight(g, c);
                    rnorm += rw * rw;
                }
                double val = dot;
                if (cnorm > 0.0 && rnorm > 0.0) val /= std::sqrt(cnorm) * std::sqrt(rnorm);
                acc += val * penalty;
            }
            ref_total += acc / static_cast<double>(n_max);
        }
        scores.push_back(ref_total / static_cast<double>(pair.references.size()) * 10.0);
    }
    return scores;
}

// ---------------------------------------------------------------------------
// direct O(n^2) cross-correlation: c(k) = sum_t a[t] b[t+k]
// ---------------------------------------------------------------------------

inline std::vector<double> direct_correlation(const std::vector<double>& a,
                                              const std::vector<double>& b,
                                              long& min_lag) {
    min_lag = -(static_cast<long>(a.size()) - 1);
    const long max_lag = static_cast<long>(b.size()) - 1;
    std::vector<double> out(static_cast<std::size_t>(max_lag - min_lag + 1), 0.0);
    for (long k = min_lag; k <= max_lag; ++k) {
        double acc = 0.0;
        for (long t = 0; t < static_cast<long>(a.size()); ++t) {
            const long u = t + k;
            if (u < 0 || u >= static_cast<long>(b.size())) continue;
            acc += a[static_cast<std::size_t>(t)] * b[static_cast<std::size_t>(u)];
        }
        out[static_cast<std::size_t>(k - min_lag)] = acc;
    }
    return out;
}

}  // namespace oracle
