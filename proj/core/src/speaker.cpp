#include "adforge/speaker.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adforge {

namespace {

// Upper-triangle index for i < j over n slots.
inline std::size_t tri_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double base_distance(const SpeakerEmbedding& a, const SpeakerEmbedding& b,
                     ClusterMetric metric) {
    if (metric == ClusterMetric::Cosine)
        return cosine_distance(a.vector, b.vector);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.vector.size(); ++i) {
        double d = static_cast<double>(a.vector[i]) - b.vector[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Agglomerative merge state. Slots keep their original row index; a merge
// folds the larger slot into the smaller one, so an active slot's index is
// always its minimum member index — which is exactly the tie-break key.
class MergeState {
public:
    MergeState(std::size_t n, Linkage linkage)
        : n_(n), linkage_(linkage), pair_(n > 1 ? n * (n - 1) / 2 : 0),
          size_(n, 1), members_(n), nn_partner_(n, -1),
          nn_dist_(n, std::numeric_limits<double>::infinity()) {
        for (std::size_t i = 0; i < n; ++i) members_[i] = {i};
    }

    void set_base(std::size_t i, std::size_t j, double d) { pair_[tri_index(n_, i, j)] = d; }

    bool active(std::size_t i) const { return size_[i] > 0; }

    double distance(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        double v = pair_[tri_index(n_, i, j)];
        if (linkage_ == Linkage::Average)
            return v / (static_cast<double>(size_[i]) * static_cast<double>(size_[j]));
        return v;
    }

    // (d1, pair {a1,b1}) strictly better than (d2, pair {a2,b2})
    static bool better(double d1, std::size_t a1, std::size_t b1, double d2,
                       std::size_t a2, std::size_t b2) {
        if (a1 > b1) std::swap(a1, b1);
        if (a2 > b2) std::swap(a2, b2);
        if (d1 != d2) return d1 < d2;
        if (a1 != a2) return a1 < a2;
        return b1 < b2;
    }

    void recompute_nn(std::size_t i) {
        nn_partner_[i] = -1;
        nn_dist_[i] = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i || !active(j)) continue;
            double d = distance(i, j);
            if (nn_partner_[i] < 0 ||
                better(d, i, j, nn_dist_[i], i, static_cast<std::size_t>(nn_partner_[i])))
            {
                nn_partner_[i] = static_cast<int>(j);
                nn_dist_[i] = d;
            }
        }
    }

    void init_nn() {
        for (std::size_t i = 0; i < n_; ++i) recompute_nn(i);
    }

    // best active pair, or partner < 0 when fewer than two clusters remain
    std::tuple<double, std::size_t, int> best_pair() const {
        double bd = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        int bj = -1;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!active(i) || nn_partner_[i] < 0) continue;
            if (bj < 0 || better(nn_dist_[i], i, static_cast<std::size_t>(nn_partner_[i]),
                                 bd, bi, static_cast<std::size_t>(bj))) {
                bd = nn_dist_[i];
                bi = i;
                bj = nn_partner_[i];
            }
        }
        return {bd, bi, bj};
    }

    void merge(std::size_t a, std::size_t b) {
        if (a > b) std::swap(a, b);
        for (std::size_t k = 0; k < n_; ++k) {
            if (k == a || k == b || !active(k)) continue;
            const double mak = pair_[tri_index(n_, std::min(a, k), std::max(a, k))];
            const double mbk = pair_[tri_index(n_, std::min(b, k), std::max(b, k))];
            double merged;
            switch (linkage_) {
                case Linkage::Average: merged = mak + mbk; break;   // pair-distance sums add
                case Linkage::Single: merged = std::min(mak, mbk); break;
                default: merged = std::max(mak, mbk); break;
            }
            pair_[tri_index(n_, std::min(a, k), std::max(a, k))] = merged;
        }
        size_[a] += size_[b];
        size_[b] = 0;
        members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
        members_[b].clear();

        recompute_nn(a);
        for (std::size_t k = 0; k < n_; ++k) {
            if (k == a || !active(k)) continue;
            if (nn_partner_[k] == static_cast<int>(a) ||
                nn_partner_[k] == static_cast<int>(b)) {
                recompute_nn(k);
            } else {
                double d = distance(k, a);
                if (better(d, k, a, nn_dist_[k], k,
                           static_cast<std::size_t>(nn_partner_[k]))) {
                    nn_partner_[k] = static_cast<int>(a);
                    nn_dist_[k] = d;
                }
            }
        }
    }

    std::size_t active_count() const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < n_; ++i) c += active(i) ? 1 : 0;
        return c;
    }

    const std::vector<std::size_t>& members(std::size_t slot) const { return members_[slot]; }

private:
    std::size_t n_;
    Linkage linkage_;
    std::vector<double> pair_;  // average: sum of base distances; single/complete: min/max
    std::vector<std::size_t> size_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<int> nn_partner_;
    std::vector<double> nn_dist_;
};

bool is_ascii_alnum(unsigned char c) { return std::isalnum(c) != 0; }

}  // namespace

Linkage linkage_from_name(std::string_view name) {
    std::string n(name);
    std::transform(n.begin(), n.end(), n.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (n == "average") return Linkage::Average;
    if (n == "single") return Linkage::Single;
    if (n == "complete") return Linkage::Complete;
    throw std::invalid_argument("unknown linkage '" + std::string(name) + "'");
}

ClusterMetric cluster_metric_from_name(std::string_view name) {
    std::string n(name);
    std::transform(n.begin(), n.end(), n.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (n == "cosine") return ClusterMetric::Cosine;
    if (n == "euclidean") return ClusterMetric::Euclidean;
    throw std::invalid_argument("unknown cluster metric '" + std::string(name) + "'");
}

double cosine_distance(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("cosine_distance: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na <= 0.0 || nb <= 0.0)
        throw std::invalid_argument("cosine_distance: zero-norm input");
    return std::clamp(1.0 - dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 2.0);
}

ClusterAssignment cluster_segments(const std::vector<SpeakerEmbedding>& embeddings,
                                   double threshold, Linkage linkage,
                                   ClusterMetric metric) {
    const std::size_t n = embeddings.size();
    if (n == 0) throw std::invalid_argument("cluster_segments: no embeddings");
    if (!(threshold > 0.0))
        throw std::invalid_argument("cluster_segments: threshold must be positive");
    if (metric == ClusterMetric::Cosine && threshold > 2.0)
        throw std::invalid_argument("cluster_segments: cosine threshold must be in (0, 2]");
    for (std::size_t i = 1; i < n; ++i)
        if (embeddings[i].vector.size() != embeddings[0].vector.size())
            throw std::invalid_argument("cluster_segments: mixed embedding dimensions");

    MergeState state(n, linkage);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            state.set_base(i, j, base_distance(embeddings[i], embeddings[j], metric));
    state.init_nn();

    std::size_t remaining = n;
    while (remaining > 1) {
        auto [dist, i, j] = state.best_pair();
        if (j < 0 || !(dist < threshold)) break;
        state.merge(i, static_cast<std::size_t>(j));
        --remaining;
    }

    ClusterAssignment assignment;
    assignment.labels.assign(n, -1);
    int next = 0;
    std::vector<int> slot_label(n, -1);
    std::vector<std::size_t> row_slot(n);
    for (std::size_t slot = 0; slot < n; ++slot)
        for (std::size_t row : state.members(slot)) row_slot[row] = slot;
    for (std::size_t row = 0; row < n; ++row) {
        std::size_t slot = row_slot[row];
        if (slot_label[slot] < 0) slot_label[slot] = next++;
        assignment.labels[row] = slot_label[slot];
    }
    assignment.k = next;
    return assignment;
}

const std::set<std::string>& default_pronoun_lexicon() {
    static const std::set<std::string> lexicon = {
        "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves",
        "you", "your", "yours", "yourself", "yourselves",
    };
    return lexicon;
}

std::vector<std::string> pronoun_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;

        std::string word(text.substr(start, i - start));
        std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        // strip leading/trailing punctuation; non-ASCII bytes count as letters
        std::size_t b = 0, e = word.size();
        auto wordish = [](unsigned char c) { return is_ascii_alnum(c) || c >= 0x80; };
        while (b < e && !wordish(static_cast<unsigned char>(word[b]))) ++b;
        while (e > b && !wordish(static_cast<unsigned char>(word[e - 1]))) --e;
        if (b >= e) continue;
        std::string core = word.substr(b, e - b);

        // split contractions: the suffix keeps its apostrophe ("i" + "'m");
        // edge apostrophes were stripped above, so every piece is non-empty
        std::size_t piece_start = 0;
        for (std::size_t p = 1; p < core.size(); ++p) {
            if (core[p] == '\'') {
                out.push_back(core.substr(piece_start, p - piece_start));
                piece_start = p;
            }
        }
        out.push_back(core.substr(piece_start));
    }
    return out;
}

double pronoun_ratio(const std::vector<SentenceSegment>& segments,
                     const std::set<std::string>& lexicon) {
    std::size_t total = 0, hits = 0;
    for (const SentenceSegment& seg : segments) {
        for (const std::string& token : pronoun_tokens(seg.text)) {
            ++total;
            if (lexicon.count(token) > 0) ++hits;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

NarratorReport select_narrator(const ClusterAssignment& assignment,
                               const std::vector<SentenceSegment>& segments,
                               const std::set<std::string>& lexicon,
                               std::size_t min_segments) {
    if (assignment.labels.size() != segments.size())
        throw std::invalid_argument("select_narrator: assignment does not cover segments");

    NarratorReport report;
    report.clusters.resize(static_cast<std::size_t>(std::max(assignment.k, 0)));
    for (int c = 0; c < assignment.k; ++c) report.clusters[static_cast<std::size_t>(c)].cluster = c;

    for (std::size_t i = 0; i < segments.size(); ++i) {
        int label = assignment.labels[i];
        if (label < 0 || label >= assignment.k)
            throw std::invalid_argument("select_narrator: label out of range");
        ClusterStats& stats = report.clusters[static_cast<std::size_t>(label)];
        ++stats.segment_count;
        for (const std::string& token : pronoun_tokens(segments[i].text)) {
            ++stats.token_count;
            if (lexicon.count(token) > 0) ++stats.pronoun_count;
        }
    }
    for (ClusterStats& stats : report.clusters)
        stats.pronoun_ratio = static_cast<double>(stats.pronoun_count) /
                              static_cast<double>(std::max<std::size_t>(stats.token_count, 1));

    const ClusterStats* best = nullptr;
    for (const ClusterStats& stats : report.clusters) {
        if (stats.segment_count < min_segments) continue;
        if (best == nullptr || stats.pronoun_ratio < best->pronoun_ratio ||
            (stats.pronoun_ratio == best->pronoun_ratio &&
             (stats.segment_count > best->segment_count ||
              (stats.segment_count == best->segment_count && stats.cluster < best->cluster))))
            best = &stats;
    }
    if (best == nullptr)
        throw narrator_error("no narrator found: no cluster has " +
                                 std::to_string(min_segments) + " or more segments",
                             report.clusters);

    report.narrator_cluster = best->cluster;
    return report;
}

std::pair<std::vector<ADRecord>, std::vector<SubtitleRecord>> split_streams(
    const std::vector<SentenceSegment>& segments, const ClusterAssignment& assignment,
    int narrator_cluster, const std::string& movie_id) {
    if (assignment.labels.size() != segments.size())
        throw std::invalid_argument("split_streams: assignment does not cover segments");
    if (narrator_cluster < 0 || narrator_cluster >= assignment.k)
        throw std::invalid_argument("split_streams: narrator cluster out of range");

    std::vector<ADRecord> ads;
    std::vector<SubtitleRecord> subs;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const SentenceSegment& seg = segments[i];
        if (assignment.labels[i] == narrator_cluster) {
            ads.push_back({movie_id, seg.start_s, seg.end_s, seg.text});
        } else {
            SubtitleRecord rec{movie_id, seg.start_s, seg.end_s, seg.text, {}};
            rec.speaker = assignment.labels[i];
            subs.push_back(std::move(rec));
        }
    }
    std::stable_sort(ads.begin(), ads.end(),
                     [](const ADRecord& a, const ADRecord& b) { return a.start_s < b.start_s; });
    std::stable_sort(subs.begin(), subs.end(), [](const SubtitleRecord& a, const SubtitleRecord& b) {
        return a.start_s < b.start_s;
    });
    return {std::move(ads), std::move(subs)};
}

}  // namespace adforge
