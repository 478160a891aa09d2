#include "adforge/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace adforge {

namespace {

// Minimal UTF-8 decode; invalid sequences fall back to byte-at-a-time.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        ++i;
        return c;
    }
    int extra = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; extra = 1; }
    else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; extra = 2; }
    else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; extra = 3; }
    else { ++i; return c; }
    if (i + static_cast<std::size_t>(extra) >= s.size()) { ++i; return c; }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((cc & 0xC0) != 0x80) { ++i; return c; }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += static_cast<std::size_t>(extra) + 1;
    return cp;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

enum class CharKind { Word, Apostrophe, Space };

struct NormChar {
    CharKind kind;
    std::string bytes;
};

CharKind classify(std::uint32_t cp, std::uint32_t& lowered) {
    lowered = cp;
    if (cp < 0x80) {
        if (std::isalnum(static_cast<int>(cp))) {
            lowered = static_cast<std::uint32_t>(std::tolower(static_cast<int>(cp)));
            return CharKind::Word;
        }
        if (cp == '\'') return CharKind::Apostrophe;
        return CharKind::Space;
    }
    if (cp == 0x2019 || cp == 0x02BC) return CharKind::Apostrophe;  // curly apostrophe
    if ((cp >= 0x2000 && cp <= 0x206F) || cp == 0x00A0) return CharKind::Space;
    if (cp >= 0x00A1 && cp <= 0x00BF) return CharKind::Space;  // Latin-1 punctuation
    if (cp == 0x00D7 || cp == 0x00F7) return CharKind::Space;
    if (cp >= 0x00C0 && cp <= 0x00DE) lowered = cp + 0x20;  // Latin-1 uppercase
    return CharKind::Word;  // other scripts pass through
}

}  // namespace

std::vector<std::string> normalize_text(std::string_view text) {
    std::vector<NormChar> chars;
    chars.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        std::uint32_t cp = decode_utf8(text, i);
        std::uint32_t lowered = cp;
        CharKind kind = classify(cp, lowered);
        NormChar nc{kind, {}};
        if (kind == CharKind::Word) encode_utf8(lowered, nc.bytes);
        else if (kind == CharKind::Apostrophe) nc.bytes = "'";
        chars.push_back(std::move(nc));
    }

    std::vector<std::string> tokens;
    std::string cur;
    for (std::size_t c = 0; c < chars.size(); ++c) {
        bool emit_word = chars[c].kind == CharKind::Word;
        if (chars[c].kind == CharKind::Apostrophe) {
            // keep only word-internal apostrophes
            emit_word = c > 0 && c + 1 < chars.size() &&
                        chars[c - 1].kind == CharKind::Word &&
                        chars[c + 1].kind == CharKind::Word;
        }
        if (emit_word) {
            cur += chars[c].bytes;
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

namespace {

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references, double beta) {
    if (references.empty()) throw std::invalid_argument("rouge_l: no references");
    if (candidate.empty()) return 0.0;

    double best = 0.0;
    for (const auto& ref : references) {
        if (ref.empty()) continue;
        const auto lcs = static_cast<double>(lcs_length(candidate, ref));
        if (lcs == 0.0) continue;
        const double p = lcs / static_cast<double>(candidate.size());
        const double r = lcs / static_cast<double>(ref.size());
        const double f = (1.0 + beta * beta) * p * r / (r + beta * beta * p);
        best = std::max(best, f);
    }
    return best;
}

namespace {

using NgramCounts = std::map<std::string, double>;

// joined with \x01, which normalized tokens cannot contain
std::vector<NgramCounts> count_ngrams(const std::vector<std::string>& tokens,
                                      std::size_t n_max) {
    std::vector<NgramCounts> counts(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (tokens.size() < n) break;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string key;
            for (std::size_t j = 0; j < n; ++j) {
                if (j > 0) key += '\x01';
                key += tokens[i + j];
            }
            counts[n - 1][key] += 1.0;
        }
    }
    return counts;
}

}  // namespace

ScoreReport cider_d(const std::vector<EvalPair>& corpus, std::size_t n_max, double sigma) {
    if (corpus.empty()) throw std::invalid_argument("cider_d: empty corpus");
    if (n_max == 0) throw std::invalid_argument("cider_d: n_max must be >= 1");
    for (const EvalPair& pair : corpus)
        if (pair.references.empty())
            throw std::invalid_argument("cider_d: pair '" + pair.id + "' has no references");

    struct Cooked {
        std::vector<NgramCounts> cand;
        std::size_t cand_len = 0;
        std::vector<std::vector<NgramCounts>> refs;
        std::vector<std::size_t> ref_lens;
    };
    std::vector<Cooked> cooked(corpus.size());
    std::map<std::string, double> document_frequency;

    for (std::size_t p = 0; p < corpus.size(); ++p) {
        const std::vector<std::string> cand_tokens = normalize_text(corpus[p].candidate);
        cooked[p].cand = count_ngrams(cand_tokens, n_max);
        cooked[p].cand_len = cand_tokens.size();
        std::map<std::string, bool> seen;
        for (const std::string& ref : corpus[p].references) {
            const std::vector<std::string> ref_tokens = normalize_text(ref);
            cooked[p].refs.push_back(count_ngrams(ref_tokens, n_max));
            cooked[p].ref_lens.push_back(ref_tokens.size());
            for (const NgramCounts& counts : cooked[p].refs.back())
                for (const auto& [ngram, cnt] : counts) seen[ngram] = true;
        }
        for (const auto& [ngram, _] : seen) document_frequency[ngram] += 1.0;
    }

    const double log_corpus = std::log(static_cast<double>(corpus.size()));
    auto idf = [&](const std::string& ngram) {
        auto it = document_frequency.find(ngram);
        const double df = it == document_frequency.end() ? 1.0 : std::max(1.0, it->second);
        return log_corpus - std::log(df);
    };

    auto vec_norms = [&](const std::vector<NgramCounts>& counts) {
        std::vector<double> norms(n_max, 0.0);
        for (std::size_t n = 0; n < n_max && n < counts.size(); ++n)
            for (const auto& [ngram, cnt] : counts[n]) {
                const double w = cnt * idf(ngram);
                norms[n] += w * w;
            }
        for (double& x : norms) x = std::sqrt(x);
        return norms;
    };

    ScoreReport report;
    double corpus_sum = 0.0;
    for (std::size_t p = 0; p < corpus.size(); ++p) {
        const std::vector<double> cand_norms = vec_norms(cooked[p].cand);
        double ref_sum = 0.0;
        for (std::size_t r = 0; r < cooked[p].refs.size(); ++r) {
            const std::vector<NgramCounts>& ref = cooked[p].refs[r];
            const std::vector<double> ref_norms = vec_norms(ref);
            const double delta = static_cast<double>(cooked[p].cand_len) -
                                 static_cast<double>(cooked[p].ref_lens[r]);
            const double penalty = std::exp(-(delta * delta) / (2.0 * sigma * sigma));

            double per_n_sum = 0.0;
            for (std::size_t n = 0; n < n_max; ++n) {
                double val = 0.0;
                for (const auto& [ngram, cnt] : cooked[p].cand[n]) {
                    auto it = ref[n].find(ngram);
                    if (it == ref[n].end()) continue;
                    const double w = idf(ngram);
                    const double cand_w = cnt * w;
                    const double ref_w = it->second * w;
                    val += std::min(cand_w, ref_w) * ref_w;  // clipped candidate term
                }
                if (cand_norms[n] != 0.0 && ref_norms[n] != 0.0)
                    val /= cand_norms[n] * ref_norms[n];
                per_n_sum += val * penalty;
            }
            ref_sum += per_n_sum / static_cast<double>(n_max);
        }
        const double score =
            ref_sum / static_cast<double>(cooked[p].refs.size()) * 10.0;
        report.per_id["cider_d"][corpus[p].id] = score;
        corpus_sum += score;
    }
    report.corpus["cider_d"] = corpus_sum / static_cast<double>(corpus.size());

    if (corpus.size() == 1)
        report.warnings.push_back(
            "cider_d: degenerate single-pair corpus, all idf weights are zero");
    return report;
}

ScoreReport score_corpus(const std::vector<EvalPair>& corpus,
                         const std::vector<std::string>& metrics) {
    ScoreReport report;
    for (const std::string& metric : metrics) {
        if (metric == "rouge_l") {
            double sum = 0.0;
            for (const EvalPair& pair : corpus) {
                std::vector<std::vector<std::string>> refs;
                refs.reserve(pair.references.size());
                for (const std::string& r : pair.references) refs.push_back(normalize_text(r));
                const double score = rouge_l(normalize_text(pair.candidate), refs);
                report.per_id["rouge_l"][pair.id] = score;
                sum += score;
            }
            report.corpus["rouge_l"] = corpus.empty() ? 0.0 : sum / static_cast<double>(corpus.size());
        } else if (metric == "cider_d") {
            ScoreReport sub = cider_d(corpus);
            report.per_id["cider_d"] = std::move(sub.per_id["cider_d"]);
            report.corpus["cider_d"] = sub.corpus["cider_d"];
            for (auto& w : sub.warnings) report.warnings.push_back(std::move(w));
        } else {
            throw std::invalid_argument("unknown metric '" + metric + "'");
        }
    }
    return report;
}

}  // namespace adforge
