#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adforge/context.hpp"
#include "adforge/curate.hpp"
#include "adforge/sentencize.hpp"
#include "adforge/speaker.hpp"
#include "adforge/sync.hpp"
#include "adforge/types.hpp"

namespace adforge {

// Dataset rows as CSV (RFC 4180 quoting, header row) and JSONL. Timestamps
// are written with shortest round-trip formatting so re-runs are
// byte-identical.
std::string to_csv(const std::vector<ADRecord>& records);
std::string to_csv(const std::vector<SubtitleRecord>& records);
std::string to_jsonl(const std::vector<ADRecord>& records);
std::string to_jsonl(const std::vector<SubtitleRecord>& records);
std::string to_jsonl(const std::vector<ContextExample>& examples);

// Readers for the JSONL and CSV record files (detected by extension in the
// CLI). Used by `sync --apply` and the standalone curate/context commands.
std::vector<ADRecord> ad_records_from_jsonl(std::string_view bytes);
std::vector<ADRecord> ad_records_from_csv(std::string_view bytes);
std::vector<SubtitleRecord> subtitle_records_from_jsonl(std::string_view bytes);
std::vector<SubtitleRecord> subtitle_records_from_csv(std::string_view bytes);

// Stage audit artifacts.
std::string sentences_to_json(const std::string& movie_id,
                              const std::vector<SentenceSegment>& sentences);
std::vector<SentenceSegment> sentences_from_json(std::string_view bytes,
                                                 std::string* movie_id = nullptr);
std::string narrator_report_to_json(const NarratorReport& report);
std::string delay_estimate_to_json(const DelayEstimate& estimate, bool applied);
std::string verdicts_to_json(const std::vector<FilterVerdict>& verdicts);

// EvalPair corpus I/O for the metric layer. `read_eval_pairs` joins a
// candidates JSONL ({"id", "text"}) with a references JSONL ({"id", "text"}
// lines accumulate; {"id", "references": [...]} also accepted) on id.
std::vector<EvalPair> read_eval_pairs(std::string_view candidates_jsonl,
                                      std::string_view references_jsonl);
std::string score_report_to_json(const ScoreReport& report);

// Shortest round-trip decimal formatting for doubles (the CSV/JSONL rule).
std::string format_double(double value);

// Whole-file helpers. write_file_atomic writes to a temp name in the target
// directory and renames over the destination.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace adforge
