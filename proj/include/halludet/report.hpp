#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "halludet/corpus.hpp"
#include "halludet/metrics.hpp"

namespace halludet {

/// Provenance header content written as `# <json>` on the first line of
/// every text artifact. Deliberately excludes timestamps so re-runs are
/// byte-identical.
std::string provenance_json(const std::string& command, const std::vector<std::string>& inputs,
                            uint64_t seed, const std::string& config_hash = {});

struct SourceRow {
    std::string source;
    std::size_t samples = 0;
    std::string domain = "-";
    std::size_t languages = 0;
    std::string balance;  // e.g. "74/26"
};

/// Key/value stats document with one block per source plus the combined
/// corpus (samples, languages, balance).
void write_stats_file(const std::filesystem::path& path, const std::vector<SourceRow>& sources,
                      const CorpusStats& combined, const std::string& provenance);
std::string render_stats_table(const std::vector<SourceRow>& sources, const CorpusStats& combined);

/// Results table with Language / [Rank] / Factuality F1 / Fluency F1
/// columns; the optional rank map is external input, never computed.
std::string render_results_table(const EvalReport& report,
                                 const std::map<std::string, int>* ranks = nullptr);

std::string render_gap(const GapRecord& gap);
std::string render_errors(const std::vector<ErrorCase>& errors);

void eval_report_to_file(const EvalReport& report, const std::filesystem::path& path,
                         const std::string& provenance);
EvalReport eval_report_from_file(const std::filesystem::path& path);

struct PredRecord {
    std::string id;
    Axis axis = Axis::factuality;
    Label label = Label::correct;
    double confidence = 0.0;
};

struct GoldRecord {
    std::string id;
    Axis axis = Axis::factuality;
    Label label = Label::correct;
    std::string lang;
};

void write_predictions(const std::vector<PredRecord>& preds, const std::filesystem::path& path,
                       const std::string& provenance);
std::vector<PredRecord> read_predictions(const std::filesystem::path& path);
void write_gold(const std::vector<GoldRecord>& golds, const std::filesystem::path& path,
                const std::string& provenance);
std::vector<GoldRecord> read_gold(const std::filesystem::path& path);

/// Joins predictions to gold by (id, axis) and scores per language. Any
/// gold record without a prediction (or size mismatch) is a hard
/// "unaligned inputs" error.
EvalReport score_files(const std::filesystem::path& pred_path,
                       const std::filesystem::path& gold_path);

}  // namespace halludet
