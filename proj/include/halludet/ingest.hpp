#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "halludet/corpus.hpp"

namespace halludet {

enum class InputFormat { jsonl, csv, tsv };
enum class LabelTarget { correct, hallucinated, drop };

InputFormat input_format_from_string(std::string_view s);
LabelTarget label_target_from_string(std::string_view s);

/// Declarative description of one upstream dataset: where fields live and
/// how its raw label vocabulary maps onto the binary target. Shipped as
/// data files under descriptors/ so mappings stay auditable.
struct SourceDescriptor {
    Source name = Source::shroom_v1v2;
    InputFormat input_format = InputFormat::jsonl;
    std::string text_field;
    std::string label_field;
    std::optional<std::string> lang_field;
    std::optional<std::string> default_lang;
    std::map<std::string, LabelTarget> label_map;
    std::optional<std::string> id_field;
    std::optional<std::string> axis_field;
    std::string domain;  // annotation for the stats table; "-" when unknown

    /// Throws DataError if the descriptor violates its invariants.
    void validate() const;
};

SourceDescriptor load_descriptor(const std::filesystem::path& path);
void save_descriptor(const SourceDescriptor& d, const std::filesystem::path& path);

struct IngestSummary {
    std::size_t emitted = 0;
    std::size_t dropped = 0;  // records whose label maps to `drop`
    std::size_t errored = 0;  // malformed records skipped in lenient mode
};

/// Reads one upstream file and emits validated unified Samples in record
/// order. Unmapped raw labels are always a hard error. Malformed records
/// throw in strict mode (default) and are counted in lenient mode.
IngestSummary ingest_source(const SourceDescriptor& descriptor, const std::filesystem::path& path,
                            const std::function<void(Sample&&)>& emit, bool strict = true);

std::pair<std::vector<Sample>, IngestSummary> ingest_source_to_vector(
    const SourceDescriptor& descriptor, const std::filesystem::path& path, bool strict = true);

}  // namespace halludet
