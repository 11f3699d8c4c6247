#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace halludet {

enum class Label { correct, hallucinated };
enum class Axis { factuality, fluency };
enum class Source { shroom_v1v2, synthetic_100k, libreeval, factchd, generated, translated };

std::string_view to_string(Label l);
std::string_view to_string(Axis a);
std::string_view to_string(Source s);
Label label_from_string(std::string_view s);
Axis axis_from_string(std::string_view s);
Source source_from_string(std::string_view s);

/// One labeled text instance of the unified corpus.
struct Sample {
    std::string id;
    std::string text;
    Label label = Label::correct;
    std::string lang;  // ISO 639-1 code or "und"
    Source source = Source::shroom_v1v2;
    std::optional<Axis> axis;
    std::map<std::string, std::string> meta;

    bool operator==(const Sample&) const = default;
};

/// True for ISO 639-1 two-letter codes and the "und" sentinel.
bool is_recognized_lang(std::string_view code);

/// Empty vector means the sample satisfies all invariants; otherwise one
/// entry per violated invariant. Violations are data, not errors.
std::vector<std::string> validate_sample(const Sample& s);

std::string sample_to_json_line(const Sample& s);
Sample sample_from_json_line(std::string_view line);

struct CorpusStats {
    std::size_t total = 0;
    std::map<Label, std::size_t> per_label;
    std::map<std::string, std::size_t> per_lang;
    std::map<Source, std::size_t> per_source;
    double balance_ratio = 0.0;  // majority-class fraction; 0 for an empty corpus
};

/// Line-oriented corpus IO. Files are UTF-8, one JSON record per line.
/// Lines starting with '#' are headers (provenance) and are skipped on read.
std::size_t write_corpus(const std::vector<Sample>& samples, const std::filesystem::path& path,
                         const std::string& provenance_header = {});
std::vector<Sample> read_corpus(const std::filesystem::path& path);
void for_each_corpus_record(const std::filesystem::path& path,
                            const std::function<void(Sample&&)>& fn);

}  // namespace halludet
