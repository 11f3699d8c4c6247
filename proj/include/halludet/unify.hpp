#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "halludet/corpus.hpp"

namespace halludet {

/// Strips leading/trailing whitespace and applies canonical (composed)
/// unicode normalization. Interior content is otherwise untouched, and the
/// operation is idempotent.
std::string normalize_text(std::string_view text);

struct LangVerdict {
    std::string lang;        // detected code, or "und"
    double confidence = 0.0; // in [0, 1]
};

class LanguageDetector {
public:
    virtual ~LanguageDetector() = default;
    /// Precondition: text is non-empty.
    virtual LangVerdict detect(std::string_view text) const = 0;
};

/// Dictionary-based toy detector over per-language stopword lists. The
/// bundled lists are pairwise disjoint, so confidence is the fraction of
/// stopword hits owned by the winning language (requires at least two hits;
/// otherwise the verdict is {"und", 0}).
class StopwordDetector : public LanguageDetector {
public:
    /// Loads every <lang>.txt stopword list in a directory.
    static StopwordDetector from_directory(const std::filesystem::path& dir);

    void add_language(const std::string& lang, const std::vector<std::string>& words);
    LangVerdict detect(std::string_view text) const override;
    std::vector<std::string> languages() const;

private:
    std::map<std::string, std::set<std::string>> stopwords_;
};

struct VerifyResult {
    std::vector<Sample> kept;
    std::vector<Sample> quarantined;
    std::vector<std::string> reasons;  // aligned with quarantined
};

/// Quarantines a sample iff the detector disagrees with its declared lang
/// AND detector confidence >= threshold. kept + quarantined partition the
/// input in order.
VerifyResult verify_languages(const std::vector<Sample>& samples, const LanguageDetector& detector,
                              double threshold);

struct DedupResult {
    std::vector<Sample> samples;
    std::size_t removed = 0;
    /// Normalized texts that appear under both labels (reported, not resolved).
    std::vector<std::string> cross_label_conflicts;
};

/// Keeps the first sample per (normalized text, label) key, in stream order.
DedupResult deduplicate(const std::vector<Sample>& samples);

struct BalancePlan {
    uint64_t seed = 0;
    double target_ratio = 0.5;  // per class; only 0.5/0.5 downsampling is supported
    enum class Strategy { downsample_majority } strategy = Strategy::downsample_majority;
};

/// Downsamples the majority class to the minority count via a uniform
/// seeded subset. Minority class passes through untouched; input order is
/// preserved. Throws DataError when either class is absent.
std::vector<Sample> balance(const std::vector<Sample>& samples, const BalancePlan& plan);

CorpusStats corpus_stats(const std::vector<Sample>& samples);

}  // namespace halludet
