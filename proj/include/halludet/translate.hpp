#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "halludet/corpus.hpp"

namespace halludet {

/// Backend contract: (text, source lang, target lang) -> text, plus a
/// health probe. The full-size MT model lives behind HttpTranslator; tests
/// use the deterministic stubs.
class Translator {
public:
    virtual ~Translator() = default;
    virtual std::string translate(const std::string& text, const std::string& source_lang,
                                  const std::string& target_lang) = 0;
    virtual bool healthy() { return true; }
};

/// Deterministic test translator: a "[tgt] " tag is prefixed to the text.
class PrefixTranslator : public Translator {
public:
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;
};

/// Test translator that throws for any text containing a marker substring.
class FailingTranslator : public Translator {
public:
    explicit FailingTranslator(std::string fail_marker) : marker_(std::move(fail_marker)) {}
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;

private:
    std::string marker_;
};

/// Client for an external translation service speaking JSON over HTTP:
///   POST /translate {"text","source_lang","target_lang"} -> {"text"}
///   GET  /health -> 200
/// Retries with exponential backoff before giving up on a request.
class HttpTranslator : public Translator {
public:
    HttpTranslator(std::string host, int port, int max_retries = 3, int backoff_ms = 100);
    ~HttpTranslator() override;
    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;
    bool healthy() override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

enum class Direction { en_to_targets, all_to_en };

struct TranslationJob {
    Direction direction = Direction::en_to_targets;
    std::vector<std::string> target_langs;  // direction-1 only
    Translator* translator = nullptr;
    int batch_size = 16;
    int max_in_flight = 4;

    void validate() const;
};

/// Label and axis pass through; lang becomes the target; source becomes
/// `translated`; meta records the origin id and language. Translating into
/// the sample's own language is an error.
Sample translate_sample(const Sample& s, const std::string& target, Translator& translator);

struct JobReport {
    struct Failure {
        std::string id;
        std::string target;
        std::string reason;
    };
    std::vector<Failure> failures;
    std::size_t attempted = 0;
    std::size_t succeeded = 0;
};

struct AugmentResult {
    std::vector<Sample> augmented;  // originals followed by the new samples
    std::size_t new_count = 0;
    JobReport report;
};

/// Direction 1 appends one copy per target language for every English
/// sample; direction 2 appends one English copy for every non-English
/// sample. Originals are never modified; per-sample failures are collected
/// and the job continues. Output order is (input index, target) regardless
/// of completion order.
AugmentResult run_job(const TranslationJob& job, const std::vector<Sample>& corpus);

}  // namespace halludet
