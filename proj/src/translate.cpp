#include "halludet/translate.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <semaphore>
#include <thread>

#include "halludet/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace halludet {

std::string PrefixTranslator::translate(const std::string& text, const std::string& source_lang,
                                        const std::string& target_lang) {
    (void)source_lang;
    return "[" + target_lang + "] " + text;
}

std::string FailingTranslator::translate(const std::string& text, const std::string& source_lang,
                                         const std::string& target_lang) {
    (void)source_lang;
    if (text.find(marker_) != std::string::npos) {
        throw StageError("translator refused text containing '" + marker_ + "'");
    }
    return "[" + target_lang + "] " + text;
}

struct HttpTranslator::Impl {
    httplib::Client client;
    int max_retries;
    int backoff_ms;

    Impl(const std::string& host, int port, int retries, int backoff)
        : client(host, port), max_retries(retries), backoff_ms(backoff) {
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(30, 0);
    }
};

HttpTranslator::HttpTranslator(std::string host, int port, int max_retries, int backoff_ms)
    : impl_(std::make_unique<Impl>(host, port, max_retries, backoff_ms)) {}

HttpTranslator::~HttpTranslator() = default;

bool HttpTranslator::healthy() {
    auto res = impl_->client.Get("/health");
    return res && res->status == 200;
}

std::string HttpTranslator::translate(const std::string& text, const std::string& source_lang,
                                      const std::string& target_lang) {
    nlohmann::json body;
    body["text"] = text;
    body["source_lang"] = source_lang;
    body["target_lang"] = target_lang;
    const std::string payload = body.dump();

    int delay = impl_->backoff_ms;
    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt <= impl_->max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            delay *= 2;
        }
        auto res = impl_->client.Post("/translate", payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "service returned status " + std::to_string(res->status);
            continue;
        }
        try {
            auto j = nlohmann::json::parse(res->body);
            return j.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("bad response body: ") + e.what();
        }
    }
    throw StageError("translation failed after " + std::to_string(impl_->max_retries + 1) +
                     " attempts: " + last_error);
}

void TranslationJob::validate() const {
    if (!translator) throw DataError("translation job: translator backend is required");
    if (direction == Direction::en_to_targets && target_langs.empty()) {
        throw DataError("translation job: direction en_to_targets requires target_langs");
    }
    for (const std::string& lang : target_langs) {
        if (!is_recognized_lang(lang)) {
            throw DataError("translation job: unrecognized target language '" + lang + "'");
        }
    }
    if (max_in_flight < 1) throw DataError("translation job: max_in_flight must be >= 1");
}

Sample translate_sample(const Sample& s, const std::string& target, Translator& translator) {
    if (s.text.empty()) throw DataError("translate_sample: empty text for id " + s.id);
    if (target == s.lang) {
        throw DataError("translate_sample: no-op translation for id " + s.id + " (lang " +
                        s.lang + ")");
    }
    std::string translated;
    try {
        translated = translator.translate(s.text, s.lang, target);
    } catch (const std::exception& e) {
        throw StageError("translator failed for sample " + s.id + ": " + e.what());
    }
    Sample out = s;
    out.id = s.id + "@" + target;
    out.text = std::move(translated);
    out.lang = target;
    out.source = Source::translated;
    out.meta["origin_id"] = s.id;
    out.meta["origin_lang"] = s.lang;
    return out;
}

AugmentResult run_job(const TranslationJob& job, const std::vector<Sample>& corpus) {
    job.validate();

    // Work list in deterministic (input index, target) order.
    std::vector<std::string> targets = job.target_langs;
    std::sort(targets.begin(), targets.end());
    struct WorkItem {
        std::size_t input_index;
        std::string target;
    };
    std::vector<WorkItem> work;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Sample& s = corpus[i];
        if (job.direction == Direction::en_to_targets) {
            if (s.lang != "en") continue;
            for (const std::string& t : targets) work.push_back({i, t});
        } else {
            if (s.lang == "en") continue;
            work.push_back({i, "en"});
        }
    }

    struct Outcome {
        bool ok = false;
        Sample sample;
        std::string error;
    };
    std::vector<Outcome> outcomes(work.size());

    // Bounded concurrency; the output order is fixed by the work list, not
    // by completion order.
    std::counting_semaphore<> slots(job.max_in_flight);
    std::vector<std::future<void>> futures;
    futures.reserve(work.size());
    for (std::size_t w = 0; w < work.size(); ++w) {
        slots.acquire();
        futures.push_back(std::async(std::launch::async, [&, w] {
            const WorkItem& item = work[w];
            try {
                outcomes[w].sample = translate_sample(corpus[item.input_index], item.target,
                                                      *job.translator);
                outcomes[w].ok = true;
            } catch (const std::exception& e) {
                outcomes[w].error = e.what();
            }
            slots.release();
        }));
    }
    for (auto& f : futures) f.get();

    AugmentResult result;
    result.augmented = corpus;
    result.report.attempted = work.size();
    for (std::size_t w = 0; w < work.size(); ++w) {
        if (outcomes[w].ok) {
            result.augmented.push_back(std::move(outcomes[w].sample));
            ++result.new_count;
            ++result.report.succeeded;
        } else {
            result.report.failures.push_back(
                {corpus[work[w].input_index].id, work[w].target, outcomes[w].error});
        }
    }
    return result;
}

}  // namespace halludet
