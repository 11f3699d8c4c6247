#include "halludet/unify.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "halludet/errors.hpp"
#include "halludet/rng.hpp"
#include "halludet/unicode.hpp"

namespace halludet {

std::string normalize_text(std::string_view text) {
    return uni::nfc(uni::strip(text));
}

StopwordDetector StopwordDetector::from_directory(const std::filesystem::path& dir) {
    StopwordDetector det;
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("stopword directory not found: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw DataError("cannot open stopword list: " + file.string());
        std::vector<std::string> words;
        std::string w;
        while (std::getline(in, w)) {
            if (!w.empty() && w.back() == '\r') w.pop_back();
            if (!w.empty() && w[0] != '#') words.push_back(w);
        }
        det.add_language(file.stem().string(), words);
    }
    if (det.stopwords_.empty()) throw DataError("no stopword lists in " + dir.string());
    return det;
}

void StopwordDetector::add_language(const std::string& lang, const std::vector<std::string>& words) {
    auto& set = stopwords_[lang];
    for (const auto& w : words) set.insert(w);
}

std::vector<std::string> StopwordDetector::languages() const {
    std::vector<std::string> out;
    for (const auto& [lang, _] : stopwords_) out.push_back(lang);
    return out;
}

namespace {

// Tokenization for detection: split on whitespace, peel ASCII punctuation
// and digits off token edges, lowercase ASCII letters.
std::vector<std::string> detect_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        size_t b = 0;
        size_t e = cur.size();
        auto peel = [](unsigned char c) {
            return (c < 0x80) && (std::ispunct(c) || std::isdigit(c));
        };
        while (b < e && peel(static_cast<unsigned char>(cur[b]))) ++b;
        while (e > b && peel(static_cast<unsigned char>(cur[e - 1]))) --e;
        if (e > b) {
            std::string t = cur.substr(b, e - b);
            for (char& c : t) {
                if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(c));
            }
            tokens.push_back(std::move(t));
        }
        cur.clear();
    };
    size_t i = 0;
    while (i < text.size()) {
        unsigned char b0 = static_cast<unsigned char>(text[i]);
        size_t len = b0 < 0x80 ? 1 : (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3 : (b0 & 0xF8) == 0xF0 ? 4 : 1;
        if (i + len > text.size()) len = 1;
        if (len == 1 && std::isspace(b0)) {
            flush();
        } else {
            cur.append(text.substr(i, len));
        }
        i += len;
    }
    flush();
    return tokens;
}

}  // namespace

LangVerdict StopwordDetector::detect(std::string_view text) const {
    if (uni::strip(text).empty()) throw DataError("detect_language: empty text");
    const std::vector<std::string> tokens = detect_tokens(text);
    std::map<std::string, std::size_t> hits;
    std::size_t total_hits = 0;
    for (const auto& tok : tokens) {
        for (const auto& [lang, words] : stopwords_) {
            if (words.count(tok)) {
                ++hits[lang];
                ++total_hits;
            }
        }
    }
    if (total_hits < 2) return {"und", 0.0};
    auto best = hits.begin();
    for (auto it = hits.begin(); it != hits.end(); ++it) {
        if (it->second > best->second) best = it;  // ties keep the lexicographically first
    }
    return {best->first, static_cast<double>(best->second) / static_cast<double>(total_hits)};
}

VerifyResult verify_languages(const std::vector<Sample>& samples, const LanguageDetector& detector,
                              double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw DataError("verify_languages: threshold must be in [0,1]");
    }
    VerifyResult result;
    for (const Sample& s : samples) {
        LangVerdict v = detector.detect(s.text);
        if (v.lang != s.lang && v.confidence >= threshold) {
            result.quarantined.push_back(s);
            result.reasons.push_back("declared " + s.lang + ", detected " + v.lang + " @" +
                                     std::to_string(v.confidence));
        } else {
            result.kept.push_back(s);
        }
    }
    return result;
}

DedupResult deduplicate(const std::vector<Sample>& samples) {
    DedupResult result;
    std::unordered_set<std::string> seen;
    std::unordered_map<std::string, unsigned> text_labels;  // normalized text -> label bitmask
    std::unordered_set<std::string> conflict_seen;
    for (const Sample& s : samples) {
        const std::string norm = normalize_text(s.text);
        const std::string key = std::string(to_string(s.label)) + "\x1f" + norm;
        unsigned& mask = text_labels[norm];
        mask |= s.label == Label::correct ? 1u : 2u;
        if (mask == 3u && conflict_seen.insert(norm).second) {
            result.cross_label_conflicts.push_back(norm);
        }
        if (seen.insert(key).second) {
            result.samples.push_back(s);
        } else {
            ++result.removed;
        }
    }
    return result;
}

std::vector<Sample> balance(const std::vector<Sample>& samples, const BalancePlan& plan) {
    std::vector<std::size_t> correct_idx;
    std::vector<std::size_t> halluc_idx;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (samples[i].label == Label::correct ? correct_idx : halluc_idx).push_back(i);
    }
    if (correct_idx.empty() || halluc_idx.empty()) {
        throw DataError("balance: both classes must be present (correct=" +
                        std::to_string(correct_idx.size()) +
                        ", hallucinated=" + std::to_string(halluc_idx.size()) + ")");
    }
    auto& majority = correct_idx.size() >= halluc_idx.size() ? correct_idx : halluc_idx;
    const std::size_t minority_count = std::min(correct_idx.size(), halluc_idx.size());

    // Uniform subset of the majority: seeded partial Fisher-Yates, then
    // restore stream order.
    Rng rng(plan.seed);
    rng.shuffle(majority);
    majority.resize(minority_count);

    std::vector<char> keep(samples.size(), 0);
    for (std::size_t i : correct_idx) keep[i] = 1;
    for (std::size_t i : halluc_idx) keep[i] = 1;
    std::vector<Sample> out;
    out.reserve(2 * minority_count);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (keep[i]) out.push_back(samples[i]);
    }
    return out;
}

CorpusStats corpus_stats(const std::vector<Sample>& samples) {
    CorpusStats stats;
    stats.total = samples.size();
    for (const Sample& s : samples) {
        ++stats.per_label[s.label];
        ++stats.per_lang[s.lang];
        ++stats.per_source[s.source];
    }
    if (stats.total > 0) {
        std::size_t majority = 0;
        for (const auto& [label, n] : stats.per_label) majority = std::max(majority, n);
        stats.balance_ratio = static_cast<double>(majority) / static_cast<double>(stats.total);
    }
    return stats;
}

}  // namespace halludet
