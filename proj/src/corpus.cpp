#include "halludet/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "halludet/errors.hpp"
#include "halludet/unicode.hpp"
#include "json.hpp"

namespace halludet {

namespace {

// ISO 639-1 two-letter codes.
constexpr std::array<std::string_view, 184> kIso639_1 = {
    "aa", "ab", "ae", "af", "ak", "am", "an", "ar", "as", "av", "ay", "az", "ba", "be", "bg",
    "bh", "bi", "bm", "bn", "bo", "br", "bs", "ca", "ce", "ch", "co", "cr", "cs", "cu", "cv",
    "cy", "da", "de", "dv", "dz", "ee", "el", "en", "eo", "es", "et", "eu", "fa", "ff", "fi",
    "fj", "fo", "fr", "fy", "ga", "gd", "gl", "gn", "gu", "gv", "ha", "he", "hi", "ho", "hr",
    "ht", "hu", "hy", "hz", "ia", "id", "ie", "ig", "ii", "ik", "io", "is", "it", "iu", "ja",
    "jv", "ka", "kg", "ki", "kj", "kk", "kl", "km", "kn", "ko", "kr", "ks", "ku", "kv", "kw",
    "ky", "la", "lb", "lg", "li", "ln", "lo", "lt", "lu", "lv", "mg", "mh", "mi", "mk", "ml",
    "mn", "mr", "ms", "mt", "my", "na", "nb", "nd", "ne", "ng", "nl", "nn", "no", "nr", "nv",
    "ny", "oc", "oj", "om", "or", "os", "pa", "pi", "pl", "ps", "pt", "qu", "rm", "rn", "ro",
    "ru", "rw", "sa", "sc", "sd", "se", "sg", "si", "sk", "sl", "sm", "sn", "so", "sq", "sr",
    "ss", "st", "su", "sv", "sw", "ta", "te", "tg", "th", "ti", "tk", "tl", "tn", "to", "tr",
    "ts", "tt", "tw", "ty", "ug", "uk", "ur", "uz", "ve", "vi", "vo", "wa", "wo", "xh", "yi",
    "yo", "za", "zh", "zu"};

using json = nlohmann::json;

}  // namespace

std::string_view to_string(Label l) { return l == Label::correct ? "correct" : "hallucinated"; }

std::string_view to_string(Axis a) { return a == Axis::factuality ? "factuality" : "fluency"; }

std::string_view to_string(Source s) {
    switch (s) {
        case Source::shroom_v1v2: return "shroom_v1v2";
        case Source::synthetic_100k: return "synthetic_100k";
        case Source::libreeval: return "libreeval";
        case Source::factchd: return "factchd";
        case Source::generated: return "generated";
        case Source::translated: return "translated";
    }
    return "unknown";
}

Label label_from_string(std::string_view s) {
    if (s == "correct") return Label::correct;
    if (s == "hallucinated") return Label::hallucinated;
    throw DataError("unknown label: '" + std::string(s) + "'");
}

Axis axis_from_string(std::string_view s) {
    if (s == "factuality") return Axis::factuality;
    if (s == "fluency") return Axis::fluency;
    throw DataError("unknown axis: '" + std::string(s) + "'");
}

Source source_from_string(std::string_view s) {
    if (s == "shroom_v1v2") return Source::shroom_v1v2;
    if (s == "synthetic_100k") return Source::synthetic_100k;
    if (s == "libreeval") return Source::libreeval;
    if (s == "factchd") return Source::factchd;
    if (s == "generated") return Source::generated;
    if (s == "translated") return Source::translated;
    throw DataError("unknown source: '" + std::string(s) + "'");
}

bool is_recognized_lang(std::string_view code) {
    if (code == "und") return true;
    return std::binary_search(kIso639_1.begin(), kIso639_1.end(), code);
}

std::vector<std::string> validate_sample(const Sample& s) {
    std::vector<std::string> violations;
    if (uni::strip(s.text).empty()) violations.push_back("empty text");
    if (!is_recognized_lang(s.lang)) violations.push_back("unrecognized language code");
    if (s.id.empty()) violations.push_back("empty id");
    return violations;
}

std::string sample_to_json_line(const Sample& s) {
    json j;
    j["id"] = s.id;
    j["text"] = s.text;
    j["label"] = std::string(to_string(s.label));
    j["lang"] = s.lang;
    j["source"] = std::string(to_string(s.source));
    if (s.axis) j["axis"] = std::string(to_string(*s.axis));
    if (!s.meta.empty()) j["meta"] = s.meta;
    return j.dump();
}

Sample sample_from_json_line(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed corpus record: ") + e.what());
    }
    Sample s;
    try {
        s.id = j.at("id").get<std::string>();
        s.text = j.at("text").get<std::string>();
        s.label = label_from_string(j.at("label").get<std::string>());
        s.lang = j.at("lang").get<std::string>();
        s.source = source_from_string(j.at("source").get<std::string>());
        if (j.contains("axis")) s.axis = axis_from_string(j.at("axis").get<std::string>());
        if (j.contains("meta")) s.meta = j.at("meta").get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
        throw DataError(std::string("corpus record missing field: ") + e.what());
    }
    return s;
}

std::size_t write_corpus(const std::vector<Sample>& samples, const std::filesystem::path& path,
                         const std::string& provenance_header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file: " + path.string());
    if (!provenance_header.empty()) out << "# " << provenance_header << "\n";
    for (const Sample& s : samples) out << sample_to_json_line(s) << "\n";
    out.flush();
    if (!out) throw DataError("write failure on corpus file: " + path.string());
    return samples.size();
}

void for_each_corpus_record(const std::filesystem::path& path,
                            const std::function<void(Sample&&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            fn(sample_from_json_line(line));
        } catch (const DataError& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::vector<Sample> read_corpus(const std::filesystem::path& path) {
    std::vector<Sample> out;
    for_each_corpus_record(path, [&](Sample&& s) { out.push_back(std::move(s)); });
    return out;
}

}  // namespace halludet
