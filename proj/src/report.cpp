#include "halludet/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "halludet/errors.hpp"
#include "json.hpp"

namespace halludet {

namespace {

using json = nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";

std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

std::string capitalized(Label l) { return l == Label::correct ? "Correct" : "Hallucinated"; }

void open_or_throw(std::ofstream& out, const std::filesystem::path& path) {
    out.open(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
}

json confusion_to_json(const Confusion& c) {
    return json::array({json::array({c.m[0][0], c.m[0][1]}), json::array({c.m[1][0], c.m[1][1]})});
}

Confusion confusion_from_json(const json& j) {
    Confusion c;
    for (int g = 0; g < 2; ++g) {
        for (int p = 0; p < 2; ++p) {
            c.m[static_cast<size_t>(g)][static_cast<size_t>(p)] =
                j.at(static_cast<size_t>(g)).at(static_cast<size_t>(p)).get<std::size_t>();
        }
    }
    return c;
}

}  // namespace

std::string provenance_json(const std::string& command, const std::vector<std::string>& inputs,
                            uint64_t seed, const std::string& config_hash) {
    json j;
    j["tool"] = "halludet";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["inputs"] = inputs;
    j["seed"] = seed;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    return j.dump();
}

void write_stats_file(const std::filesystem::path& path, const std::vector<SourceRow>& sources,
                      const CorpusStats& combined, const std::string& provenance) {
    std::ofstream out;
    open_or_throw(out, path);
    if (!provenance.empty()) out << "# " << provenance << "\n";
    for (const SourceRow& row : sources) {
        out << "source." << row.source << ".samples=" << row.samples << "\n";
        out << "source." << row.source << ".domain=" << row.domain << "\n";
        out << "source." << row.source << ".languages=" << row.languages << "\n";
        out << "source." << row.source << ".balance=" << row.balance << "\n";
    }
    out << "combined.samples=" << combined.total << "\n";
    out << "combined.languages=" << combined.per_lang.size() << "\n";
    std::size_t correct = 0;
    std::size_t halluc = 0;
    if (auto it = combined.per_label.find(Label::correct); it != combined.per_label.end()) {
        correct = it->second;
    }
    if (auto it = combined.per_label.find(Label::hallucinated); it != combined.per_label.end()) {
        halluc = it->second;
    }
    out << "combined.correct=" << correct << "\n";
    out << "combined.hallucinated=" << halluc << "\n";
    std::ostringstream ratio;
    ratio << std::fixed << std::setprecision(4) << combined.balance_ratio;
    out << "combined.balance_ratio=" << ratio.str() << "\n";
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_stats_table(const std::vector<SourceRow>& sources,
                               const CorpusStats& combined) {
    std::ostringstream os;
    os << pad("Source", 22) << pad("Samples", 10) << pad("Domain", 16) << pad("Languages", 11)
       << "Balance\n";
    os << std::string(66, '-') << "\n";
    for (const SourceRow& row : sources) {
        os << pad(row.source, 22) << pad(std::to_string(row.samples), 10) << pad(row.domain, 16)
           << pad(std::to_string(row.languages), 11) << row.balance << "\n";
    }
    std::size_t correct = 0;
    std::size_t halluc = 0;
    if (auto it = combined.per_label.find(Label::correct); it != combined.per_label.end()) {
        correct = it->second;
    }
    if (auto it = combined.per_label.find(Label::hallucinated); it != combined.per_label.end()) {
        halluc = it->second;
    }
    std::string balance = "-";
    if (combined.total > 0) {
        balance = std::to_string((correct * 100 + combined.total / 2) / combined.total) + "/" +
                  std::to_string((halluc * 100 + combined.total / 2) / combined.total);
    }
    os << pad("Combined", 22) << pad(std::to_string(combined.total), 10) << pad("Mixed", 16)
       << pad(std::to_string(combined.per_lang.size()), 11) << balance << "\n";
    return os.str();
}

std::string render_results_table(const EvalReport& report,
                                 const std::map<std::string, int>* ranks) {
    std::ostringstream os;
    os << pad("Language", 12);
    if (ranks) os << pad("Rank", 6);
    os << pad("Factuality F1", 15) << "Fluency F1\n";
    os << std::string(ranks ? 43 : 37, '-') << "\n";
    for (const auto& [lang, scores] : report.per_lang) {
        os << pad(lang, 12);
        if (ranks) {
            auto it = ranks->find(lang);
            os << pad(it == ranks->end() ? "-" : std::to_string(it->second), 6);
        }
        os << pad(scores.factuality_f1 ? fixed4(*scores.factuality_f1) : "-", 15)
           << (scores.fluency_f1 ? fixed4(*scores.fluency_f1) : "-") << "\n";
    }
    return os.str();
}

std::string render_gap(const GapRecord& gap) {
    std::ostringstream os;
    os << "validation macro F1: " << fixed4(gap.val_macro_f1) << "\n";
    os << "test macro F1:       " << fixed4(gap.test_macro_f1) << "\n";
    os << "delta:               " << fixed4(gap.delta) << "\n";
    if (!gap.per_lang_delta.empty()) {
        os << "per-language deltas:\n";
        for (const auto& [lang, d] : gap.per_lang_delta) {
            os << "  " << pad(lang, 6) << fixed4(d) << "\n";
        }
    }
    return os.str();
}

std::string render_errors(const std::vector<ErrorCase>& errors) {
    std::ostringstream os;
    if (errors.empty()) {
        os << "No misclassified samples.\n";
        return os.str();
    }
    for (const ErrorCase& e : errors) {
        os << "Input: \"" << e.text << "\"\n";
        std::ostringstream conf;
        conf << std::fixed << std::setprecision(2) << e.confidence;
        os << "Model Prediction: " << capitalized(e.predicted) << " (" << conf.str() << ")\n";
        os << "Gold Label: " << capitalized(e.gold) << "\n";
        os << "Sample Id: " << e.id << "\n\n";
    }
    return os.str();
}

void eval_report_to_file(const EvalReport& report, const std::filesystem::path& path,
                         const std::string& provenance) {
    json j;
    j["n"] = report.n;
    j["macro_f1"] = report.macro_f1;
    json langs = json::object();
    for (const auto& [lang, scores] : report.per_lang) {
        json e;
        if (scores.factuality_f1) e["factuality_f1"] = *scores.factuality_f1;
        if (scores.fluency_f1) e["fluency_f1"] = *scores.fluency_f1;
        e["n"] = scores.n;
        e["confusion"] = confusion_to_json(scores.pooled);
        langs[lang] = e;
    }
    j["per_lang"] = langs;
    if (report.gap) {
        json g;
        g["val_macro_f1"] = report.gap->val_macro_f1;
        g["test_macro_f1"] = report.gap->test_macro_f1;
        g["delta"] = report.gap->delta;
        g["per_lang_delta"] = report.gap->per_lang_delta;
        j["gap"] = g;
    }
    std::ofstream out;
    open_or_throw(out, path);
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << j.dump(2) << "\n";
}

EvalReport eval_report_from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open eval report: " + path.string());
    std::string first;
    std::getline(in, first);
    std::stringstream buf;
    if (!first.empty() && first[0] != '#') buf << first << "\n";
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw DataError("malformed eval report " + path.string() + ": " + e.what());
    }
    EvalReport report;
    report.n = j.at("n").get<std::size_t>();
    report.macro_f1 = j.at("macro_f1").get<double>();
    for (auto& [lang, e] : j.at("per_lang").items()) {
        LangScores scores;
        if (e.contains("factuality_f1")) scores.factuality_f1 = e.at("factuality_f1").get<double>();
        if (e.contains("fluency_f1")) scores.fluency_f1 = e.at("fluency_f1").get<double>();
        scores.n = e.at("n").get<std::size_t>();
        scores.pooled = confusion_from_json(e.at("confusion"));
        report.per_lang[lang] = scores;
    }
    if (j.contains("gap")) {
        GapRecord gap;
        gap.val_macro_f1 = j["gap"].at("val_macro_f1").get<double>();
        gap.test_macro_f1 = j["gap"].at("test_macro_f1").get<double>();
        gap.delta = j["gap"].at("delta").get<double>();
        if (j["gap"].contains("per_lang_delta")) {
            gap.per_lang_delta =
                j["gap"].at("per_lang_delta").get<std::map<std::string, double>>();
        }
        report.gap = gap;
    }
    return report;
}

void write_predictions(const std::vector<PredRecord>& preds, const std::filesystem::path& path,
                       const std::string& provenance) {
    std::ofstream out;
    open_or_throw(out, path);
    if (!provenance.empty()) out << "# " << provenance << "\n";
    for (const PredRecord& p : preds) {
        json j;
        j["id"] = p.id;
        j["axis"] = std::string(to_string(p.axis));
        j["label"] = std::string(to_string(p.label));
        j["confidence"] = p.confidence;
        out << j.dump() << "\n";
    }
}

std::vector<PredRecord> read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open prediction file: " + path.string());
    std::vector<PredRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            json j = json::parse(line);
            PredRecord p;
            p.id = j.at("id").get<std::string>();
            p.axis = axis_from_string(j.at("axis").get<std::string>());
            p.label = label_from_string(j.at("label").get<std::string>());
            p.confidence = j.at("confidence").get<double>();
            out.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_gold(const std::vector<GoldRecord>& golds, const std::filesystem::path& path,
                const std::string& provenance) {
    std::ofstream out;
    open_or_throw(out, path);
    if (!provenance.empty()) out << "# " << provenance << "\n";
    for (const GoldRecord& g : golds) {
        json j;
        j["id"] = g.id;
        j["axis"] = std::string(to_string(g.axis));
        j["label"] = std::string(to_string(g.label));
        j["lang"] = g.lang;
        out << j.dump() << "\n";
    }
}

std::vector<GoldRecord> read_gold(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open gold file: " + path.string());
    std::vector<GoldRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            json j = json::parse(line);
            GoldRecord g;
            g.id = j.at("id").get<std::string>();
            g.axis = axis_from_string(j.at("axis").get<std::string>());
            g.label = label_from_string(j.at("label").get<std::string>());
            g.lang = j.at("lang").get<std::string>();
            out.push_back(std::move(g));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

EvalReport score_files(const std::filesystem::path& pred_path,
                       const std::filesystem::path& gold_path) {
    const std::vector<PredRecord> preds = read_predictions(pred_path);
    const std::vector<GoldRecord> golds = read_gold(gold_path);
    if (preds.size() != golds.size()) {
        throw DataError("unaligned inputs: " + std::to_string(preds.size()) + " predictions vs " +
                        std::to_string(golds.size()) + " gold records");
    }
    std::map<std::pair<std::string, Axis>, const PredRecord*> by_key;
    for (const PredRecord& p : preds) {
        if (!by_key.emplace(std::make_pair(p.id, p.axis), &p).second) {
            throw DataError("unaligned inputs: duplicate prediction for id " + p.id);
        }
    }
    std::vector<int> pred_labels;
    std::vector<int> gold_labels;
    std::vector<std::string> langs;
    std::vector<Axis> axes;
    for (const GoldRecord& g : golds) {
        auto it = by_key.find(std::make_pair(g.id, g.axis));
        if (it == by_key.end()) {
            throw DataError("unaligned inputs: no prediction for id " + g.id + " axis " +
                            std::string(to_string(g.axis)));
        }
        pred_labels.push_back(it->second->label == Label::correct ? 0 : 1);
        gold_labels.push_back(g.label == Label::correct ? 0 : 1);
        langs.push_back(g.lang);
        axes.push_back(g.axis);
    }
    return per_language_report(pred_labels, gold_labels, langs, axes);
}

}  // namespace halludet
