#include "halludet/metrics.hpp"

#include <algorithm>

#include "halludet/errors.hpp"

namespace halludet {

Confusion& Confusion::operator+=(const Confusion& o) {
    for (int g = 0; g < 2; ++g) {
        for (int p = 0; p < 2; ++p) m[g][p] += o.m[g][p];
    }
    return *this;
}

Confusion confusion(const std::vector<int>& preds, const std::vector<int>& golds) {
    if (preds.size() != golds.size()) {
        throw DataError("confusion: prediction and gold vectors differ in length");
    }
    Confusion c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if ((preds[i] & ~1) != 0 || (golds[i] & ~1) != 0) {
            throw DataError("confusion: labels must be 0 or 1");
        }
        ++c.m[static_cast<std::size_t>(golds[i])][static_cast<std::size_t>(preds[i])];
    }
    return c;
}

double f1(const Confusion& c, int positive_class) {
    if (positive_class != 0 && positive_class != 1) {
        throw DataError("f1: positive_class must be 0 or 1");
    }
    const std::size_t p = static_cast<std::size_t>(positive_class);
    const std::size_t tp = c.m[p][p];
    const std::size_t fp = c.m[1 - p][p];
    const std::size_t fn = c.m[p][1 - p];
    const std::size_t denom = 2 * tp + fp + fn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double macro_f1(const Confusion& c) { return 0.5 * (f1(c, 0) + f1(c, 1)); }

EvalReport per_language_report(const std::vector<int>& preds, const std::vector<int>& golds,
                               const std::vector<std::string>& langs,
                               const std::vector<Axis>& axes) {
    const std::size_t n = preds.size();
    if (golds.size() != n || langs.size() != n || axes.size() != n) {
        throw DataError("per_language_report: unaligned inputs");
    }
    EvalReport report;
    report.n = n;

    std::map<std::string, std::array<Confusion, 2>> per_lang_axis;
    Confusion overall;
    for (std::size_t i = 0; i < n; ++i) {
        if ((preds[i] & ~1) != 0 || (golds[i] & ~1) != 0) {
            throw DataError("per_language_report: labels must be 0 or 1");
        }
        const std::size_t a = axes[i] == Axis::factuality ? 0 : 1;
        ++per_lang_axis[langs[i]][a].m[static_cast<std::size_t>(golds[i])][static_cast<std::size_t>(preds[i])];
        ++overall.m[static_cast<std::size_t>(golds[i])][static_cast<std::size_t>(preds[i])];
    }
    for (const auto& [lang, by_axis] : per_lang_axis) {
        LangScores scores;
        if (by_axis[0].total() > 0) scores.factuality_f1 = f1(by_axis[0], 1);
        if (by_axis[1].total() > 0) scores.fluency_f1 = f1(by_axis[1], 1);
        scores.pooled = by_axis[0];
        scores.pooled += by_axis[1];
        scores.n = scores.pooled.total();
        report.per_lang[lang] = scores;
    }
    report.macro_f1 = macro_f1(overall);
    return report;
}

GapRecord gap_report(const EvalReport& val, const EvalReport& test) {
    if (val.n == 0 || test.n == 0) {
        throw DataError("gap_report: both reports must be non-empty");
    }
    GapRecord gap;
    gap.val_macro_f1 = val.macro_f1;
    gap.test_macro_f1 = test.macro_f1;
    gap.delta = val.macro_f1 - test.macro_f1;
    for (const auto& [lang, vs] : val.per_lang) {
        auto it = test.per_lang.find(lang);
        if (it == test.per_lang.end()) continue;
        gap.per_lang_delta[lang] = macro_f1(vs.pooled) - macro_f1(it->second.pooled);
    }
    return gap;
}

std::vector<ErrorCase> export_errors(const std::vector<int>& preds, const std::vector<int>& golds,
                                     const std::vector<const Sample*>& samples,
                                     const std::vector<double>& confidences, std::size_t k) {
    const std::size_t n = preds.size();
    if (golds.size() != n || samples.size() != n || confidences.size() != n) {
        throw DataError("export_errors: unaligned inputs");
    }
    std::vector<ErrorCase> errors;
    for (std::size_t i = 0; i < n; ++i) {
        if (preds[i] == golds[i]) continue;
        ErrorCase e;
        e.id = samples[i]->id;
        e.text = samples[i]->text;
        e.predicted = preds[i] == 0 ? Label::correct : Label::hallucinated;
        e.gold = golds[i] == 0 ? Label::correct : Label::hallucinated;
        e.confidence = confidences[i];
        errors.push_back(std::move(e));
    }
    std::stable_sort(errors.begin(), errors.end(),
                     [](const ErrorCase& a, const ErrorCase& b) { return a.confidence > b.confidence; });
    if (errors.size() > k) errors.resize(k);
    return errors;
}

}  // namespace halludet
