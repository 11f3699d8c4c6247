#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "halludet/corpus.hpp"

namespace halludet {

/// 2x2 confusion matrix, m[gold][pred]. Class 0 = correct, 1 = hallucinated.
struct Confusion {
    std::array<std::array<std::size_t, 2>, 2> m{{{0, 0}, {0, 0}}};

    std::size_t total() const { return m[0][0] + m[0][1] + m[1][0] + m[1][1]; }
    Confusion& operator+=(const Confusion& o);
};

Confusion confusion(const std::vector<int>& preds, const std::vector<int>& golds);

/// Binary F1 of the given positive class. Degenerate cases (no predicted and
/// no actual positives, or zero precision+recall) score 0 by convention.
double f1(const Confusion& c, int positive_class);

/// Unweighted mean of both per-class F1 scores.
double macro_f1(const Confusion& c);

struct GapRecord {
    double val_macro_f1 = 0.0;
    double test_macro_f1 = 0.0;
    double delta = 0.0;  // val - test
    std::map<std::string, double> per_lang_delta;
};

struct LangScores {
    std::optional<double> factuality_f1;
    std::optional<double> fluency_f1;
    Confusion pooled;  // both axes combined; sums to this language's n
    std::size_t n = 0;
};

struct EvalReport {
    std::map<std::string, LangScores> per_lang;
    double macro_f1 = 0.0;  // over the pooled confusion of all items
    std::size_t n = 0;
    std::optional<GapRecord> gap;
};

/// Groups aligned prediction/gold vectors by language and scores each axis.
/// Per-axis F1 uses `hallucinated` as the positive class. axes[i] controls
/// which column of the report row i lands in.
EvalReport per_language_report(const std::vector<int>& preds, const std::vector<int>& golds,
                               const std::vector<std::string>& langs,
                               const std::vector<Axis>& axes);

GapRecord gap_report(const EvalReport& val, const EvalReport& test);

struct ErrorCase {
    std::string id;
    std::string text;
    Label predicted = Label::correct;
    Label gold = Label::correct;
    double confidence = 0.0;
};

/// All misclassified samples sorted by confidence descending, truncated to k.
std::vector<ErrorCase> export_errors(const std::vector<int>& preds, const std::vector<int>& golds,
                                     const std::vector<const Sample*>& samples,
                                     const std::vector<double>& confidences, std::size_t k);

}  // namespace halludet
