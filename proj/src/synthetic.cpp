#include "halludet/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <optional>

#include "halludet/errors.hpp"
#include "halludet/rng.hpp"
#include "json.hpp"

namespace halludet {

namespace {

using json = nlohmann::json;

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Dates are 4-digit years or YYYY-MM-DD; the year is the perturbable part.
std::optional<long> parse_year(const std::string& s) {
    if (s.size() >= 4 && is_ascii_digit(s[0]) && is_ascii_digit(s[1]) && is_ascii_digit(s[2]) &&
        is_ascii_digit(s[3]) && (s.size() == 4 || s[4] == '-')) {
        return std::strtol(s.substr(0, 4).c_str(), nullptr, 10);
    }
    return std::nullopt;
}

std::optional<long> parse_integer(const std::string& s) {
    if (s.empty()) return std::nullopt;
    size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    for (size_t k = i; k < s.size(); ++k) {
        if (!is_ascii_digit(s[k])) return std::nullopt;
    }
    return std::strtol(s.c_str(), nullptr, 10);
}

std::string replace_year(const std::string& object, long new_year) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04ld", new_year);  // years keep 4 digits
    std::string out = buf;
    if (object.size() > 4) out += object.substr(4);
    return out;
}

bool is_word_char(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

// Substring match with token boundaries, so "8" does not match inside "1889".
bool contains_value(const std::string& text, const std::string& value) {
    if (value.empty()) return false;
    size_t pos = 0;
    while ((pos = text.find(value, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(text[pos - 1]));
        const size_t end = pos + value.size();
        const bool right_ok = end == text.size() || !is_word_char(static_cast<unsigned char>(text[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1);
    std::vector<size_t> cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), size_t{0});
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

bool perturbable(ObjectKind k) {
    return k == ObjectKind::date || k == ObjectKind::name || k == ObjectKind::location ||
           k == ObjectKind::number;
}

constexpr long kDistantMin = 10;
constexpr long kDistantMax = 50;
constexpr long kNearMissMin = 1;
constexpr long kNearMissMax = 3;

}  // namespace

std::string_view to_string(ObjectKind k) {
    switch (k) {
        case ObjectKind::date: return "date";
        case ObjectKind::name: return "name";
        case ObjectKind::location: return "location";
        case ObjectKind::number: return "number";
        case ObjectKind::claim: return "claim";
    }
    return "unknown";
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::factual_error: return "factual_error";
        case Category::fabricated_detail: return "fabricated_detail";
        case Category::mixed_information: return "mixed_information";
        case Category::subtle: return "subtle";
    }
    return "unknown";
}

ObjectKind object_kind_from_string(std::string_view s) {
    if (s == "date") return ObjectKind::date;
    if (s == "name") return ObjectKind::name;
    if (s == "location") return ObjectKind::location;
    if (s == "number") return ObjectKind::number;
    if (s == "claim") return ObjectKind::claim;
    throw DataError("unknown object_kind: '" + std::string(s) + "'");
}

Category category_from_string(std::string_view s) {
    if (s == "factual_error") return Category::factual_error;
    if (s == "fabricated_detail") return Category::fabricated_detail;
    if (s == "mixed_information") return Category::mixed_information;
    if (s == "subtle") return Category::subtle;
    throw DataError("unknown category: '" + std::string(s) + "'");
}

void FactRecord::validate() const {
    if (subject.empty() || predicate.empty() || object.empty() || domain.empty()) {
        throw DataError("fact record has empty fields (subject='" + subject + "')");
    }
    if (object_kind == ObjectKind::date && !parse_year(object)) {
        throw DataError("fact object '" + object + "' does not parse as a date");
    }
    if (object_kind == ObjectKind::number && !parse_integer(object)) {
        throw DataError("fact object '" + object + "' does not parse as a number");
    }
}

std::vector<FactRecord> load_facts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open fact table: " + path.string());
    std::vector<FactRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        json j;
        try {
            j = json::parse(line);
            FactRecord f;
            f.subject = j.at("subject").get<std::string>();
            f.predicate = j.at("predicate").get<std::string>();
            f.object = j.at("object").get<std::string>();
            f.object_kind = object_kind_from_string(j.at("object_kind").get<std::string>());
            f.domain = j.at("domain").get<std::string>();
            f.validate();
            out.push_back(std::move(f));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void save_facts(const std::vector<FactRecord>& facts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write fact table: " + path.string());
    for (const FactRecord& f : facts) {
        json j;
        j["subject"] = f.subject;
        j["predicate"] = f.predicate;
        j["object"] = f.object;
        j["object_kind"] = std::string(to_string(f.object_kind));
        j["domain"] = f.domain;
        out << j.dump() << "\n";
    }
}

std::vector<std::size_t> largest_remainder(const std::vector<double>& fractions, std::size_t total) {
    std::vector<std::size_t> quotas(fractions.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;  // (fractional part, index)
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double share = fractions[i] * static_cast<double>(total);
        quotas[i] = static_cast<std::size_t>(share);
        assigned += quotas[i];
        remainders.emplace_back(share - static_cast<double>(quotas[i]), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
        quotas[remainders[k % remainders.size()].second] += 1;
    }
    return quotas;
}

TemplateGenerator::TemplateGenerator(std::vector<FactRecord> pool) : pool_(std::move(pool)) {
    for (const FactRecord& f : pool_) f.validate();
    templates_ = {
        "%s %p %o.",
        "It is well documented that %s %p %o.",
        "According to standard reference works, %s %p %o.",
        "Reliable sources confirm that %s %p %o.",
    };
    fiction_pool_ = {
        "a finding later celebrated by the Meridian Antiquities Circle",
        "which was independently verified by the Coastal Plains Observatory",
        "according to the recovered archives of the Veyland Institute",
        "a fact first popularized by the explorer Casimir Veldt",
        "as recounted in the Halloway Expedition journals",
        "following the famous Ostrander symposium of that era",
        "which the Brightwater Society still commemorates every year",
        "a detail preserved in the Quillon family manuscripts",
        "as confirmed by the long-running Tervall field survey",
        "which later inspired the celebrated Ashdown lecture series",
        "a point reiterated in the Núñez-Okafor correspondence",
        "as catalogued by the Wexford Bureau of Records",
    };
}

namespace {

std::string render(const std::string& tmpl, const FactRecord& f, const std::string& object) {
    std::string out;
    out.reserve(tmpl.size() + f.subject.size() + f.predicate.size() + object.size());
    for (size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '%' && i + 1 < tmpl.size()) {
            switch (tmpl[i + 1]) {
                case 's': out += f.subject; ++i; continue;
                case 'p': out += f.predicate; ++i; continue;
                case 'o': out += object; ++i; continue;
                default: break;
            }
        }
        out.push_back(tmpl[i]);
    }
    return out;
}

long perturb_value(long value, long min_mag, long max_mag, Rng& rng) {
    const long mag = min_mag + static_cast<long>(rng.below(static_cast<uint64_t>(max_mag - min_mag + 1)));
    const bool negative = (rng.next() & 1) != 0;
    long result = negative ? value - mag : value + mag;
    if (result <= 0) result = value + mag;  // keep years/counts positive
    return result;
}

}  // namespace

PairSamples TemplateGenerator::generate_pair(const FactRecord& fact, Category category,
                                             uint64_t seed) {
    fact.validate();
    if ((category == Category::factual_error || category == Category::subtle) &&
        !perturbable(fact.object_kind)) {
        throw DataError("unperturbable: " + std::string(to_string(fact.object_kind)) +
                        " object cannot take category " + std::string(to_string(category)));
    }

    Rng rng(seed);
    const std::string& tmpl = templates_[rng.below(templates_.size())];
    const std::string correct_text = render(tmpl, fact, fact.object);

    std::string halluc_text;
    std::string halluc_object;
    std::string partner_subject;

    auto pick_same_kind = [&](bool exclude_same_domain_only, bool nearest) -> const FactRecord* {
        (void)exclude_same_domain_only;
        std::vector<const FactRecord*> candidates;
        for (const FactRecord& f : pool_) {
            if (f.object_kind == fact.object_kind && f.object != fact.object) {
                candidates.push_back(&f);
            }
        }
        if (candidates.empty()) return nullptr;
        if (nearest) {
            const FactRecord* best = candidates[0];
            size_t best_d = levenshtein(fact.object, best->object);
            for (const FactRecord* c : candidates) {
                const size_t d = levenshtein(fact.object, c->object);
                if (d < best_d || (d == best_d && c->object < best->object)) {
                    best = c;
                    best_d = d;
                }
            }
            return best;
        }
        return candidates[rng.below(candidates.size())];
    };

    switch (category) {
        case Category::factual_error:
        case Category::subtle: {
            const bool near = category == Category::subtle;
            const long lo = near ? kNearMissMin : kDistantMin;
            const long hi = near ? kNearMissMax : kDistantMax;
            if (fact.object_kind == ObjectKind::date) {
                const long year = *parse_year(fact.object);
                halluc_object = replace_year(fact.object, perturb_value(year, lo, hi, rng));
            } else if (fact.object_kind == ObjectKind::number) {
                const long value = *parse_integer(fact.object);
                halluc_object = std::to_string(perturb_value(value, lo, hi, rng));
            } else {
                const FactRecord* other = pick_same_kind(false, /*nearest=*/near);
                if (!other) {
                    throw DataError("unperturbable: no alternative " +
                                    std::string(to_string(fact.object_kind)) + " values in pool");
                }
                halluc_object = other->object;
            }
            halluc_text = render(tmpl, fact, halluc_object);
            break;
        }
        case Category::fabricated_detail: {
            const std::string& clause = fiction_pool_[rng.below(fiction_pool_.size())];
            std::string base = correct_text;
            if (!base.empty() && base.back() == '.') base.pop_back();
            halluc_text = base + ", " + clause + ".";
            halluc_object = clause;
            break;
        }
        case Category::mixed_information: {
            const FactRecord* partner = pick_same_kind(false, /*nearest=*/false);
            if (!partner) {
                throw DataError("infeasible: no partner fact of kind " +
                                std::string(to_string(fact.object_kind)) + " to mix with");
            }
            halluc_object = partner->object;
            partner_subject = partner->subject;
            halluc_text = render(tmpl, fact, halluc_object);
            break;
        }
    }

    PairSamples pair;
    pair.correct.text = correct_text;
    pair.correct.label = Label::correct;
    pair.hallucinated.text = halluc_text;
    pair.hallucinated.label = Label::hallucinated;
    for (Sample* s : {&pair.correct, &pair.hallucinated}) {
        s->lang = "en";
        s->source = Source::generated;
        s->meta["category"] = std::string(to_string(category));
        s->meta["subject"] = fact.subject;
        s->meta["predicate"] = fact.predicate;
        s->meta["object"] = fact.object;
        s->meta["object_kind"] = std::string(to_string(fact.object_kind));
        s->meta["domain"] = fact.domain;
    }
    pair.hallucinated.meta["halluc_object"] = halluc_object;
    if (!partner_subject.empty()) pair.hallucinated.meta["partner_subject"] = partner_subject;
    return pair;
}

QcVerdict TemplateGenerator::quality_check(const PairSamples& pair) const {
    QcVerdict verdict;
    auto fail = [&](int check, std::string reason) {
        verdict.pass = false;
        verdict.failed_checks.push_back(check);
        verdict.reasons.push_back(std::move(reason));
    };

    // (1) clear distinction
    if (pair.correct.text == pair.hallucinated.text) {
        fail(1, "correct and hallucinated texts are identical");
    }

    // (2) factual accuracy of the correct sample
    const auto& cmeta = pair.correct.meta;
    auto get = [](const std::map<std::string, std::string>& m,
                  const std::string& k) -> const std::string* {
        auto it = m.find(k);
        return it == m.end() ? nullptr : &it->second;
    };
    const std::string* object = get(cmeta, "object");
    const std::string* subject = get(cmeta, "subject");
    if (!object || !subject || !contains_value(pair.correct.text, *object) ||
        pair.correct.text.find(*subject) == std::string::npos) {
        fail(2, "correct text does not state its fact record");
    }

    // (3) hallucinated text parses under the category's pattern
    const auto& hmeta = pair.hallucinated.meta;
    const std::string* cat_str = get(hmeta, "category");
    const std::string* halluc_object = get(hmeta, "halluc_object");
    const std::string* kind_str = get(hmeta, "object_kind");
    if (!cat_str || !halluc_object || !kind_str || !object) {
        fail(3, "hallucinated sample lacks generation metadata");
        return verdict;
    }
    const Category cat = category_from_string(*cat_str);
    const ObjectKind kind = object_kind_from_string(*kind_str);
    const std::string& htext = pair.hallucinated.text;

    auto check_numeric_offset = [&](long lo, long hi) {
        std::optional<long> a = kind == ObjectKind::date ? parse_year(*object) : parse_integer(*object);
        std::optional<long> b =
            kind == ObjectKind::date ? parse_year(*halluc_object) : parse_integer(*halluc_object);
        if (!a || !b) {
            fail(3, "perturbed value does not parse");
            return;
        }
        const long delta = std::labs(*a - *b);
        if (delta < lo || (hi > 0 && delta > hi)) {
            fail(3, "offset " + std::to_string(delta) + " outside [" + std::to_string(lo) + "," +
                        std::to_string(hi) + "]");
        }
    };
    auto check_known_value = [&](bool exclude_same_fact) {
        (void)exclude_same_fact;
        bool known = false;
        for (const FactRecord& f : pool_) {
            if (f.object_kind == kind && f.object == *halluc_object && f.object != *object) {
                known = true;
                break;
            }
        }
        if (!known) fail(3, "substituted value '" + *halluc_object + "' is not a known decoy");
    };
    auto check_replacement_text = [&] {
        if (!contains_value(htext, *halluc_object) || contains_value(htext, *object)) {
            fail(3, "hallucinated text does not realize the substitution");
        }
    };

    switch (cat) {
        case Category::factual_error:
            if (kind == ObjectKind::date || kind == ObjectKind::number) {
                check_numeric_offset(kNearMissMax + 1, 0);  // distant: beyond near-miss range
            } else {
                check_known_value(false);
            }
            check_replacement_text();
            break;
        case Category::subtle:
            if (kind == ObjectKind::date || kind == ObjectKind::number) {
                check_numeric_offset(kNearMissMin, kNearMissMax);
                check_replacement_text();
            } else {
                check_known_value(false);
                check_replacement_text();
            }
            break;
        case Category::fabricated_detail: {
            bool known_clause = false;
            for (const std::string& clause : fiction_pool_) {
                if (*halluc_object == clause) {
                    known_clause = true;
                    break;
                }
            }
            if (!known_clause || htext.find(*halluc_object) == std::string::npos ||
                htext.rfind(pair.correct.text.substr(0, pair.correct.text.size() - 1), 0) != 0) {
                fail(3, "appended clause is not from the fiction pool");
            }
            break;
        }
        case Category::mixed_information:
            check_known_value(true);
            check_replacement_text();
            break;
    }
    return verdict;
}

std::vector<Sample> generate_corpus(const GenerationSpec& spec,
                                    const std::vector<FactRecord>& facts) {
    if (spec.n_pairs < 1) throw DataError("generate_corpus: n_pairs must be >= 1");
    if (facts.empty()) throw DataError("generate_corpus: fact table is empty");

    std::map<Category, double> category_mix = spec.category_mix;
    if (category_mix.empty()) {
        for (Category c : {Category::factual_error, Category::fabricated_detail,
                           Category::mixed_information, Category::subtle}) {
            category_mix[c] = 0.25;
        }
    }
    auto check_mix_sum = [](double sum, const char* which) {
        if (std::abs(sum - 1.0) > 1e-6) {
            throw DataError(std::string("generate_corpus: ") + which + " mix sums to " +
                            std::to_string(sum) + ", expected 1");
        }
    };
    {
        double s = 0;
        for (auto& [_, v] : category_mix) s += v;
        check_mix_sum(s, "category");
    }

    // Category quotas (largest remainder), then domain quotas, then a
    // northwest-corner fill so both marginals hold exactly.
    std::vector<Category> cats;
    std::vector<double> cat_fracs;
    for (const auto& [c, f] : category_mix) {
        cats.push_back(c);
        cat_fracs.push_back(f);
    }
    const std::vector<std::size_t> cat_quota = largest_remainder(cat_fracs, spec.n_pairs);

    std::vector<std::string> domains;
    std::vector<std::size_t> dom_quota;
    if (!spec.domain_mix.empty()) {
        double s = 0;
        std::vector<double> dom_fracs;
        for (const auto& [d, f] : spec.domain_mix) {
            domains.push_back(d);
            dom_fracs.push_back(f);
            s += f;
        }
        check_mix_sum(s, "domain");
        dom_quota = largest_remainder(dom_fracs, spec.n_pairs);
    } else {
        domains.push_back("");  // unconstrained
        dom_quota.push_back(spec.n_pairs);
    }

    TemplateGenerator generator(facts);

    auto candidates_for = [&](Category cat, const std::string& domain) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < facts.size(); ++i) {
            const FactRecord& f = facts[i];
            if (!domain.empty() && f.domain != domain) continue;
            if ((cat == Category::factual_error || cat == Category::subtle) &&
                !perturbable(f.object_kind)) {
                continue;
            }
            if (cat == Category::mixed_information) {
                bool has_partner = false;
                for (const FactRecord& g : facts) {
                    if (g.object_kind == f.object_kind && g.object != f.object) {
                        has_partner = true;
                        break;
                    }
                }
                if (!has_partner) continue;
            }
            idx.push_back(i);
        }
        return idx;
    };

    struct Assignment {
        std::size_t fact_index;
        Category category;
    };
    std::vector<Assignment> assignments;
    assignments.reserve(spec.n_pairs);

    std::vector<std::size_t> cat_left = cat_quota;
    std::vector<std::size_t> dom_left = dom_quota;
    for (std::size_t ci = 0; ci < cats.size(); ++ci) {
        for (std::size_t di = 0; di < domains.size() && cat_left[ci] > 0; ++di) {
            const std::size_t take = std::min(cat_left[ci], dom_left[di]);
            if (take == 0) continue;
            std::vector<std::size_t> cand = candidates_for(cats[ci], domains[di]);
            if (cand.empty()) {
                throw DataError("generate_corpus: infeasible mix, no " +
                                std::string(to_string(cats[ci])) + "-compatible facts" +
                                (domains[di].empty() ? "" : " in domain '" + domains[di] + "'"));
            }
            Rng cell_rng(derive_seed(spec.seed, (ci + 1) * 1000003 + di));
            cell_rng.shuffle(cand);
            for (std::size_t k = 0; k < take; ++k) {
                assignments.push_back({cand[k % cand.size()], cats[ci]});
            }
            cat_left[ci] -= take;
            dom_left[di] -= take;
        }
        if (cat_left[ci] > 0) {
            throw DataError("generate_corpus: infeasible mix, domain quotas exhausted for " +
                            std::string(to_string(cats[ci])));
        }
    }

    std::vector<Sample> out;
    out.reserve(2 * spec.n_pairs);
    char idbuf[32];
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const Assignment& a = assignments[i];
        PairSamples pair =
            generator.generate_pair(facts[a.fact_index], a.category, derive_seed(spec.seed, i));
        QcVerdict verdict = generator.quality_check(pair);
        if (!verdict.pass) {
            throw StageError("generated pair " + std::to_string(i) +
                             " failed quality check: " + verdict.reasons.front());
        }
        std::snprintf(idbuf, sizeof(idbuf), "generated:%06zu", i);
        pair.correct.id = std::string(idbuf) + ":c";
        pair.hallucinated.id = std::string(idbuf) + ":h";
        out.push_back(std::move(pair.correct));
        out.push_back(std::move(pair.hallucinated));
    }
    return out;
}

}  // namespace halludet
