#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "halludet/corpus.hpp"

namespace halludet {

enum class ObjectKind { date, name, location, number, claim };
enum class Category { factual_error, fabricated_detail, mixed_information, subtle };

std::string_view to_string(ObjectKind k);
std::string_view to_string(Category c);
ObjectKind object_kind_from_string(std::string_view s);
Category category_from_string(std::string_view s);

/// Ground-truth material a pair is built from.
struct FactRecord {
    std::string subject;
    std::string predicate;
    std::string object;
    ObjectKind object_kind = ObjectKind::claim;
    std::string domain;

    /// Throws DataError on empty fields or object/object_kind syntax mismatch.
    void validate() const;
};

std::vector<FactRecord> load_facts(const std::filesystem::path& path);
void save_facts(const std::vector<FactRecord>& facts, const std::filesystem::path& path);

struct GenerationSpec {
    std::size_t n_pairs = 1;
    std::map<Category, double> category_mix;     // empty = uniform over all four
    std::map<std::string, double> domain_mix;    // empty = unconstrained
    uint64_t seed = 0;
};

struct PairSamples {
    Sample correct;
    Sample hallucinated;
};

struct QcVerdict {
    bool pass = true;
    std::vector<int> failed_checks;      // 1: no distinction, 2: correct text wrong, 3: bad pattern
    std::vector<std::string> reasons;
};

/// Exact integer quotas for fractional shares (largest-remainder method).
std::vector<std::size_t> largest_remainder(const std::vector<double>& fractions, std::size_t total);

/// Abstract pair source. The deterministic template generator is the
/// default backend; an external LLM endpoint can implement the same
/// interface at real scale.
class PairGenerator {
public:
    virtual ~PairGenerator() = default;
    virtual PairSamples generate_pair(const FactRecord& fact, Category category, uint64_t seed) = 0;
};

class TemplateGenerator : public PairGenerator {
public:
    explicit TemplateGenerator(std::vector<FactRecord> pool);

    /// Deterministic for fixed (fact, category, seed). The correct sample
    /// states the fact via a seeded template; the hallucinated one differs
    /// in exactly the category-prescribed way:
    ///   factual_error  — object replaced by a distant wrong value (dates and
    ///                    numbers shift by 10..50; names and locations swap in
    ///                    a seeded decoy from the pool)
    ///   subtle         — near-miss: dates and numbers shift by 1..3; names
    ///                    and locations use the closest same-kind value
    ///   fabricated     — an invented clause from a fiction pool is appended
    ///   mixed          — the object of a seeded partner fact of the same
    ///                    kind is substituted
    PairSamples generate_pair(const FactRecord& fact, Category category, uint64_t seed) override;

    /// Validation gate: (1) texts differ, (2) correct text states the fact,
    /// (3) hallucinated text matches its category pattern.
    QcVerdict quality_check(const PairSamples& pair) const;

    const std::vector<FactRecord>& pool() const { return pool_; }
    const std::vector<std::string>& fiction_pool() const { return fiction_pool_; }

private:
    std::vector<FactRecord> pool_;
    std::vector<std::string> fiction_pool_;
    std::vector<std::string> templates_;
};

/// Emits 2*n_pairs samples (pair-ordered, correct first), exactly 50/50 by
/// label, with realized category/domain proportions within one pair of the
/// requested mixes. Every emitted pair passes quality_check.
std::vector<Sample> generate_corpus(const GenerationSpec& spec, const std::vector<FactRecord>& facts);

}  // namespace halludet
