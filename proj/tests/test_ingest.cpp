#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "halludet/corpus.hpp"
#include "halludet/errors.hpp"
#include "halludet/ingest.hpp"

using namespace halludet;
namespace fs = std::filesystem;

namespace {

const fs::path kData = HALLUDET_DATA_DIR;

fs::path temp_file(const char* name) {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "halludet_test_ingest";
        fs::create_directories(p);
        return p;
    }();
    return dir / name;
}

// Independent oracle: counts occurrences of a literal needle in the raw
// fixture bytes, one line at a time, with no JSON/CSV machinery.
std::map<std::string, size_t> count_raw(const fs::path& path,
                                        const std::vector<std::string>& needles) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::map<std::string, size_t> counts;
    std::string line;
    while (std::getline(in, line)) {
        for (const std::string& needle : needles) {
            if (line.find(needle) != std::string::npos) ++counts[needle];
        }
    }
    return counts;
}

size_t raw_line_count(const fs::path& path, bool skip_header) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++n;
    }
    return skip_header ? n - 1 : n;
}

SourceDescriptor toy_descriptor() {
    SourceDescriptor d;
    d.name = Source::libreeval;
    d.input_format = InputFormat::jsonl;
    d.text_field = "text";
    d.label_field = "label";
    d.default_lang = "en";
    d.label_map = {{"good", LabelTarget::correct},
                   {"bad", LabelTarget::hallucinated},
                   {"skip", LabelTarget::drop}};
    return d;
}

}  // namespace

TEST_CASE("the combined shroom fixture carries the 74/26 split (536/188 over 724)") {
    // independent line-count oracle over the raw files
    const auto c1 = count_raw(kData / "fixtures/shroom_v1.jsonl",
                              {"\"Not Hallucination\"", "\"Hallucination\""});
    const auto c2 = count_raw(kData / "fixtures/shroom_v2.jsonl",
                              {"\"Not Hallucination\"", "\"Hallucination\""});
    // "Not Hallucination" contains "Hallucination"; correct the overlap
    const size_t raw_correct = c1.at("\"Not Hallucination\"") + c2.at("\"Not Hallucination\"");
    const size_t raw_halluc = c1.at("\"Hallucination\"") + c2.at("\"Hallucination\"") - raw_correct;
    CHECK(raw_correct == 536);
    CHECK(raw_halluc == 188);

    // ingest agrees with the raw counts
    size_t correct = 0;
    size_t halluc = 0;
    size_t emitted = 0;
    for (const char* variant : {"v1", "v2"}) {
        const auto desc =
            load_descriptor(kData / "descriptors" / (std::string("shroom_") + variant + ".json"));
        auto [samples, summary] = ingest_source_to_vector(
            desc, kData / "fixtures" / (std::string("shroom_") + variant + ".jsonl"));
        emitted += summary.emitted;
        for (const Sample& s : samples) (s.label == Label::correct ? correct : halluc) += 1;
    }
    CHECK(emitted == 724);
    CHECK(correct == 536);
    CHECK(halluc == 188);
}

TEST_CASE("every bundled fixture ingests with no unmapped labels and conserves its summary") {
    const std::vector<std::tuple<std::string, std::string, bool>> plan = {
        {"shroom_v1.json", "shroom_v1.jsonl", false},
        {"shroom_v2.json", "shroom_v2.jsonl", false},
        {"synthetic_100k.json", "synthetic_100k.jsonl", false},
        {"libreeval.json", "libreeval.csv", true},
        {"factchd.json", "factchd.tsv", true},
    };
    for (const auto& [desc_name, fixture_name, has_header] : plan) {
        CAPTURE(fixture_name);
        const auto desc = load_descriptor(kData / "descriptors" / desc_name);
        auto [samples, summary] = ingest_source_to_vector(desc, kData / "fixtures" / fixture_name);
        // summary conservation against an independent raw line count
        CHECK(summary.emitted + summary.dropped + summary.errored ==
              raw_line_count(kData / "fixtures" / fixture_name, has_header));
        CHECK(summary.errored == 0);
        CHECK(samples.size() == summary.emitted);
        for (const Sample& s : samples) CHECK(validate_sample(s).empty());
    }
}

TEST_CASE("libreeval drop rows are counted but not emitted") {
    const auto desc = load_descriptor(kData / "descriptors/libreeval.json");
    auto [samples, summary] = ingest_source_to_vector(desc, kData / "fixtures/libreeval.csv");
    CHECK(summary.dropped == 20);
    CHECK(summary.emitted == 300);
    for (const Sample& s : samples) CHECK(s.source == Source::libreeval);
}

TEST_CASE("factchd maps NON-FACTUAL to hallucinated") {
    const fs::path path = temp_file("factchd_one.tsv");
    {
        std::ofstream out(path);
        out << "claim_id\tclaim\tverdict\n";
        out << "c1\tA claim under review.\tNON-FACTUAL\n";
    }
    const auto desc = load_descriptor(kData / "descriptors/factchd.json");
    auto [samples, summary] = ingest_source_to_vector(desc, path);
    REQUIRE(summary.emitted == 1);
    CHECK(samples[0].label == Label::hallucinated);
    CHECK(samples[0].lang == "en");
    CHECK(samples[0].id == "c1");
}

TEST_CASE("empty input yields an empty stream and a zero summary") {
    const fs::path path = temp_file("empty.jsonl");
    std::ofstream(path).close();
    auto [samples, summary] = ingest_source_to_vector(toy_descriptor(), path);
    CHECK(samples.empty());
    CHECK(summary.emitted == 0);
    CHECK(summary.dropped == 0);
    CHECK(summary.errored == 0);
}

TEST_CASE("a novel raw label always raises an unmapped-label error") {
    const fs::path path = temp_file("novel.jsonl");
    {
        std::ofstream out(path);
        out << R"({"text":"fine","label":"good"})" << "\n";
        out << R"({"text":"novel","label":"mystery"})" << "\n";
    }
    const auto run = [&](bool strict) {
        return ingest_source(toy_descriptor(), path, [](Sample&&) {}, strict);
    };
    CHECK_THROWS_WITH_AS(run(true), doctest::Contains("mystery"), UnmappedLabelError);
    // lenient mode downgrades malformed records, never unmapped labels
    CHECK_THROWS_AS(run(false), UnmappedLabelError);
}

TEST_CASE("malformed records throw in strict mode and are counted in lenient mode") {
    const fs::path path = temp_file("malformed.jsonl");
    {
        std::ofstream out(path);
        out << R"({"text":"ok","label":"good"})" << "\n";
        out << "{broken\n";
        out << R"({"text":"ok two","label":"bad"})" << "\n";
    }
    CHECK_THROWS_WITH_AS(ingest_source_to_vector(toy_descriptor(), path),
                         doctest::Contains("line 2"), DataError);
    auto [samples, summary] = ingest_source_to_vector(toy_descriptor(), path, /*strict=*/false);
    CHECK(summary.emitted == 2);
    CHECK(summary.errored == 1);
    CHECK(summary.emitted + summary.dropped + summary.errored == 3);
}

TEST_CASE("a missing required field names the field") {
    const fs::path path = temp_file("missing_field.jsonl");
    {
        std::ofstream out(path);
        out << R"({"label":"good"})" << "\n";
    }
    CHECK_THROWS_WITH_AS(ingest_source_to_vector(toy_descriptor(), path),
                         doctest::Contains("'text'"), DataError);
}

TEST_CASE("derived ids are source:basename:index and collisions are rejected") {
    const fs::path path = temp_file("ids.jsonl");
    {
        std::ofstream out(path);
        out << R"({"text":"first","label":"good"})" << "\n";
        out << R"({"text":"second","label":"bad"})" << "\n";
    }
    auto [samples, summary] = ingest_source_to_vector(toy_descriptor(), path);
    REQUIRE(samples.size() == 2);
    CHECK(samples[0].id == "libreeval:ids:0");
    CHECK(samples[1].id == "libreeval:ids:1");

    SourceDescriptor with_ids = toy_descriptor();
    with_ids.id_field = "uid";
    const fs::path dup = temp_file("dup_ids.jsonl");
    {
        std::ofstream out(dup);
        out << R"({"uid":"same","text":"first","label":"good"})" << "\n";
        out << R"({"uid":"same","text":"second","label":"bad"})" << "\n";
    }
    CHECK_THROWS_WITH_AS(ingest_source_to_vector(with_ids, dup), doctest::Contains("duplicate id"),
                         DataError);
}

TEST_CASE("descriptor invariants are enforced") {
    SourceDescriptor d = toy_descriptor();
    d.lang_field = "lang";  // both lang_field and default_lang set
    CHECK_THROWS_WITH_AS(d.validate(), doctest::Contains("exactly one"), DataError);

    SourceDescriptor neither = toy_descriptor();
    neither.default_lang.reset();
    CHECK_THROWS_AS(neither.validate(), DataError);

    SourceDescriptor no_map = toy_descriptor();
    no_map.label_map.clear();
    CHECK_THROWS_AS(no_map.validate(), DataError);
}

TEST_CASE("descriptors round-trip through their file form") {
    const fs::path path = temp_file("desc.json");
    SourceDescriptor d = toy_descriptor();
    d.id_field = "uid";
    d.domain = "Mixed";
    save_descriptor(d, path);
    const SourceDescriptor back = load_descriptor(path);
    CHECK(back.name == d.name);
    CHECK(back.text_field == d.text_field);
    CHECK(back.label_map.size() == d.label_map.size());
    CHECK(back.id_field == d.id_field);
    CHECK(back.domain == d.domain);
}

TEST_CASE("csv quoting handles embedded commas and quotes") {
    SourceDescriptor d = toy_descriptor();
    d.input_format = InputFormat::csv;
    const fs::path path = temp_file("quoted.csv");
    {
        std::ofstream out(path);
        out << "text,label\n";
        out << "\"a, quoted \"\"value\"\", here\",good\n";
    }
    auto [samples, summary] = ingest_source_to_vector(d, path);
    REQUIRE(summary.emitted == 1);
    CHECK(samples[0].text == "a, quoted \"value\", here");
}

TEST_CASE("scalar json fields are stringified for the label map") {
    SourceDescriptor d = toy_descriptor();
    d.label_map = {{"0", LabelTarget::correct}, {"1", LabelTarget::hallucinated}};
    const fs::path path = temp_file("scalar.jsonl");
    {
        std::ofstream out(path);
        out << R"({"text":"zero","label":0})" << "\n";
        out << R"({"text":"one","label":1})" << "\n";
    }
    auto [samples, summary] = ingest_source_to_vector(d, path);
    REQUIRE(summary.emitted == 2);
    CHECK(samples[0].label == Label::correct);
    CHECK(samples[1].label == Label::hallucinated);
}
