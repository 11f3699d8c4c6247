#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "halludet/corpus.hpp"
#include "halludet/errors.hpp"
#include "halludet/rng.hpp"
#include "halludet/unicode.hpp"

using namespace halludet;
namespace fs = std::filesystem;

namespace {

Sample make_sample(const std::string& id, const std::string& text) {
    Sample s;
    s.id = id;
    s.text = text;
    s.label = Label::correct;
    s.lang = "en";
    s.source = Source::libreeval;
    return s;
}

fs::path temp_file(const char* name) {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "halludet_test_corpus";
        fs::create_directories(p);
        return p;
    }();
    return dir / name;
}

// Random unicode string over a few scripts, avoiding surrogates.
std::string random_unicode(Rng& rng, size_t max_cps) {
    static const std::pair<uint32_t, uint32_t> ranges[] = {
        {0x20, 0x7E},     {0xA1, 0x17F},    {0x390, 0x3C9},  {0x900, 0x97F},
        {0x980, 0x9FF},   {0xA80, 0xAFF},   {0xC00, 0xC7F},  {0xD00, 0xD7F},
        {0x300, 0x36F},   {0x1E00, 0x1EFF}, {0xAC00, 0xD7A3}};
    std::vector<uint32_t> cps;
    const size_t n = 1 + rng.below(max_cps);
    for (size_t i = 0; i < n; ++i) {
        const auto& r = ranges[rng.below(std::size(ranges))];
        cps.push_back(r.first + static_cast<uint32_t>(rng.below(r.second - r.first + 1)));
    }
    return uni::encode_utf8(cps);
}

}  // namespace

TEST_CASE("sample json line round-trips") {
    Sample s = make_sample("a:1", "hello world");
    s.axis = Axis::fluency;
    s.meta["k"] = "v";
    const Sample back = sample_from_json_line(sample_to_json_line(s));
    CHECK(back == s);
}

TEST_CASE("validate_sample flags the spec violations") {
    CHECK(validate_sample(make_sample("x", "ok text")).empty());

    Sample empty = make_sample("x", "");
    const auto v1 = validate_sample(empty);
    REQUIRE(v1.size() >= 1);
    CHECK(v1.front() == "empty text");

    Sample spaces = make_sample("x", "  \t ");
    CHECK(validate_sample(spaces).front() == "empty text");

    Sample bad_lang = make_sample("x", "text");
    bad_lang.lang = "xx-unknown";
    const auto v2 = validate_sample(bad_lang);
    REQUIRE(v2.size() == 1);
    CHECK(v2.front() == "unrecognized language code");

    Sample und = make_sample("x", "text");
    und.lang = "und";
    CHECK(validate_sample(und).empty());
}

TEST_CASE("lang recognition covers 639-1 codes only") {
    CHECK(is_recognized_lang("en"));
    CHECK(is_recognized_lang("gu"));
    CHECK(is_recognized_lang("te"));
    CHECK_FALSE(is_recognized_lang("xx"));
    CHECK_FALSE(is_recognized_lang("eng"));
    CHECK_FALSE(is_recognized_lang(""));
}

TEST_CASE("corpus write/read round-trips three samples in order") {
    std::vector<Sample> samples = {make_sample("a", "one"), make_sample("b", "two"),
                                   make_sample("c", "three")};
    samples[1].axis = Axis::factuality;
    samples[2].meta["origin"] = "here";
    const fs::path path = temp_file("three.jsonl");
    CHECK(write_corpus(samples, path) == 3);
    CHECK(read_corpus(path) == samples);
}

TEST_CASE("empty corpus file reads back empty") {
    const fs::path path = temp_file("empty.jsonl");
    CHECK(write_corpus({}, path) == 0);
    CHECK(read_corpus(path).empty());
}

TEST_CASE("provenance header line is skipped on read") {
    std::vector<Sample> samples = {make_sample("a", "one")};
    const fs::path path = temp_file("prov.jsonl");
    write_corpus(samples, path, R"({"command":"test"})");
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# ", 0) == 0);
    CHECK(read_corpus(path) == samples);
}

TEST_CASE("round-trip is byte-exact for newline and non-ascii text") {
    Sample s = make_sample("u:1", "line one\nline two — café नमस्ते");
    const fs::path path = temp_file("uni.jsonl");
    write_corpus({s}, path);
    const auto back = read_corpus(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].text == s.text);
}

TEST_CASE("round-trip property over random unicode corpora") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Sample> samples;
        const size_t n = 1 + rng.below(8);
        for (size_t i = 0; i < n; ++i) {
            Sample s = make_sample("r:" + std::to_string(i), random_unicode(rng, 40));
            if (rng.below(2)) s.meta["blob"] = random_unicode(rng, 10);
            samples.push_back(std::move(s));
        }
        const fs::path path = temp_file("fuzz.jsonl");
        write_corpus(samples, path);
        CHECK(read_corpus(path) == samples);
    }
}

TEST_CASE("malformed corpus line reports its line number") {
    const fs::path path = temp_file("bad.jsonl");
    std::ofstream out(path);
    out << sample_to_json_line(make_sample("a", "fine")) << "\n";
    out << "{not json\n";
    out.close();
    CHECK_THROWS_WITH_AS(read_corpus(path), doctest::Contains(":2:"), DataError);
}

TEST_CASE("unknown enum strings are data errors") {
    CHECK_THROWS_AS(label_from_string("Wrong"), DataError);
    CHECK_THROWS_AS(source_from_string("nope"), DataError);
    CHECK_THROWS_AS(axis_from_string("truthiness"), DataError);
}
