#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace halludet {

struct Encoded {
    std::vector<int32_t> ids;
    std::vector<uint8_t> mask;  // 1 for every real token (padding happens at batch time)
};

/// Whitespace word tokenizer with byte fallback. Reserved ids:
///   0 <s>  sequence start
///   1 </s> sequence end
///   2 <pad>
///   3..258 raw bytes
/// Word ids start at 259 in frequency order (ties broken lexicographically),
/// so a vocabulary build is deterministic for fixed input.
class WordTokenizer {
public:
    static constexpr int32_t kStartId = 0;
    static constexpr int32_t kEndId = 1;
    static constexpr int32_t kPadId = 2;
    static constexpr int32_t kByteBase = 3;
    static constexpr int32_t kWordBase = 259;

    static WordTokenizer build(const std::vector<std::string>& texts, std::size_t max_vocab,
                               std::size_t min_freq = 2);
    static WordTokenizer load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    /// Output length <= max_len; over-long inputs are truncated to exactly
    /// max_len with the start and end markers intact.
    Encoded encode(std::string_view text, std::size_t max_len) const;

    int32_t vocab_size() const { return kWordBase + static_cast<int32_t>(words_.size()); }

    /// Splits into word tokens: whitespace-separated, edge ASCII punctuation
    /// peeled off as single-character tokens.
    static std::vector<std::string> split_words(std::string_view text);

private:
    std::vector<std::string> words_;  // index = id - kWordBase
    std::unordered_map<std::string, int32_t> word_to_id_;
};

}  // namespace halludet
