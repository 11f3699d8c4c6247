#include "halludet/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "halludet/errors.hpp"

namespace halludet {

std::vector<std::string> WordTokenizer::split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        size_t b = 0;
        size_t e = cur.size();
        auto is_edge_punct = [](unsigned char c) { return c < 0x80 && std::ispunct(c); };
        while (b < e && is_edge_punct(static_cast<unsigned char>(cur[b]))) ++b;
        while (e > b && is_edge_punct(static_cast<unsigned char>(cur[e - 1]))) --e;
        for (size_t i = 0; i < b; ++i) words.push_back(std::string(1, cur[i]));
        if (e > b) words.push_back(cur.substr(b, e - b));
        for (size_t i = e; i < cur.size(); ++i) words.push_back(std::string(1, cur[i]));
        cur.clear();
    };
    for (char c : text) {
        if (static_cast<unsigned char>(c) < 0x80 && std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return words;
}

WordTokenizer WordTokenizer::build(const std::vector<std::string>& texts, std::size_t max_vocab,
                                   std::size_t min_freq) {
    std::map<std::string, std::size_t> freq;  // ordered: deterministic ties
    for (const std::string& t : texts) {
        for (std::string& w : split_words(t)) ++freq[std::move(w)];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    WordTokenizer tok;
    const std::size_t budget = max_vocab > static_cast<std::size_t>(kWordBase)
                                   ? max_vocab - static_cast<std::size_t>(kWordBase)
                                   : 0;
    for (const auto& [word, n] : ranked) {
        if (n < min_freq || tok.words_.size() >= budget) break;
        tok.word_to_id_[word] = kWordBase + static_cast<int32_t>(tok.words_.size());
        tok.words_.push_back(word);
    }
    return tok;
}

Encoded WordTokenizer::encode(std::string_view text, std::size_t max_len) const {
    if (max_len < 2) throw DataError("tokenizer: max_len must be >= 2");
    Encoded enc;
    enc.ids.reserve(std::min<std::size_t>(max_len, 64));
    enc.ids.push_back(kStartId);
    const std::size_t content_budget = max_len - 2;
    for (const std::string& w : split_words(text)) {
        if (enc.ids.size() - 1 >= content_budget) break;
        auto it = word_to_id_.find(w);
        if (it != word_to_id_.end()) {
            enc.ids.push_back(it->second);
        } else {
            for (unsigned char byte : w) {
                if (enc.ids.size() - 1 >= content_budget) break;
                enc.ids.push_back(kByteBase + static_cast<int32_t>(byte));
            }
        }
    }
    enc.ids.push_back(kEndId);
    enc.mask.assign(enc.ids.size(), 1);
    return enc;
}

void WordTokenizer::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write vocabulary: " + path.string());
    for (const std::string& w : words_) out << w << "\n";
}

WordTokenizer WordTokenizer::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot load vocabulary: " + path.string());
    WordTokenizer tok;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        tok.word_to_id_[line] = kWordBase + static_cast<int32_t>(tok.words_.size());
        tok.words_.push_back(line);
    }
    return tok;
}

}  // namespace halludet
