#include "halludet/unicode.hpp"

#include <algorithm>

#include "unicode_tables.inc"

namespace halludet::uni {

namespace {

constexpr uint32_t kHangulSBase = 0xAC00;
constexpr uint32_t kHangulLBase = 0x1100;
constexpr uint32_t kHangulVBase = 0x1161;
constexpr uint32_t kHangulTBase = 0x11A7;
constexpr uint32_t kHangulLCount = 19;
constexpr uint32_t kHangulVCount = 21;
constexpr uint32_t kHangulTCount = 28;
constexpr uint32_t kHangulNCount = kHangulVCount * kHangulTCount;
constexpr uint32_t kHangulSCount = kHangulLCount * kHangulNCount;

uint8_t ccc_of(uint32_t cp) {
    const CccEntry* lo = kCcc;
    const CccEntry* hi = kCcc + kCccCount;
    auto it = std::lower_bound(lo, hi, cp, [](const CccEntry& e, uint32_t v) { return e.cp < v; });
    return (it != hi && it->cp == cp) ? it->ccc : 0;
}

const DecompEntry* decomp_of(uint32_t cp) {
    const DecompEntry* lo = kDecomp;
    const DecompEntry* hi = kDecomp + kDecompCount;
    auto it = std::lower_bound(lo, hi, cp, [](const DecompEntry& e, uint32_t v) { return e.cp < v; });
    return (it != hi && it->cp == cp) ? &*it : nullptr;
}

uint32_t compose_pair(uint32_t a, uint32_t b) {
    // Hangul LV / LVT composition is algorithmic.
    if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount && b >= kHangulVBase &&
        b < kHangulVBase + kHangulVCount) {
        return kHangulSBase + ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) * kHangulTCount;
    }
    if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount && (a - kHangulSBase) % kHangulTCount == 0 &&
        b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    const ComposeEntry* lo = kCompose;
    const ComposeEntry* hi = kCompose + kComposeCount;
    auto it = std::lower_bound(lo, hi, a, [](const ComposeEntry& e, uint32_t v) { return e.starter < v; });
    for (; it != hi && it->starter == a; ++it) {
        if (it->combiner == b) return it->composite;
    }
    return 0;
}

void decompose_into(uint32_t cp, std::vector<uint32_t>& out) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        uint32_t index = cp - kHangulSBase;
        out.push_back(kHangulLBase + index / kHangulNCount);
        out.push_back(kHangulVBase + (index % kHangulNCount) / kHangulTCount);
        uint32_t t = index % kHangulTCount;
        if (t != 0) out.push_back(kHangulTBase + t);
        return;
    }
    if (const DecompEntry* e = decomp_of(cp)) {
        for (uint32_t i = 0; i < e->length; ++i) out.push_back(kDecompPool[e->offset + i]);
        return;
    }
    out.push_back(cp);
}

// Canonical ordering: stable insertion pass over nonzero-ccc runs.
void canonical_order(std::vector<uint32_t>& cps) {
    for (size_t i = 1; i < cps.size(); ++i) {
        uint8_t c = ccc_of(cps[i]);
        if (c == 0) continue;
        size_t j = i;
        while (j > 0 && ccc_of(cps[j - 1]) > c) {
            std::swap(cps[j - 1], cps[j]);
            --j;
        }
    }
}

struct Decoded {
    uint32_t cp;
    size_t len;
};

// Decodes one codepoint at byte offset i. Invalid bytes yield U+FFFD with
// length 1 so offsets stay aligned.
Decoded decode_one(std::string_view s, size_t i) {
    const uint8_t b0 = static_cast<uint8_t>(s[i]);
    if (b0 < 0x80) return {b0, 1};
    size_t need = 0;
    uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        need = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        need = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        need = 3;
        cp = b0 & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (i + need >= s.size()) return {0xFFFD, 1};
    for (size_t k = 1; k <= need; ++k) {
        uint8_t bk = static_cast<uint8_t>(s[i + k]);
        if ((bk & 0xC0) != 0x80) return {0xFFFD, 1};
        cp = (cp << 6) | (bk & 0x3F);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) || (need == 1 && cp < 0x80) ||
        (need == 2 && cp < 0x800) || (need == 3 && cp < 0x10000)) {
        return {0xFFFD, 1};
    }
    return {cp, need + 1};
}

}  // namespace

std::vector<uint32_t> decode_utf8(std::string_view s) {
    std::vector<uint32_t> out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
        Decoded d = decode_one(s, i);
        out.push_back(d.cp);
        i += d.len;
    }
    return out;
}

std::string encode_utf8(const std::vector<uint32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 2);
    for (uint32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::string nfc(std::string_view s) {
    std::vector<uint32_t> cps = decode_utf8(s);

    std::vector<uint32_t> decomposed;
    decomposed.reserve(cps.size() + 8);
    for (uint32_t cp : cps) decompose_into(cp, decomposed);
    canonical_order(decomposed);

    // Composition pass per UAX #15: a character combines with the last
    // starter unless a preceding character with >= its combining class
    // blocks it.
    std::vector<uint32_t> out;
    out.reserve(decomposed.size());
    ptrdiff_t last_starter = -1;
    uint8_t prev_ccc = 0;
    for (uint32_t cp : decomposed) {
        uint8_t c = ccc_of(cp);
        if (last_starter >= 0 && (prev_ccc == 0 || prev_ccc < c)) {
            if (uint32_t comp = compose_pair(out[static_cast<size_t>(last_starter)], cp)) {
                out[static_cast<size_t>(last_starter)] = comp;
                continue;
            }
        }
        if (c == 0) {
            last_starter = static_cast<ptrdiff_t>(out.size());
            prev_ccc = 0;
        } else {
            prev_ccc = c;
        }
        out.push_back(cp);
    }
    return encode_utf8(out);
}

bool is_whitespace(uint32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::string_view strip(std::string_view s) {
    size_t begin = 0;
    size_t end = 0;
    bool found = false;
    for (size_t i = 0; i < s.size();) {
        Decoded d = decode_one(s, i);
        if (!is_whitespace(d.cp)) {
            if (!found) {
                begin = i;
                found = true;
            }
            end = i + d.len;
        }
        i += d.len;
    }
    if (!found) return std::string_view{};
    return s.substr(begin, end - begin);
}

}  // namespace halludet::uni
