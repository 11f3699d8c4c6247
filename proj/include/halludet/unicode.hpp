#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace halludet::uni {

/// Decodes UTF-8 into codepoints. Invalid byte sequences decode to U+FFFD
/// (one replacement per bogus byte) so normalization never throws.
std::vector<uint32_t> decode_utf8(std::string_view s);

std::string encode_utf8(const std::vector<uint32_t>& cps);

/// Canonical composition (NFC) of a UTF-8 string.
std::string nfc(std::string_view s);

/// True for codepoints with the White_Space property.
bool is_whitespace(uint32_t cp);

/// Strips leading/trailing Unicode whitespace.
std::string_view strip(std::string_view s);

}  // namespace halludet::uni
