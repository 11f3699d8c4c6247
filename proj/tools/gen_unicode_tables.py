#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

The tables drive canonical (NFC) normalization: full canonical
decompositions, nonzero combining classes, and the primary composite
pairs that survive composition. Hangul syllables are handled
algorithmically at runtime and are excluded here.
"""
import sys
import unicodedata

HANGUL_BASE = 0xAC00
HANGUL_END = 0xD7A3
MAX_CP = 0x110000


def is_hangul(cp: int) -> bool:
    return HANGUL_BASE <= cp <= HANGUL_END


def main(out_path: str) -> None:
    decomp = {}   # cp -> full canonical decomposition (list of cps)
    ccc = {}      # cp -> nonzero combining class
    compose = []  # (starter, combiner) -> composite

    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF or is_hangul(cp):
            continue
        ch = chr(cp)
        c = unicodedata.combining(ch)
        if c != 0:
            ccc[cp] = c
        nfd = unicodedata.normalize("NFD", ch)
        if nfd != ch:
            decomp[cp] = [ord(x) for x in nfd]
        # primary composite: canonical two-char decomposition, starter first,
        # and recomposition under NFC actually yields this codepoint
        raw = unicodedata.decomposition(ch)
        if raw and not raw.startswith("<"):
            parts = [int(x, 16) for x in raw.split()]
            if len(parts) == 2 and unicodedata.combining(chr(parts[0])) == 0:
                if unicodedata.normalize("NFC", chr(parts[0]) + chr(parts[1])) == ch:
                    compose.append((parts[0], parts[1], cp))

    compose.sort()
    decomp_keys = sorted(decomp)
    pool = []
    entries = []  # (cp, offset, length)
    for cp in decomp_keys:
        seq = decomp[cp]
        entries.append((cp, len(pool), len(seq)))
        pool.extend(seq)
    ccc_keys = sorted(ccc)

    with open(out_path, "w") as f:
        w = f.write
        w("// Generated by tools/gen_unicode_tables.py (unicodedata %s). Do not edit.\n"
          % unicodedata.unidata_version)
        w("#include <cstdint>\n\n")
        w("namespace halludet::uni {\n\n")

        w("struct DecompEntry { uint32_t cp; uint32_t offset; uint32_t length; };\n")
        w("struct CccEntry { uint32_t cp; uint8_t ccc; };\n")
        w("struct ComposeEntry { uint32_t starter; uint32_t combiner; uint32_t composite; };\n\n")

        w("inline constexpr DecompEntry kDecomp[] = {\n")
        for cp, off, ln in entries:
            w("    {0x%X, %d, %d},\n" % (cp, off, ln))
        w("};\n")
        w("inline constexpr uint32_t kDecompCount = %d;\n\n" % len(entries))

        w("inline constexpr uint32_t kDecompPool[] = {\n")
        for i in range(0, len(pool), 12):
            w("    " + ", ".join("0x%X" % x for x in pool[i:i + 12]) + ",\n")
        w("};\n\n")

        w("inline constexpr CccEntry kCcc[] = {\n")
        for cp in ccc_keys:
            w("    {0x%X, %d},\n" % (cp, ccc[cp]))
        w("};\n")
        w("inline constexpr uint32_t kCccCount = %d;\n\n" % len(ccc_keys))

        w("inline constexpr ComposeEntry kCompose[] = {\n")
        for a, b, c in compose:
            w("    {0x%X, 0x%X, 0x%X},\n" % (a, b, c))
        w("};\n")
        w("inline constexpr uint32_t kComposeCount = %d;\n\n" % len(compose))
        w("}  // namespace halludet::uni\n")

    sys.stderr.write("decomp entries: %d, pool: %d, ccc: %d, compose: %d\n"
                     % (len(entries), len(pool), len(ccc_keys), len(compose)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")
