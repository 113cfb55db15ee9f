#!/usr/bin/env python3
"""Regenerates include/polis/detail/unicode_tables.hpp.

Word characters follow Python's re `\\w` for str patterns (str.isalnum() or
'_'); lowercase mapping is the simple one-to-one subset of str.lower().
"""
import sys
import unicodedata


def ranges(pred):
    out, start = [], None
    for cp in range(0x110000):
        if pred(cp):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, 0x10FFFF))
    return out


def is_word(cp):
    if 0xD800 <= cp <= 0xDFFF:
        return False
    ch = chr(cp)
    return ch == "_" or ch.isalnum()


def lower_pairs():
    pairs = []
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        lo = chr(cp).lower()
        if len(lo) == 1 and ord(lo) != cp:
            pairs.append((cp, ord(lo)))
    return pairs


def main(path):
    word = ranges(is_word)
    lower = lower_pairs()
    with open(path, "w", encoding="utf-8") as f:
        f.write("// Generated by tools/gen_unicode_tables.py (Unicode %s). Do not edit.\n"
                % unicodedata.unidata_version)
        f.write("#pragma once\n\n#include <array>\n#include <cstdint>\n\n")
        f.write("namespace polis::detail {\n\n")
        f.write("struct CodeRange {\n  char32_t first;\n  char32_t last;\n};\n\n")
        f.write("struct CaseMapping {\n  char32_t from;\n  char32_t to;\n};\n\n")
        f.write("inline constexpr std::array<CodeRange, %d> kWordRanges{{\n" % len(word))
        for a, b in word:
            f.write("    {0x%X, 0x%X},\n" % (a, b))
        f.write("}};\n\n")
        f.write("inline constexpr std::array<CaseMapping, %d> kLowerMap{{\n" % len(lower))
        for a, b in lower:
            f.write("    {0x%X, 0x%X},\n" % (a, b))
        f.write("}};\n\n}  // namespace polis::detail\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "include/polis/detail/unicode_tables.hpp")
