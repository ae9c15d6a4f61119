// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_TEXT_H_
#define BIASLENS_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace biaslens::text {

// Re-encodes ISO-8859-1 bytes as UTF-8.
std::string latin1_to_utf8(std::string_view in);

bool is_valid_utf8(std::string_view in);

// Case-folds, strips accents from Latin letters (precomposed and combining
// forms), turns every non-alphanumeric code point into a separator and
// collapses runs of separators into one space. Code points outside the Latin
// ranges are kept verbatim.
std::string fold(std::string_view utf8);

std::vector<std::string> split_words(std::string_view folded);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char delim);

// Byte-level edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

}  // namespace biaslens::text

#endif  // BIASLENS_TEXT_H_
