// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_IO_H_
#define BIASLENS_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace biaslens::io {

// Throws Error(kFileNotFound) or Error(kIoError).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Splits content into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> lines(std::string_view content);

// Replaces tab, CR and LF so a value can sit in one TSV cell.
std::string tsv_cell(std::string_view value);

// Shortest representation that round-trips through strtod.
std::string format_double(double v);

}  // namespace biaslens::io

#endif  // BIASLENS_IO_H_
