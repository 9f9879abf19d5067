// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace phishhook::csv
{
/// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_line(std::string_view line);

/// Quotes a cell if it contains a separator, quote, or newline.
std::string escape(std::string_view cell);

std::string join(const std::vector<std::string>& cells);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Opens a file for writing, creating parent directories. Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);
std::ifstream open_input(const std::filesystem::path& path);

/// Rows of a CSV file with its header, skipping blank lines.
struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based source line number of each row.
    std::vector<std::size_t> line_numbers;

    /// Column index by name, or throws ParseError.
    std::size_t column(std::string_view name) const;
};
Table read_table(const std::filesystem::path& path);
}  // namespace phishhook::csv
