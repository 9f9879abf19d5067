// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/csv.hpp"

#include "phishhook/error.hpp"

#include <charconv>
#include <cmath>

namespace phishhook::csv
{
std::vector<std::string> split_line(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        const char c = line[i];
        if (quoted)
        {
            if (c == '"')
            {
                if (i + 1 < line.size() && line[i + 1] == '"')
                {
                    cell += '"';
                    ++i;
                }
                else
                    quoted = false;
            }
            else
                cell += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
            cells.push_back(std::exchange(cell, {}));
        else
            cell += c;
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string escape(std::string_view cell)
{
    if (cell.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string{cell};
    std::string out = "\"";
    for (const char c : cell)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& cells)
{
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            out += ',';
        out += escape(cells[i]);
    }
    return out;
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "NaN";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());
    return in;
}

std::size_t Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw ParseError("missing column '" + std::string{name} + "'");
}

Table read_table(const std::filesystem::path& path)
{
    auto in = open_input(path);
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        auto cells = split_line(line);
        if (!have_header)
        {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_no);
    }
    return table;
}
}  // namespace phishhook::csv
