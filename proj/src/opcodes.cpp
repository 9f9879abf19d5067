// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/opcodes.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace phishhook
{
namespace detail
{
extern const std::string_view kShanghaiTableCsv;
}

namespace
{
template <typename T>
bool parse_uint(std::string_view text, T& value, int base = 10)
{
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value, base);
    return res.ec == std::errc{} && res.ptr == end;
}

std::string trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return std::string{s};
}
}  // namespace

std::string unknown_mnemonic(std::uint8_t code)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "UNKNOWN_0x%02X", code);
    return buf;
}

OpcodeTable OpcodeTable::parse(std::istream& in)
{
    OpcodeTable table;
    for (unsigned c = 0; c < 256; ++c)
    {
        auto& spec = table.by_code_[c];
        spec.code = static_cast<std::uint8_t>(c);
        spec.mnemonic = unknown_mnemonic(spec.code);
    }

    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto text = trim(line);
        if (text.empty())
            continue;
        if (text.front() == '#')
        {
            if (const auto pos = text.find("fork="); pos != std::string::npos)
            {
                auto end = text.find_first_of(", \t", pos);
                table.fork_ = text.substr(pos + 5, end == std::string::npos ? std::string::npos : end - pos - 5);
            }
            continue;
        }
        const auto where = "opcode table line " + std::to_string(line_no) + ": ";
        auto cells = csv::split_line(text);
        if (!seen_header)
        {
            if (cells.size() != 4 || cells[0] != "code_hex" || cells[1] != "mnemonic" || cells[2] != "static_gas" ||
                cells[3] != "push_width")
                throw ParseError(where + "expected header code_hex,mnemonic,static_gas,push_width");
            seen_header = true;
            continue;
        }
        if (cells.size() != 4)
            throw ParseError(where + "expected 4 columns, got " + std::to_string(cells.size()));
        for (auto& c : cells)
            c = trim(c);

        std::string_view code_text = cells[0];
        if (code_text.starts_with("0x") || code_text.starts_with("0X"))
            code_text.remove_prefix(2);
        unsigned code = 0;
        if (code_text.empty() || !parse_uint(code_text, code, 16) || code > 0xff)
            throw ParseError(where + "bad code_hex '" + cells[0] + "'");
        if (cells[1].empty())
            throw ParseError(where + "empty mnemonic");
        std::optional<std::uint32_t> gas;
        if (cells[2] != "NaN")
        {
            std::uint32_t g = 0;
            if (!parse_uint(cells[2], g))
                throw ParseError(where + "bad static_gas '" + cells[2] + "'");
            gas = g;
        }
        unsigned width = 0;
        if (!parse_uint(cells[3], width) || width > 32)
            throw ParseError(where + "bad push_width '" + cells[3] + "'");

        if (table.defined_[code])
            throw IntegrityError(where + "duplicate code " + cells[0]);
        if (table.by_mnemonic_.contains(cells[1]))
            throw IntegrityError(where + "duplicate mnemonic " + cells[1]);
        if (cells[1].starts_with("UNKNOWN_"))
            throw IntegrityError(where + "reserved mnemonic " + cells[1]);

        auto& spec = table.by_code_[code];
        spec.mnemonic = cells[1];
        spec.static_gas = gas;
        spec.push_width = static_cast<std::uint8_t>(width);
        table.defined_[code] = true;
        table.by_mnemonic_.emplace(spec.mnemonic, spec.code);
        ++table.defined_count_;
    }
    if (!seen_header)
        throw ParseError("opcode table: missing header");
    return table;
}

OpcodeTable OpcodeTable::load(const std::filesystem::path& path)
{
    auto in = csv::open_input(path);
    return parse(in);
}

const OpcodeTable& OpcodeTable::shanghai()
{
    static const OpcodeTable table = [] {
        std::istringstream in{std::string{detail::kShanghaiTableCsv}};
        return parse(in);
    }();
    return table;
}

std::optional<std::uint8_t> OpcodeTable::code_of(std::string_view mnemonic) const
{
    if (const auto it = by_mnemonic_.find(std::string{mnemonic}); it != by_mnemonic_.end())
        return it->second;
    if (mnemonic.starts_with("UNKNOWN_0x") && mnemonic.size() == 12)
    {
        unsigned code = 0;
        if (parse_uint(mnemonic.substr(10), code, 16) && !defined_[code])
            return static_cast<std::uint8_t>(code);
    }
    return std::nullopt;
}

std::vector<OpcodeSpec> OpcodeTable::entries() const
{
    std::vector<OpcodeSpec> out;
    out.reserve(defined_count_);
    for (unsigned c = 0; c < 256; ++c)
        if (defined_[c])
            out.push_back(by_code_[c]);
    return out;
}

std::vector<OpcodeSpec> load_opcode_table(const std::filesystem::path& path)
{
    return OpcodeTable::load(path).entries();
}
}  // namespace phishhook
