// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phishhook
{
struct OpcodeSpec
{
    std::uint8_t code = 0;
    std::string mnemonic;
    /// Absent for instructions whose table gas is NaN (INVALID).
    std::optional<std::uint32_t> static_gas;
    /// Operand byte count, nonzero only for PUSH1..PUSH32.
    std::uint8_t push_width = 0;
};

/// Immutable opcode table with a total lookup over all 256 byte values.
///
/// Byte values without a table entry resolve to a synthetic spec named
/// UNKNOWN_0xXX with absent gas and no operand.
class OpcodeTable
{
public:
    /// Parses the code_hex,mnemonic,static_gas,push_width CSV layout. Lines
    /// starting with '#' are comments; a comment containing "fork=NAME" sets
    /// the fork tag.
    static OpcodeTable parse(std::istream& in);
    static OpcodeTable load(const std::filesystem::path& path);

    /// The bundled Shanghai table (data/opcodes_shanghai_v1.csv).
    static const OpcodeTable& shanghai();

    const OpcodeSpec& operator[](std::uint8_t code) const noexcept { return by_code_[code]; }
    bool is_defined(std::uint8_t code) const noexcept { return defined_[code]; }

    /// Resolves a mnemonic, including UNKNOWN_0xXX names.
    std::optional<std::uint8_t> code_of(std::string_view mnemonic) const;

    /// Defined entries in code order.
    std::vector<OpcodeSpec> entries() const;
    std::size_t size() const noexcept { return defined_count_; }
    const std::string& fork() const noexcept { return fork_; }

private:
    std::array<OpcodeSpec, 256> by_code_{};
    std::array<bool, 256> defined_{};
    std::unordered_map<std::string, std::uint8_t> by_mnemonic_;
    std::size_t defined_count_ = 0;
    std::string fork_;
};

/// "UNKNOWN_0x0C" style name for an undefined byte value.
std::string unknown_mnemonic(std::uint8_t code);

/// Free-function form of OpcodeTable::load, returning the defined entries.
std::vector<OpcodeSpec> load_opcode_table(const std::filesystem::path& path);
}  // namespace phishhook
