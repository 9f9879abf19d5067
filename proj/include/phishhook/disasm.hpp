// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hex.hpp"
#include "opcodes.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace phishhook
{
struct Instruction
{
    std::size_t offset = 0;
    std::uint8_t code = 0;
    std::string mnemonic;
    /// Present iff the opcode declares a PUSH operand; may be shorter than
    /// the declared width when the bytecode ends early.
    std::optional<Bytes> operand;
    std::optional<std::uint32_t> gas;
    bool truncated = false;

    std::size_t size() const noexcept { return 1 + (operand ? operand->size() : 0); }
    bool operator==(const Instruction&) const = default;
};

/// Linear-sweep disassembly from offset 0. Never fails on byte input.
std::vector<Instruction> disassemble(BytesView code, const OpcodeTable& table = OpcodeTable::shanghai());

/// Hex entry point; throws DecodeError on odd-length or non-hex input.
std::vector<Instruction> disassemble(std::string_view hex, const OpcodeTable& table = OpcodeTable::shanghai());

/// Concatenates code and operand bytes in offset order.
Bytes reassemble(const std::vector<Instruction>& instructions);

/// Per-byte-value instruction counts for a linear sweep, without
/// materializing the instruction list.
using OpcodeCounts = std::array<std::uint32_t, 256>;
OpcodeCounts count_opcodes(BytesView code, const OpcodeTable& table = OpcodeTable::shanghai());
OpcodeCounts count_opcodes(const std::vector<Instruction>& instructions);

/// CSV with header offset,mnemonic,operand,gas,truncated. Absent operands are
/// empty cells, present operands are 0x-prefixed hex, absent gas is "NaN".
/// Returns the number of data rows.
std::size_t write_disassembly_csv(const std::vector<Instruction>& instructions, std::ostream& out);
std::size_t write_disassembly_csv(const std::vector<Instruction>& instructions,
                                  const std::filesystem::path& destination);
}  // namespace phishhook
