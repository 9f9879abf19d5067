// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0

#include "phishhook/disasm.hpp"

#include "phishhook/csv.hpp"
#include "phishhook/error.hpp"

#include <algorithm>

namespace phishhook
{
std::vector<Instruction> disassemble(BytesView code, const OpcodeTable& table)
{
    std::vector<Instruction> out;
    out.reserve(code.size() / 2 + 1);
    std::size_t pc = 0;
    while (pc < code.size())
    {
        const auto& spec = table[code[pc]];
        Instruction ins;
        ins.offset = pc;
        ins.code = spec.code;
        ins.mnemonic = spec.mnemonic;
        ins.gas = spec.static_gas;
        ++pc;
        if (spec.push_width > 0)
        {
            const auto available = std::min<std::size_t>(spec.push_width, code.size() - pc);
            ins.operand.emplace(code.begin() + static_cast<std::ptrdiff_t>(pc),
                                code.begin() + static_cast<std::ptrdiff_t>(pc + available));
            ins.truncated = available < spec.push_width;
            pc += available;
        }
        out.push_back(std::move(ins));
    }
    return out;
}

std::vector<Instruction> disassemble(std::string_view hex, const OpcodeTable& table)
{
    const auto bytes = from_hex(hex);
    return disassemble(BytesView{bytes}, table);
}

Bytes reassemble(const std::vector<Instruction>& instructions)
{
    Bytes out;
    for (const auto& ins : instructions)
    {
        out.push_back(ins.code);
        if (ins.operand)
            out.insert(out.end(), ins.operand->begin(), ins.operand->end());
    }
    return out;
}

OpcodeCounts count_opcodes(BytesView code, const OpcodeTable& table)
{
    OpcodeCounts counts{};
    std::size_t pc = 0;
    while (pc < code.size())
    {
        const auto op = code[pc];
        ++counts[op];
        pc += 1 + table[op].push_width;
    }
    return counts;
}

OpcodeCounts count_opcodes(const std::vector<Instruction>& instructions)
{
    OpcodeCounts counts{};
    for (const auto& ins : instructions)
        ++counts[ins.code];
    return counts;
}

std::size_t write_disassembly_csv(const std::vector<Instruction>& instructions, std::ostream& out)
{
    out << "offset,mnemonic,operand,gas,truncated\n";
    for (const auto& ins : instructions)
    {
        out << ins.offset << ',' << ins.mnemonic << ',';
        if (ins.operand)
            out << to_hex_prefixed(*ins.operand);
        out << ',';
        if (ins.gas)
            out << *ins.gas;
        else
            out << "NaN";
        out << ',' << (ins.truncated ? "true" : "false") << '\n';
    }
    if (!out)
        throw IoError("write failed while emitting disassembly CSV");
    return instructions.size();
}

std::size_t write_disassembly_csv(const std::vector<Instruction>& instructions,
                                  const std::filesystem::path& destination)
{
    auto out = csv::open_output(destination);
    const auto rows = write_disassembly_csv(instructions, out);
    out.flush();
    if (!out)
        throw IoError("write failed: " + destination.string());
    return rows;
}
}  // namespace phishhook
