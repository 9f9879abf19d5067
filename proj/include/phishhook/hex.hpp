// phishhook: phishing smart-contract detection from EVM bytecode
// Copyright 2026 The phishhook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phishhook
{
using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

/// Decodes an even-length hex string, optionally 0x-prefixed. Throws DecodeError.
Bytes from_hex(std::string_view hex);

/// Lowercase hex without prefix.
std::string to_hex(BytesView bytes);

/// Lowercase hex with a 0x prefix ("0x" for empty input).
inline std::string to_hex_prefixed(BytesView bytes)
{
    return "0x" + to_hex(bytes);
}

/// Strips an optional 0x/0X prefix.
std::string_view strip_hex_prefix(std::string_view hex) noexcept;
}  // namespace phishhook
