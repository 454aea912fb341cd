#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qkd {

/// One bit per element, values 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// Parses ASCII '0'/'1'. Whitespace (including newlines) is skipped; any
/// other character throws std::invalid_argument.
BitVector parse_bits(std::string_view text);

std::string format_bits(std::span<const std::uint8_t> bits);

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace qkd
