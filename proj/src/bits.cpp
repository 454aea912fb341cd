#include "qkd/bits.hpp"

#include <cctype>
#include <stdexcept>

namespace qkd {

BitVector parse_bits(std::string_view text) {
    BitVector bits;
    bits.reserve(text.size());
    std::size_t line = 1;
    for (char c : text) {
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c == '\n') {
            ++line;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("line " + std::to_string(line) +
                                        ": unexpected character in bit string");
        }
    }
    return bits;
}

std::string format_bits(std::span<const std::uint8_t> bits) {
    std::string out;
    out.reserve(bits.size());
    for (auto b : bits) out.push_back(b ? '1' : '0');
    return out;
}

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("bit sequences differ in length");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

}  // namespace qkd
