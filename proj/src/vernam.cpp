#include "qkd/vernam.hpp"

#include <string>

namespace qkd {

BitVector vernam_encrypt(std::span<const std::uint8_t> message, std::span<const std::uint8_t> key) {
    if (key.size() < message.size()) {
        throw KeyExhaustedError("key has " + std::to_string(key.size()) + " bits, message needs " +
                                std::to_string(message.size()));
    }
    BitVector out(message.size());
    for (std::size_t i = 0; i < message.size(); ++i) out[i] = (message[i] ^ key[i]) & 1;
    return out;
}

BitVector vernam_decrypt(std::span<const std::uint8_t> ciphertext, std::span<const std::uint8_t> key) {
    return vernam_encrypt(ciphertext, key);
}

OneTimePad::OneTimePad(BitVector key, std::size_t cursor) : key_(std::move(key)), cursor_(cursor) {
    if (cursor_ > key_.size()) throw KeyExhaustedError("cursor beyond end of pad");
}

std::span<const std::uint8_t> OneTimePad::claim(std::size_t offset, std::size_t length) {
    if (offset < cursor_) {
        throw KeyReuseError("key bits at offset " + std::to_string(offset) + " already used (cursor " +
                            std::to_string(cursor_) + ")");
    }
    if (offset > key_.size() || key_.size() - offset < length) {
        throw KeyExhaustedError("pad exhausted: need " + std::to_string(length) + " bits at offset " +
                                std::to_string(offset) + ", pad holds " + std::to_string(key_.size()));
    }
    cursor_ = offset + length;
    return std::span<const std::uint8_t>(key_).subspan(offset, length);
}

Ciphertext OneTimePad::encrypt(std::span<const std::uint8_t> message) { return encrypt_at(message, cursor_); }

Ciphertext OneTimePad::encrypt_at(std::span<const std::uint8_t> message, std::size_t offset) {
    const auto segment = claim(offset, message.size());
    return {offset, vernam_encrypt(message, segment)};
}

BitVector OneTimePad::decrypt(const Ciphertext& ciphertext) {
    return vernam_decrypt(ciphertext.bits, claim(ciphertext.key_offset, ciphertext.bits.size()));
}

}  // namespace qkd
