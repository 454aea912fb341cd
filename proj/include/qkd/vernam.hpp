#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "qkd/bits.hpp"

namespace qkd {

class KeyExhaustedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class KeyReuseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bitwise XOR of the message with the key prefix. Throws
/// KeyExhaustedError if the key is shorter than the message.
///
/// XOR is linear: two ciphertexts under the same key XOR to the XOR of the
/// plaintexts, which is why OneTimePad refuses to hand out key bits twice.
BitVector vernam_encrypt(std::span<const std::uint8_t> message, std::span<const std::uint8_t> key);
BitVector vernam_decrypt(std::span<const std::uint8_t> ciphertext, std::span<const std::uint8_t> key);

struct Ciphertext {
    std::size_t key_offset = 0;
    BitVector bits;
};

/// One party's copy of a shared pad with a consumed-offset cursor. Key
/// material below the cursor is spent and never used again.
class OneTimePad {
public:
    explicit OneTimePad(BitVector key, std::size_t cursor = 0);

    Ciphertext encrypt(std::span<const std::uint8_t> message);

    /// Encrypts with key bits starting at `offset`; bits between the cursor
    /// and `offset` are burned. Throws KeyReuseError below the cursor.
    Ciphertext encrypt_at(std::span<const std::uint8_t> message, std::size_t offset);

    /// Consumes the ciphertext's key segment. Throws KeyReuseError if that
    /// segment is already spent.
    BitVector decrypt(const Ciphertext& ciphertext);

    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t remaining() const noexcept { return key_.size() - cursor_; }
    std::size_t size() const noexcept { return key_.size(); }

private:
    std::span<const std::uint8_t> claim(std::size_t offset, std::size_t length);

    BitVector key_;
    std::size_t cursor_;
};

}  // namespace qkd
