#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "qkd/bits.hpp"
#include "qkd/classical.hpp"

namespace qkd {

struct ParityBlockConfig {
    std::size_t rows = 8;
    std::size_t cols = 8;
    std::size_t passes = 2;
    std::uint64_t shuffle_seed = 0;
    /// Random-subset parities compared after the last pass.
    std::size_t final_checks = 50;
};

struct ReconciliationResult {
    /// Bob's key after correction, with one bit dropped per disclosed parity
    /// (the tail is dropped). Alice keeps the same prefix of her key.
    BitVector corrected_key;
    /// Bob's full-length key after correction, before dropping bits.
    BitVector reconciled_key;
    std::size_t disclosed_bit_equivalents = 0;
    std::size_t grid_parities = 0;
    std::size_t bisection_parities = 0;
    std::size_t check_parities = 0;
    std::size_t corrections = 0;
    std::size_t failed_checks = 0;
    /// 2^-t after t clean final checks; otherwise the failed fraction.
    double residual_error_estimate = 1.0;
    bool converged = false;
};

/// XOR fold. Throws on empty input.
std::uint8_t parity(std::span<const std::uint8_t> bits);

/// Alice's side of the parity conversation: answers ParityRequest messages
/// from her key and never sends key bits themselves.
class ParityResponder {
public:
    explicit ParityResponder(std::span<const std::uint8_t> key) : key_(key) {}

    /// Answers every pending request on the channel. Other messages are
    /// dropped.
    void serve(ClassicalChannel& channel) const;

private:
    std::span<const std::uint8_t> key_;
};

/// Two-dimensional parity reconciliation.
///
/// Each pass lays the key (identity order on the first pass, a seeded
/// shuffle afterwards) into rows x cols blocks and exchanges every row and
/// column parity. A block with exactly one bad row and one bad column gets
/// the intersection flipped. Any other mismatch pattern is resolved by
/// bisecting a bad line down to a single differing bit and repeating until
/// the block's lines all agree. After the last pass a batch of random-subset
/// parities decides convergence.
///
/// Throws std::invalid_argument on length mismatch, zero dimensions, zero
/// passes or a key shorter than one block.
ReconciliationResult reconcile_2d(std::span<const std::uint8_t> alice_key,
                                  std::span<const std::uint8_t> bob_key,
                                  const ParityBlockConfig& config, ClassicalChannel& channel);

/// Convenience overload with a private channel.
ReconciliationResult reconcile_2d(std::span<const std::uint8_t> alice_key,
                                  std::span<const std::uint8_t> bob_key,
                                  const ParityBlockConfig& config);

/// Alice's counterpart of result.corrected_key.
BitVector retained_key(std::span<const std::uint8_t> alice_key, const ReconciliationResult& result);

}  // namespace qkd
