#include "qkd/reconciliation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qkd/random.hpp"

namespace qkd {
namespace {

constexpr std::uint64_t kCheckStreamTag = 0xc4ec4;

std::uint8_t subset_parity(std::span<const std::uint8_t> key, const std::vector<std::size_t>& subset) {
    std::uint8_t p = 0;
    for (auto i : subset) p ^= key[i];
    return p;
}

std::vector<std::size_t> pass_layout(std::size_t n, std::size_t pass, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (pass == 0) return order;
    RandomStream rng = RandomStream(seed).derive(pass);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    return order;
}

/// Bob's half of the conversation.
class ParityClient {
public:
    ParityClient(ClassicalChannel& channel, const ParityResponder& alice) : channel_(channel), alice_(alice) {}

    std::vector<std::uint8_t> ask(std::vector<std::vector<std::size_t>> subsets) {
        const std::size_t expected = subsets.size();
        channel_.send(ParityRequest{std::move(subsets)});
        alice_.serve(channel_);
        auto message = channel_.receive();
        auto* reply = message ? std::get_if<ParityReply>(&*message) : nullptr;
        if (reply == nullptr || reply->parities.size() != expected) {
            throw std::runtime_error("parity exchange failed: no matching reply");
        }
        disclosed_ += expected;
        return std::move(reply->parities);
    }

    std::size_t disclosed() const noexcept { return disclosed_; }

private:
    ClassicalChannel& channel_;
    const ParityResponder& alice_;
    std::size_t disclosed_ = 0;
};

/// One rows x cols block laid over key positions; absent cells are -1.
class Block {
public:
    Block(const std::vector<std::size_t>& order, std::size_t first, std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), cells_(rows * cols, kAbsent) {
        for (std::size_t k = 0; k < rows * cols && first + k < order.size(); ++k) cells_[k] = order[first + k];
    }

    std::vector<std::size_t> row(std::size_t r) const { return line(r * cols_, 1, cols_); }
    std::vector<std::size_t> col(std::size_t c) const { return line(c, cols_, rows_); }

    bool has(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c] != kAbsent; }
    std::size_t at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

    /// (row, col) of a key position known to be in the block.
    std::pair<std::size_t, std::size_t> locate(std::size_t position) const {
        const auto it = std::find(cells_.begin(), cells_.end(), position);
        const auto k = static_cast<std::size_t>(it - cells_.begin());
        return {k / cols_, k % cols_};
    }

private:
    static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

    std::vector<std::size_t> line(std::size_t start, std::size_t stride, std::size_t count) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < count; ++i) {
            const auto cell = cells_[start + i * stride];
            if (cell != kAbsent) out.push_back(cell);
        }
        return out;
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::size_t> cells_;
};

void toggle(std::vector<std::size_t>& set, std::size_t v) {
    const auto it = std::find(set.begin(), set.end(), v);
    if (it == set.end()) {
        set.push_back(v);
    } else {
        set.erase(it);
    }
}

/// Narrows a line whose parities disagree to one differing position.
std::size_t bisect(const std::vector<std::size_t>& line, std::span<const std::uint8_t> bob, ParityClient& client) {
    std::size_t lo = 0;
    std::size_t hi = line.size();
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        std::vector<std::size_t> half(line.begin() + static_cast<std::ptrdiff_t>(lo),
                                      line.begin() + static_cast<std::ptrdiff_t>(mid));
        const std::uint8_t mine = subset_parity(bob, half);
        const std::uint8_t theirs = client.ask({std::move(half)}).front();
        if (mine != theirs) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return line[lo];
}

}  // namespace

std::uint8_t parity(std::span<const std::uint8_t> bits) {
    if (bits.empty()) throw std::invalid_argument("parity of an empty sequence");
    std::uint8_t p = 0;
    for (auto b : bits) p ^= (b & 1);
    return p;
}

void ParityResponder::serve(ClassicalChannel& channel) const {
    std::vector<ParityReply> replies;
    while (auto message = channel.receive()) {
        const auto* request = std::get_if<ParityRequest>(&*message);
        if (request == nullptr) continue;
        ParityReply reply;
        reply.parities.reserve(request->subsets.size());
        for (const auto& subset : request->subsets) {
            for (auto i : subset) {
                if (i >= key_.size()) throw std::out_of_range("parity request outside the key");
            }
            reply.parities.push_back(subset_parity(key_, subset));
        }
        replies.push_back(std::move(reply));
    }
    for (auto& r : replies) channel.send(std::move(r));
}

ReconciliationResult reconcile_2d(std::span<const std::uint8_t> alice_key, std::span<const std::uint8_t> bob_key,
                                  const ParityBlockConfig& config, ClassicalChannel& channel) {
    if (alice_key.size() != bob_key.size()) throw std::invalid_argument("keys differ in length");
    if (config.rows == 0 || config.cols == 0) throw std::invalid_argument("block dimensions must be >= 1");
    if (config.passes == 0) throw std::invalid_argument("passes must be >= 1");
    const std::size_t n = bob_key.size();
    const std::size_t block_size = config.rows * config.cols;
    if (n < block_size) throw std::invalid_argument("key shorter than one rows x cols block");

    const ParityResponder alice(alice_key);
    ParityClient client(channel, alice);

    ReconciliationResult result;
    BitVector bob(bob_key.begin(), bob_key.end());
    const std::size_t blocks = (n + block_size - 1) / block_size;

    for (std::size_t pass = 0; pass < config.passes; ++pass) {
        const auto order = pass_layout(n, pass, config.shuffle_seed);
        std::vector<Block> grid;
        grid.reserve(blocks);
        std::vector<std::vector<std::size_t>> lines;
        lines.reserve(blocks * (config.rows + config.cols));
        for (std::size_t b = 0; b < blocks; ++b) {
            grid.emplace_back(order, b * block_size, config.rows, config.cols);
            for (std::size_t r = 0; r < config.rows; ++r) lines.push_back(grid.back().row(r));
            for (std::size_t c = 0; c < config.cols; ++c) lines.push_back(grid.back().col(c));
        }
        std::vector<std::uint8_t> mine(lines.size());
        for (std::size_t i = 0; i < lines.size(); ++i) mine[i] = subset_parity(bob, lines[i]);
        const std::size_t before = client.disclosed();
        const auto theirs = client.ask(lines);
        result.grid_parities += client.disclosed() - before;

        for (std::size_t b = 0; b < blocks; ++b) {
            const Block& block = grid[b];
            const std::size_t base = b * (config.rows + config.cols);
            std::vector<std::size_t> bad_rows;
            std::vector<std::size_t> bad_cols;
            for (std::size_t r = 0; r < config.rows; ++r) {
                if (mine[base + r] != theirs[base + r]) bad_rows.push_back(r);
            }
            for (std::size_t c = 0; c < config.cols; ++c) {
                if (mine[base + config.rows + c] != theirs[base + config.rows + c]) bad_cols.push_back(c);
            }

            if (bad_rows.size() == 1 && bad_cols.size() == 1 && block.has(bad_rows[0], bad_cols[0])) {
                bob[block.at(bad_rows[0], bad_cols[0])] ^= 1;
                ++result.corrections;
                continue;
            }

            const std::size_t before_bisect = client.disclosed();
            for (std::size_t guard = 0; guard < block_size && (!bad_rows.empty() || !bad_cols.empty()); ++guard) {
                const auto line = bad_rows.empty() ? block.col(bad_cols.front()) : block.row(bad_rows.front());
                const std::size_t pos = bisect(line, bob, client);
                bob[pos] ^= 1;
                ++result.corrections;
                const auto [r, c] = block.locate(pos);
                toggle(bad_rows, r);
                toggle(bad_cols, c);
            }
            result.bisection_parities += client.disclosed() - before_bisect;
        }
    }

    RandomStream check_rng = RandomStream(config.shuffle_seed).derive(kCheckStreamTag);
    std::vector<std::vector<std::size_t>> checks(config.final_checks);
    for (auto& subset : checks) {
        for (std::size_t i = 0; i < n; ++i) {
            if (check_rng.bit()) subset.push_back(i);
        }
    }
    std::vector<std::uint8_t> mine(checks.size());
    for (std::size_t i = 0; i < checks.size(); ++i) mine[i] = subset_parity(bob, checks[i]);
    const std::size_t before_checks = client.disclosed();
    const auto theirs = checks.empty() ? std::vector<std::uint8_t>{} : client.ask(checks);
    result.check_parities = client.disclosed() - before_checks;
    for (std::size_t i = 0; i < checks.size(); ++i) result.failed_checks += (mine[i] != theirs[i]);

    result.converged = result.failed_checks == 0;
    const double t = static_cast<double>(config.final_checks);
    result.residual_error_estimate =
        result.converged ? std::ldexp(1.0, -static_cast<int>(config.final_checks))
                         : static_cast<double>(result.failed_checks) / t;

    result.disclosed_bit_equivalents = client.disclosed();
    const std::size_t keep = n > result.disclosed_bit_equivalents ? n - result.disclosed_bit_equivalents : 0;
    result.corrected_key.assign(bob.begin(), bob.begin() + static_cast<std::ptrdiff_t>(keep));
    result.reconciled_key = std::move(bob);
    return result;
}

ReconciliationResult reconcile_2d(std::span<const std::uint8_t> alice_key, std::span<const std::uint8_t> bob_key,
                                  const ParityBlockConfig& config) {
    ClassicalChannel channel;
    return reconcile_2d(alice_key, bob_key, config, channel);
}

BitVector retained_key(std::span<const std::uint8_t> alice_key, const ReconciliationResult& result) {
    const std::size_t keep = std::min(alice_key.size(), result.corrected_key.size());
    return BitVector(alice_key.begin(), alice_key.begin() + static_cast<std::ptrdiff_t>(keep));
}

}  // namespace qkd
