#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qkd {

/// Slot indices where Bob saw a conclusive click. Never bit values.
struct SiftAnnounce {
    std::vector<std::uint64_t> indices;
};

/// Key positions whose parity is requested, one subset per entry.
struct ParityRequest {
    std::vector<std::vector<std::size_t>> subsets;
};

struct ParityReply {
    std::vector<std::uint8_t> parities;
};

struct SessionControl {
    std::string note;
};

using ClassicalMessage = std::variant<SiftAnnounce, ParityRequest, ParityReply, SessionControl>;

/// In-process public channel. Carries the same vocabulary a networked
/// transport would and keeps traffic counters for disclosure accounting.
class ClassicalChannel {
public:
    void send(ClassicalMessage message);
    std::optional<ClassicalMessage> receive();

    bool empty() const noexcept { return queue_.empty(); }
    std::size_t messages_sent() const noexcept { return messages_sent_; }
    /// Total parities carried by ParityReply messages.
    std::size_t parities_disclosed() const noexcept { return parities_disclosed_; }

private:
    std::deque<ClassicalMessage> queue_;
    std::size_t messages_sent_ = 0;
    std::size_t parities_disclosed_ = 0;
};

}  // namespace qkd
