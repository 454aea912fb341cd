#include "qkd/classical.hpp"

namespace qkd {

void ClassicalChannel::send(ClassicalMessage message) {
    if (const auto* reply = std::get_if<ParityReply>(&message)) {
        parities_disclosed_ += reply->parities.size();
    }
    ++messages_sent_;
    queue_.push_back(std::move(message));
}

std::optional<ClassicalMessage> ClassicalChannel::receive() {
    if (queue_.empty()) return std::nullopt;
    ClassicalMessage m = std::move(queue_.front());
    queue_.pop_front();
    return m;
}

}  // namespace qkd
