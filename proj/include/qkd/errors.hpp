#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qkd {

/// Aggregated configuration problems. what() joins them one per line.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> errors);

    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

}  // namespace qkd
