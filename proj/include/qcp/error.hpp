#pragma once

#include <stdexcept>
#include <string>

namespace qcp {

// Error taxonomy mirrors the CLI exit-code contract:
// Io -> 2, Cap -> 3, Budget -> 4, everything else -> 1.
enum class ErrorKind {
    Io,
    Parse,
    Invariant,
    Domain,
    Cap,
    Budget,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace qcp
