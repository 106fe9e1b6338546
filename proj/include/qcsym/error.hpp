#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcsym {

// Raised when an operation's precondition is violated by its arguments.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace qcsym
