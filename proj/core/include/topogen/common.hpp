#pragma once

#include <stdexcept>
#include <string>

namespace topogen {

// Bad caller input: malformed files, mismatched lengths, out-of-range digits.
// The CLI maps this to exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input on which the requested computation fails: a validation
// axiom is violated where validity is a precondition, a configured bound is
// exceeded, a search does not close within its guard. CLI exit code 1.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace topogen
