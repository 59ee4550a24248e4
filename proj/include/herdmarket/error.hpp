// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace herdmarket {

enum class ErrorKind {
    usage,       // malformed request (bad flag combination, empty grid)
    validation,  // inputs violate a documented precondition
    degenerate,  // data carries no information (zero variance, too few points)
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace herdmarket
