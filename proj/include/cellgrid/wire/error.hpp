#pragma once

#include <stdexcept>
#include <string>

namespace cellgrid::wire {

enum class WireErrc {
    TruncatedHeader,
    BadVersion,
    LengthMismatch,
    InvariantViolation,
    UnknownOpcode,
    PayloadLengthMismatch,
    WrongEthertype,
    TruncatedFrame,
};

const char* to_string(WireErrc code);

class WireError : public std::runtime_error {
public:
    WireError(WireErrc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    WireErrc code() const noexcept { return code_; }

private:
    WireErrc code_;
};

}  // namespace cellgrid::wire
