#pragma once

#include <string>
#include <string_view>

#include "cellgrid/wire/bytes.hpp"
#include "cellgrid/wire/frame.hpp"

namespace cellgrid::wire {

// Lowercase, no separators.
std::string to_hex(ByteView bytes);
// Accepts whitespace, ':' and '-' between digit pairs. Throws std::invalid_argument.
Bytes from_hex(std::string_view text);

// Multi-line human-readable description of a frame (classification and every parsed layer).
// Throws WireError naming the failing layer.
std::string describe_frame(ByteView frame);

}  // namespace cellgrid::wire
