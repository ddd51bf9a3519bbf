#include "cellgrid/wire/bytes.hpp"

#include <string>

namespace cellgrid::wire {

void ByteReader::need(std::size_t n) const {
    if (remaining() < n) {
        throw WireError(on_short_, std::string(layer_) + ": need " + std::to_string(n) +
                                       " octets at offset " + std::to_string(pos_) + ", have " +
                                       std::to_string(remaining()));
    }
}

}  // namespace cellgrid::wire
