#include "cellgrid/wire/gtp.hpp"

#include <algorithm>
#include <string>

namespace cellgrid::wire {

GtpHeader GtpHeader::user_data(Teid teid, std::uint32_t sequence, std::size_t payload_size) {
    GtpHeader h;
    h.teid_flag = true;
    h.teid = teid;
    h.message_type = kGtpUserData;
    h.sequence_number = sequence & 0xFFFFFF;
    h.message_length = static_cast<std::uint16_t>(h.encoded_size() - 4 + payload_size);
    return h;
}

GtpDecoded decode_gtp(ByteView bytes) {
    if (bytes.size() < 8) {
        throw WireError(WireErrc::TruncatedHeader,
                        "gtp needs at least 8 octets, got " + std::to_string(bytes.size()));
    }
    ByteReader in(bytes, WireErrc::TruncatedHeader, "gtp");
    const std::uint8_t flags = in.u8();

    GtpHeader h;
    h.version = flags >> 5;
    if (h.version != kGtpVersion) {
        throw WireError(WireErrc::BadVersion, "gtp version " + std::to_string(h.version));
    }
    h.piggyback = (flags & 0x10) != 0;
    h.teid_flag = (flags & 0x08) != 0;
    h.message_type = in.u8();
    h.message_length = in.u16();
    if (h.teid_flag) {
        in.need(8);
        h.teid = Teid{in.u32()};
    }
    h.sequence_number = in.u24();
    in.u8();  // spare

    const std::size_t end = 4 + std::size_t{h.message_length};
    if (end > bytes.size()) {
        throw WireError(WireErrc::LengthMismatch,
                        "message length " + std::to_string(h.message_length) + " exceeds " +
                            std::to_string(bytes.size() - 4) + " available octets");
    }
    const std::size_t header_size = h.encoded_size();
    const std::size_t payload_size = end > header_size ? end - header_size : 0;
    return {h, bytes.subspan(header_size, payload_size)};
}

Bytes encode_gtp(const GtpHeader& h, ByteView payload) {
    if (h.teid_flag != h.teid.has_value()) {
        throw WireError(WireErrc::InvariantViolation, "teid presence must match the T flag");
    }
    if (h.version != kGtpVersion) {
        throw WireError(WireErrc::InvariantViolation, "only version 2 is produced");
    }
    if (h.sequence_number > 0xFFFFFF) {
        throw WireError(WireErrc::InvariantViolation, "sequence number exceeds 24 bits");
    }
    const std::size_t tail = h.encoded_size() - 4;
    const bool exact = std::size_t{h.message_length} == tail + payload.size();
    const bool short_empty = payload.empty() && h.message_length <= tail;
    if (!exact && !short_empty) {
        throw WireError(WireErrc::InvariantViolation,
                        "message length " + std::to_string(h.message_length) +
                            " does not cover a payload of " + std::to_string(payload.size()));
    }

    Bytes out;
    out.reserve(h.encoded_size() + payload.size());
    ByteWriter w(out);
    w.u8(static_cast<std::uint8_t>((h.version << 5) | (h.piggyback ? 0x10 : 0) |
                                   (h.teid_flag ? 0x08 : 0)));
    w.u8(h.message_type);
    w.u16(h.message_length);
    if (h.teid) w.u32(h.teid->value);
    w.u24(h.sequence_number);
    w.u8(0);
    w.bytes(payload);
    return out;
}

}  // namespace cellgrid::wire
