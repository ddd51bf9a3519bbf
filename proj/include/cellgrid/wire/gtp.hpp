#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "cellgrid/wire/bytes.hpp"
#include "cellgrid/wire/types.hpp"

namespace cellgrid::wire {

inline constexpr std::uint16_t kGtpPort = 2152;
inline constexpr std::uint8_t kGtpVersion = 2;

// Message types used by this project; the G-PDU carries an encapsulated user packet.
inline constexpr std::uint8_t kGtpEchoRequest = 1;
inline constexpr std::uint8_t kGtpEchoResponse = 2;
inline constexpr std::uint8_t kGtpUserData = 255;

/*
 * GTPv2 header, big-endian:
 *
 *   bit 0   3  version (2)
 *   bit 3   1  piggybacking flag
 *   bit 4   1  TEID flag (T)
 *   bit 5   3  spare (0)
 *   bit 8   8  message type
 *   bit 16 16  message length, octets following the first four
 *   bit 32 32  TEID                          (only when T = 1)
 *   bit 64 24  sequence number               (bit 32 when T = 0)
 *   then one spare octet, so the header is 12 octets with T = 1 and 8 without.
 */
struct GtpHeader {
    std::uint8_t version = kGtpVersion;
    bool piggyback = false;
    bool teid_flag = false;
    std::uint8_t message_type = 0;
    std::uint16_t message_length = 0;
    std::optional<Teid> teid;
    std::uint32_t sequence_number = 0;  // 24 bits

    std::size_t encoded_size() const { return teid_flag ? 12 : 8; }

    // Header for an encapsulated user packet with the length field filled in.
    static GtpHeader user_data(Teid teid, std::uint32_t sequence, std::size_t payload_size);

    bool operator==(const GtpHeader&) const = default;
};

inline constexpr std::size_t kGtpTeidOffset = 4;

struct GtpDecoded {
    GtpHeader header;
    ByteView payload;
};

GtpDecoded decode_gtp(ByteView bytes);
Bytes encode_gtp(const GtpHeader& header, ByteView payload);

}  // namespace cellgrid::wire
