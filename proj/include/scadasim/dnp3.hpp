#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scadasim/modbus.hpp"  // Bytes
#include "scadasim/result.hpp"

namespace scadasim {

// DNP3 data-link CRC: generator x^16+x^13+x^12+x^11+x^10+x^8+x^6+x^5+x^2+1
// (0x3D65), bits processed LSB-first, zero initial remainder, final value
// complemented and transmitted little-endian.
std::uint16_t crc_dnp(std::span<const std::uint8_t> data);

// DNP3-lite framing: the real data-link layer (start bytes, 10-byte header
// with CRC, payload chunked into <=16-byte CRC-guarded blocks) carrying a
// single-byte application function and its payload. No transport-layer
// segmentation, no object library, no secure authentication.
enum class Dnp3Function : std::uint8_t {
    kLinkOnly = 0x00,       // no application data (10-byte frame)
    kReadIntegrity = 0x01,  // integrity scan: read the full register span
    kDirectOperate = 0x05,  // write one register: payload [addr BE16][value BE16]
    kResponse = 0x81,       // payload [status byte][data...]
};

// Status byte of a kResponse payload.
namespace dnp3_status {
inline constexpr std::uint8_t kOk = 0x00;
inline constexpr std::uint8_t kUnsupportedFunction = 0x01;
inline constexpr std::uint8_t kDownstreamException = 0x02;
}  // namespace dnp3_status

struct Dnp3Frame {
    std::uint8_t control = 0xC4;
    std::uint16_t destination = 0;
    std::uint16_t source = 0;
    Dnp3Function app_function = Dnp3Function::kLinkOnly;
    Bytes app_payload;

    bool operator==(const Dnp3Frame&) const = default;
};

enum class Dnp3Error {
    kNone,
    kShortBuffer,
    kBadStart,         // first bytes not 05 64
    kHeaderCrc,
    kBlockCrc,
    kLengthMismatch,   // length field vs actual data
    kPayloadTooLarge,
};

const char* to_string(Dnp3Error e);

inline constexpr std::uint8_t kDnp3Start0 = 0x05;
inline constexpr std::uint8_t kDnp3Start1 = 0x64;
inline constexpr std::size_t kDnp3BlockSize = 16;

// Header: 05 64 len ctrl dst_lo dst_hi src_lo src_hi crc_lo crc_hi, with
// len = 5 + application data length (function byte + payload; 0 for
// kLinkOnly). Application data follows in 16-byte blocks, each trailed by
// its CRC. All CRCs are recomputed on encode.
Bytes encode_dnp3(const Dnp3Frame& frame);

// Total inverse; verifies every CRC.
Result<Dnp3Frame, Dnp3Error> decode_dnp3(std::span<const std::uint8_t> bytes);

// ---- application payload helpers ----

Dnp3Frame make_read_integrity(std::uint16_t dst, std::uint16_t src);
Dnp3Frame make_direct_operate(std::uint16_t dst, std::uint16_t src,
                              std::uint16_t address, std::uint16_t value);
Dnp3Frame make_response(std::uint16_t dst, std::uint16_t src,
                        std::uint8_t status,
                        const std::vector<std::uint16_t>& values);

struct Dnp3Operate {
    std::uint16_t address;
    std::uint16_t value;
};
struct Dnp3Response {
    std::uint8_t status;
    std::vector<std::uint16_t> values;
};

std::optional<Dnp3Operate> parse_direct_operate(const Dnp3Frame& frame);
std::optional<Dnp3Response> parse_response(const Dnp3Frame& frame);

}  // namespace scadasim
