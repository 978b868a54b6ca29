#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scadasim/result.hpp"

namespace scadasim {

using Bytes = std::vector<std::uint8_t>;

// Supported function codes: 0x03 read holding registers, 0x10 write multiple
// registers, and their exception responses (code | 0x80, one exception byte).
namespace modbus_fc {
inline constexpr std::uint8_t kReadHolding = 0x03;
inline constexpr std::uint8_t kWriteMultiple = 0x10;
inline constexpr std::uint8_t kExceptionBit = 0x80;
}  // namespace modbus_fc

struct ModbusFrame {
    std::uint16_t transaction_id = 0;
    std::uint16_t protocol_id = 0;   // must be 0
    std::uint8_t unit_id = 0;
    std::uint8_t function_code = 0;
    Bytes payload;

    // length field of the MBAP header: bytes following it (unit + fc + payload)
    std::uint16_t length() const { return static_cast<std::uint16_t>(2 + payload.size()); }

    bool is_exception() const { return function_code & modbus_fc::kExceptionBit; }

    bool operator==(const ModbusFrame&) const = default;
};

enum class ModbusError {
    kNone,
    kShortBuffer,
    kProtocolId,       // protocol_id != 0
    kLengthMismatch,   // MBAP length inconsistent with buffer
    kUnknownFunction,
    kPayloadTooLarge,
    kBadPayload,       // semantic payload parse failure
};

const char* to_string(ModbusError e);

// 7-byte MBAP header (big-endian transaction_id, protocol_id, length, then
// unit_id) followed by function_code and payload. Throws ContractViolation
// on frames violating the type invariants (encode is for valid frames only).
Bytes encode_modbus(const ModbusFrame& frame);

// Total inverse of encode_modbus: never throws on arbitrary bytes.
Result<ModbusFrame, ModbusError> decode_modbus(std::span<const std::uint8_t> bytes);

// ---- request/response builders and semantic parsers ----

ModbusFrame make_read_request(std::uint16_t tx, std::uint8_t unit,
                              std::uint16_t address, std::uint16_t quantity);
ModbusFrame make_read_response(std::uint16_t tx, std::uint8_t unit,
                               const std::vector<std::uint16_t>& values);
ModbusFrame make_write_request(std::uint16_t tx, std::uint8_t unit,
                               std::uint16_t address,
                               const std::vector<std::uint16_t>& values);
ModbusFrame make_write_response(std::uint16_t tx, std::uint8_t unit,
                                std::uint16_t address, std::uint16_t quantity);
ModbusFrame make_exception(std::uint16_t tx, std::uint8_t unit,
                           std::uint8_t request_fc, std::uint8_t exception_code);

struct ReadRequest {
    std::uint16_t address;
    std::uint16_t quantity;
};
struct WriteRequest {
    std::uint16_t address;
    std::vector<std::uint16_t> values;
};

Result<ReadRequest, ModbusError> parse_read_request(const ModbusFrame& frame);
Result<std::vector<std::uint16_t>, ModbusError> parse_read_response(const ModbusFrame& frame);
Result<WriteRequest, ModbusError> parse_write_request(const ModbusFrame& frame);

}  // namespace scadasim
