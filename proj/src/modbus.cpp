#include "scadasim/modbus.hpp"

#include "scadasim/errors.hpp"

namespace scadasim {

namespace {

void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

bool known_function(std::uint8_t fc) {
    return fc == modbus_fc::kReadHolding || fc == modbus_fc::kWriteMultiple ||
           fc == (modbus_fc::kReadHolding | modbus_fc::kExceptionBit) ||
           fc == (modbus_fc::kWriteMultiple | modbus_fc::kExceptionBit);
}

}  // namespace

const char* to_string(ModbusError e) {
    switch (e) {
        case ModbusError::kNone: return "none";
        case ModbusError::kShortBuffer: return "short buffer";
        case ModbusError::kProtocolId: return "protocol id not zero";
        case ModbusError::kLengthMismatch: return "length mismatch";
        case ModbusError::kUnknownFunction: return "unknown function code";
        case ModbusError::kPayloadTooLarge: return "payload too large";
        case ModbusError::kBadPayload: return "bad payload";
    }
    return "unknown";
}

Bytes encode_modbus(const ModbusFrame& frame) {
    if (frame.protocol_id != 0) {
        throw ContractViolation("encode_modbus: protocol_id must be 0");
    }
    if (!known_function(frame.function_code)) {
        throw ContractViolation("encode_modbus: unsupported function code");
    }
    if (frame.payload.size() > 0xFFFF - 2) {
        throw ContractViolation("encode_modbus: payload too large");
    }
    Bytes out;
    out.reserve(8 + frame.payload.size());
    put_u16(out, frame.transaction_id);
    put_u16(out, frame.protocol_id);
    put_u16(out, frame.length());
    out.push_back(frame.unit_id);
    out.push_back(frame.function_code);
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

Result<ModbusFrame, ModbusError> decode_modbus(std::span<const std::uint8_t> bytes) {
    using R = Result<ModbusFrame, ModbusError>;
    if (bytes.size() < 8) return R::failure(ModbusError::kShortBuffer);
    ModbusFrame f;
    f.transaction_id = get_u16(bytes, 0);
    f.protocol_id = get_u16(bytes, 2);
    if (f.protocol_id != 0) return R::failure(ModbusError::kProtocolId);
    const std::uint16_t length = get_u16(bytes, 4);
    if (length < 2) return R::failure(ModbusError::kLengthMismatch);
    if (bytes.size() != static_cast<std::size_t>(6) + length) {
        return R::failure(ModbusError::kLengthMismatch);
    }
    f.unit_id = bytes[6];
    f.function_code = bytes[7];
    if (!known_function(f.function_code)) {
        return R::failure(ModbusError::kUnknownFunction);
    }
    f.payload.assign(bytes.begin() + 8, bytes.end());
    return R::success(std::move(f));
}

ModbusFrame make_read_request(std::uint16_t tx, std::uint8_t unit,
                              std::uint16_t address, std::uint16_t quantity) {
    ModbusFrame f;
    f.transaction_id = tx;
    f.unit_id = unit;
    f.function_code = modbus_fc::kReadHolding;
    put_u16(f.payload, address);
    put_u16(f.payload, quantity);
    return f;
}

ModbusFrame make_read_response(std::uint16_t tx, std::uint8_t unit,
                               const std::vector<std::uint16_t>& values) {
    ModbusFrame f;
    f.transaction_id = tx;
    f.unit_id = unit;
    f.function_code = modbus_fc::kReadHolding;
    f.payload.push_back(static_cast<std::uint8_t>(values.size() * 2));
    for (std::uint16_t v : values) put_u16(f.payload, v);
    return f;
}

ModbusFrame make_write_request(std::uint16_t tx, std::uint8_t unit,
                               std::uint16_t address,
                               const std::vector<std::uint16_t>& values) {
    ModbusFrame f;
    f.transaction_id = tx;
    f.unit_id = unit;
    f.function_code = modbus_fc::kWriteMultiple;
    put_u16(f.payload, address);
    put_u16(f.payload, static_cast<std::uint16_t>(values.size()));
    f.payload.push_back(static_cast<std::uint8_t>(values.size() * 2));
    for (std::uint16_t v : values) put_u16(f.payload, v);
    return f;
}

ModbusFrame make_write_response(std::uint16_t tx, std::uint8_t unit,
                                std::uint16_t address, std::uint16_t quantity) {
    ModbusFrame f;
    f.transaction_id = tx;
    f.unit_id = unit;
    f.function_code = modbus_fc::kWriteMultiple;
    put_u16(f.payload, address);
    put_u16(f.payload, quantity);
    return f;
}

ModbusFrame make_exception(std::uint16_t tx, std::uint8_t unit,
                           std::uint8_t request_fc, std::uint8_t exception_code) {
    ModbusFrame f;
    f.transaction_id = tx;
    f.unit_id = unit;
    f.function_code = static_cast<std::uint8_t>(request_fc | modbus_fc::kExceptionBit);
    f.payload.push_back(exception_code);
    return f;
}

Result<ReadRequest, ModbusError> parse_read_request(const ModbusFrame& frame) {
    using R = Result<ReadRequest, ModbusError>;
    if (frame.function_code != modbus_fc::kReadHolding || frame.payload.size() != 4) {
        return R::failure(ModbusError::kBadPayload);
    }
    return R::success(ReadRequest{get_u16(frame.payload, 0), get_u16(frame.payload, 2)});
}

Result<std::vector<std::uint16_t>, ModbusError> parse_read_response(const ModbusFrame& frame) {
    using R = Result<std::vector<std::uint16_t>, ModbusError>;
    if (frame.function_code != modbus_fc::kReadHolding || frame.payload.empty()) {
        return R::failure(ModbusError::kBadPayload);
    }
    const std::uint8_t count = frame.payload[0];
    if (count % 2 != 0 || frame.payload.size() != static_cast<std::size_t>(1) + count) {
        return R::failure(ModbusError::kBadPayload);
    }
    std::vector<std::uint16_t> values;
    values.reserve(count / 2);
    for (std::size_t i = 1; i + 1 < frame.payload.size(); i += 2) {
        values.push_back(get_u16(frame.payload, i));
    }
    return R::success(std::move(values));
}

Result<WriteRequest, ModbusError> parse_write_request(const ModbusFrame& frame) {
    using R = Result<WriteRequest, ModbusError>;
    if (frame.function_code != modbus_fc::kWriteMultiple || frame.payload.size() < 5) {
        return R::failure(ModbusError::kBadPayload);
    }
    WriteRequest req;
    req.address = get_u16(frame.payload, 0);
    const std::uint16_t quantity = get_u16(frame.payload, 2);
    const std::uint8_t count = frame.payload[4];
    if (count != quantity * 2 ||
        frame.payload.size() != static_cast<std::size_t>(5) + count) {
        return R::failure(ModbusError::kBadPayload);
    }
    for (std::size_t i = 5; i + 1 < frame.payload.size(); i += 2) {
        req.values.push_back(get_u16(frame.payload, i));
    }
    return R::success(std::move(req));
}

}  // namespace scadasim
