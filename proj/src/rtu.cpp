#include "scadasim/rtu.hpp"

namespace scadasim {

std::vector<ModbusFrame> rtu_translate(const Dnp3Frame& request,
                                       const RegisterMap& map,
                                       std::uint16_t transaction_id,
                                       std::uint8_t unit_id) {
    switch (request.app_function) {
        case Dnp3Function::kReadIntegrity:
            return {make_read_request(transaction_id, unit_id, 0,
                                      static_cast<std::uint16_t>(map.size()))};
        case Dnp3Function::kDirectOperate: {
            const auto op = parse_direct_operate(request);
            if (!op) return {};
            return {make_write_request(transaction_id, unit_id, op->address, {op->value})};
        }
        default:
            return {};
    }
}

Dnp3Frame rtu_translate_response(const ModbusFrame& response,
                                 std::uint16_t dst, std::uint16_t src) {
    if (response.is_exception()) {
        return make_response(dst, src, dnp3_status::kDownstreamException, {});
    }
    if (response.function_code == modbus_fc::kReadHolding) {
        const auto values = parse_read_response(response);
        if (!values.ok()) {
            return make_response(dst, src, dnp3_status::kDownstreamException, {});
        }
        return make_response(dst, src, dnp3_status::kOk, values.value());
    }
    if (response.function_code == modbus_fc::kWriteMultiple) {
        return make_response(dst, src, dnp3_status::kOk, {});
    }
    return make_response(dst, src, dnp3_status::kDownstreamException, {});
}

Dnp3Frame make_unsupported_response(std::uint16_t dst, std::uint16_t src) {
    return make_response(dst, src, dnp3_status::kUnsupportedFunction, {});
}

}  // namespace scadasim
