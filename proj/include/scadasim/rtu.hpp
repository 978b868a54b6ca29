#pragma once

#include <cstdint>
#include <vector>

#include "scadasim/dnp3.hpp"
#include "scadasim/modbus.hpp"
#include "scadasim/registers.hpp"

namespace scadasim {

// Proxy translation between the controller's DNP3 leg and the PLC's Modbus
// leg, in both directions. The stateless core; session bookkeeping (pending
// requests, transaction ids) lives in RtuNode.

// DNP3 request -> Modbus frames toward the PLC.
//   READ_INTEGRITY  -> one 0x03 read covering the full register span
//   DIRECT_OPERATE  -> one 0x10 write of that register
// Unsupported application functions yield an empty list; the caller answers
// with an error response (see make_unsupported_response).
std::vector<ModbusFrame> rtu_translate(const Dnp3Frame& request,
                                       const RegisterMap& map,
                                       std::uint16_t transaction_id,
                                       std::uint8_t unit_id = 1);

// Modbus response -> DNP3 RESPONSE toward the controller. Exception frames
// become error responses (status = kDownstreamException); malformed payloads
// too, rather than crashing the proxy.
Dnp3Frame rtu_translate_response(const ModbusFrame& response,
                                 std::uint16_t dst, std::uint16_t src);

Dnp3Frame make_unsupported_response(std::uint16_t dst, std::uint16_t src);

}  // namespace scadasim
