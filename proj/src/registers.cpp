#include "scadasim/registers.hpp"

#include <cmath>

#include "scadasim/errors.hpp"

namespace scadasim {

std::uint16_t RegisterCodec::encode(double value, std::uint64_t* saturation_counter) const {
    const double raw = std::round((value - offset) * scale);
    if (raw < 0.0) {
        if (saturation_counter) ++*saturation_counter;
        return 0;
    }
    if (raw > 65535.0) {
        if (saturation_counter) ++*saturation_counter;
        return 65535;
    }
    return static_cast<std::uint16_t>(raw);
}

double RegisterCodec::decode(std::uint16_t reg) const {
    return static_cast<double>(reg) / scale + offset;
}

RegisterMap::RegisterMap(std::size_t size) : regs_(size, 0) {
    if (size == 0 || size > 65536) {
        throw ContractViolation("RegisterMap: size must lie in [1, 65536]");
    }
}

bool RegisterMap::in_range(std::uint16_t address, std::uint16_t quantity) const {
    return quantity >= 1 &&
           static_cast<std::size_t>(address) + quantity <= regs_.size();
}

std::uint16_t RegisterMap::read(std::uint16_t address) const {
    if (!in_range(address, 1)) throw ContractViolation("RegisterMap: read out of range");
    return regs_[address];
}

void RegisterMap::write(std::uint16_t address, std::uint16_t value) {
    if (!in_range(address, 1)) throw ContractViolation("RegisterMap: write out of range");
    regs_[address] = value;
}

std::vector<std::uint16_t> RegisterMap::read_span(std::uint16_t address,
                                                  std::uint16_t quantity) const {
    if (!in_range(address, quantity)) {
        throw ContractViolation("RegisterMap: span read out of range");
    }
    return {regs_.begin() + address, regs_.begin() + address + quantity};
}

}  // namespace scadasim
