#pragma once

#include <cstdint>
#include <vector>

namespace scadasim {

// Fixed-point mapping between real-valued plant signals and 16-bit holding
// registers: register = round((value - offset) * scale), clamped to
// [0, 65535]. Clamping is silent on the wire but counted.
struct RegisterCodec {
    double scale = 100.0;
    double offset = 0.0;

    std::uint16_t encode(double value, std::uint64_t* saturation_counter = nullptr) const;
    double decode(std::uint16_t reg) const;
};

// Holding registers of one PLC. Register 0 carries the measured distance,
// register 1 the commanded speed; the rest are spare.
class RegisterMap {
 public:
    explicit RegisterMap(std::size_t size = 16);

    std::size_t size() const { return regs_.size(); }
    bool in_range(std::uint16_t address, std::uint16_t quantity) const;

    std::uint16_t read(std::uint16_t address) const;
    void write(std::uint16_t address, std::uint16_t value);

    std::vector<std::uint16_t> read_span(std::uint16_t address, std::uint16_t quantity) const;

 private:
    std::vector<std::uint16_t> regs_;
};

inline constexpr std::uint16_t kDistanceRegister = 0;
inline constexpr std::uint16_t kCommandRegister = 1;

}  // namespace scadasim
