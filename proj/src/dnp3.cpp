#include "scadasim/dnp3.hpp"

#include "scadasim/errors.hpp"

namespace scadasim {

std::uint16_t crc_dnp(std::span<const std::uint8_t> data) {
    // Reflected form of 0x3D65.
    constexpr std::uint16_t kPolyReflected = 0xA6BC;
    std::uint16_t crc = 0x0000;
    for (std::uint8_t byte : data) {
        crc ^= byte;
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc & 1u) ? static_cast<std::uint16_t>((crc >> 1) ^ kPolyReflected)
                             : static_cast<std::uint16_t>(crc >> 1);
        }
    }
    return static_cast<std::uint16_t>(~crc);
}

const char* to_string(Dnp3Error e) {
    switch (e) {
        case Dnp3Error::kNone: return "none";
        case Dnp3Error::kShortBuffer: return "short buffer";
        case Dnp3Error::kBadStart: return "bad start bytes";
        case Dnp3Error::kHeaderCrc: return "header crc failure";
        case Dnp3Error::kBlockCrc: return "block crc failure";
        case Dnp3Error::kLengthMismatch: return "length mismatch";
        case Dnp3Error::kPayloadTooLarge: return "payload too large";
    }
    return "unknown";
}

namespace {

void put_u16le(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u16be(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get_u16le(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint16_t get_u16be(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::size_t app_data_size(const Dnp3Frame& f) {
    return f.app_function == Dnp3Function::kLinkOnly ? 0 : 1 + f.app_payload.size();
}

}  // namespace

Bytes encode_dnp3(const Dnp3Frame& frame) {
    const std::size_t app_len = app_data_size(frame);
    if (frame.app_function == Dnp3Function::kLinkOnly && !frame.app_payload.empty()) {
        throw ContractViolation("encode_dnp3: link-only frame cannot carry payload");
    }
    if (5 + app_len > 0xFF) {
        throw ContractViolation("encode_dnp3: application payload too large for length byte");
    }

    Bytes out;
    out.push_back(kDnp3Start0);
    out.push_back(kDnp3Start1);
    out.push_back(static_cast<std::uint8_t>(5 + app_len));
    out.push_back(frame.control);
    put_u16le(out, frame.destination);
    put_u16le(out, frame.source);
    put_u16le(out, crc_dnp(std::span(out.data(), 8)));

    if (app_len > 0) {
        Bytes app;
        app.reserve(app_len);
        app.push_back(static_cast<std::uint8_t>(frame.app_function));
        app.insert(app.end(), frame.app_payload.begin(), frame.app_payload.end());
        for (std::size_t off = 0; off < app.size(); off += kDnp3BlockSize) {
            const std::size_t block = std::min(kDnp3BlockSize, app.size() - off);
            out.insert(out.end(), app.begin() + off, app.begin() + off + block);
            put_u16le(out, crc_dnp(std::span(app.data() + off, block)));
        }
    }
    return out;
}

Result<Dnp3Frame, Dnp3Error> decode_dnp3(std::span<const std::uint8_t> bytes) {
    using R = Result<Dnp3Frame, Dnp3Error>;
    if (bytes.size() < 10) return R::failure(Dnp3Error::kShortBuffer);
    if (bytes[0] != kDnp3Start0 || bytes[1] != kDnp3Start1) {
        return R::failure(Dnp3Error::kBadStart);
    }
    const std::uint8_t length = bytes[2];
    if (length < 5) return R::failure(Dnp3Error::kLengthMismatch);
    if (get_u16le(bytes, 8) != crc_dnp(bytes.subspan(0, 8))) {
        return R::failure(Dnp3Error::kHeaderCrc);
    }

    const std::size_t app_len = length - 5;
    const std::size_t blocks = (app_len + kDnp3BlockSize - 1) / kDnp3BlockSize;
    const std::size_t expected = 10 + app_len + 2 * blocks;
    if (bytes.size() != expected) return R::failure(Dnp3Error::kLengthMismatch);

    Dnp3Frame f;
    f.control = bytes[3];
    f.destination = get_u16le(bytes, 4);
    f.source = get_u16le(bytes, 6);

    Bytes app;
    app.reserve(app_len);
    std::size_t pos = 10;
    std::size_t remaining = app_len;
    while (remaining > 0) {
        const std::size_t block = std::min(kDnp3BlockSize, remaining);
        if (get_u16le(bytes, pos + block) != crc_dnp(bytes.subspan(pos, block))) {
            return R::failure(Dnp3Error::kBlockCrc);
        }
        app.insert(app.end(), bytes.begin() + pos, bytes.begin() + pos + block);
        pos += block + 2;
        remaining -= block;
    }

    if (app.empty()) {
        f.app_function = Dnp3Function::kLinkOnly;
    } else {
        f.app_function = static_cast<Dnp3Function>(app[0]);
        f.app_payload.assign(app.begin() + 1, app.end());
    }
    return R::success(std::move(f));
}

Dnp3Frame make_read_integrity(std::uint16_t dst, std::uint16_t src) {
    Dnp3Frame f;
    f.destination = dst;
    f.source = src;
    f.app_function = Dnp3Function::kReadIntegrity;
    return f;
}

Dnp3Frame make_direct_operate(std::uint16_t dst, std::uint16_t src,
                              std::uint16_t address, std::uint16_t value) {
    Dnp3Frame f;
    f.destination = dst;
    f.source = src;
    f.app_function = Dnp3Function::kDirectOperate;
    put_u16be(f.app_payload, address);
    put_u16be(f.app_payload, value);
    return f;
}

Dnp3Frame make_response(std::uint16_t dst, std::uint16_t src,
                        std::uint8_t status,
                        const std::vector<std::uint16_t>& values) {
    Dnp3Frame f;
    f.control = 0x44;
    f.destination = dst;
    f.source = src;
    f.app_function = Dnp3Function::kResponse;
    f.app_payload.push_back(status);
    for (std::uint16_t v : values) put_u16be(f.app_payload, v);
    return f;
}

std::optional<Dnp3Operate> parse_direct_operate(const Dnp3Frame& frame) {
    if (frame.app_function != Dnp3Function::kDirectOperate ||
        frame.app_payload.size() != 4) {
        return std::nullopt;
    }
    return Dnp3Operate{get_u16be(frame.app_payload, 0), get_u16be(frame.app_payload, 2)};
}

std::optional<Dnp3Response> parse_response(const Dnp3Frame& frame) {
    if (frame.app_function != Dnp3Function::kResponse || frame.app_payload.empty() ||
        frame.app_payload.size() % 2 != 1) {
        return std::nullopt;
    }
    Dnp3Response r;
    r.status = frame.app_payload[0];
    for (std::size_t i = 1; i + 1 < frame.app_payload.size(); i += 2) {
        r.values.push_back(get_u16be(frame.app_payload, i));
    }
    return r;
}

}  // namespace scadasim
