#pragma once

// Wire format of Alice's classical message:
//
//   offset 0  4 bytes  magic "XBTP"
//   offset 4  1 byte   version (1)
//   offset 5  1 byte   n, number of slots (1..255)
//   offset 6  ceil(2n/8) bytes  outcome codes, 2 bits per slot, MSB-first;
//                      slot 0 occupies bits 7..6 of the first byte.
//                      Codes: psi+ = 00, psi- = 01, phi+ = 10, phi- = 11.
//                      Unused trailing bits must be zero.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crossbell/bell.hpp"
#include "crossbell/error.hpp"

namespace crossbell {

struct ClassicalMessage {
    static constexpr std::array<std::uint8_t, 4> kMagic{'X', 'B', 'T', 'P'};
    static constexpr std::uint8_t kVersion = 1;
    static constexpr std::size_t kHeaderSize = 6;

    std::vector<BellKind> outcomes;

    static std::size_t payload_size(std::size_t n) { return (2 * n + 7) / 8; }
    static std::size_t frame_size(std::size_t n) { return kHeaderSize + payload_size(n); }

    /// The 2n message bits, slot 0 first, high bit of each code first.
    std::vector<bool> bits() const {
        std::vector<bool> out;
        for (auto k : outcomes) {
            const auto code = static_cast<unsigned>(k);
            out.push_back((code >> 1) & 1U);
            out.push_back(code & 1U);
        }
        return out;
    }

    static ClassicalMessage from_bits(const std::vector<bool>& bits, std::size_t n) {
        if (bits.size() != 2 * n)
            throw Error(ErrorCode::ProtocolViolation,
                        "expected " + std::to_string(2 * n) + " bits for n=" + std::to_string(n) + ", got " +
                            std::to_string(bits.size()));
        ClassicalMessage msg;
        for (std::size_t m = 0; m < n; ++m) msg.outcomes.push_back(kBellKinds[(bits[2 * m] ? 2U : 0U) | (bits[2 * m + 1] ? 1U : 0U)]);
        return msg;
    }

    std::vector<std::uint8_t> encode() const {
        const std::size_t n = outcomes.size();
        if (n == 0 || n > 255) throw Error(ErrorCode::InvalidArgument, "message must carry 1..255 outcomes");
        std::vector<std::uint8_t> frame(kMagic.begin(), kMagic.end());
        frame.push_back(kVersion);
        frame.push_back(static_cast<std::uint8_t>(n));
        frame.resize(frame_size(n), 0);
        const auto b = bits();
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b[i]) frame[kHeaderSize + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
        return frame;
    }

    /// Validates and decodes a complete frame. With expected_n set, a frame
    /// announcing a different slot count is rejected.
    static ClassicalMessage decode(std::span<const std::uint8_t> frame, std::optional<std::size_t> expected_n = std::nullopt) {
        if (frame.size() < kHeaderSize) throw Error(ErrorCode::ProtocolViolation, "frame shorter than header");
        if (!std::equal(kMagic.begin(), kMagic.end(), frame.begin()))
            throw Error(ErrorCode::ProtocolViolation, "bad magic");
        if (frame[4] != kVersion) throw Error(ErrorCode::ProtocolViolation, "unsupported version " + std::to_string(frame[4]));
        const std::size_t n = frame[5];
        if (n == 0) throw Error(ErrorCode::ProtocolViolation, "zero slots");
        if (expected_n && n != *expected_n)
            throw Error(ErrorCode::ProtocolViolation,
                        "frame announces n=" + std::to_string(n) + ", session expects " + std::to_string(*expected_n));
        if (frame.size() != frame_size(n))
            throw Error(ErrorCode::ProtocolViolation, "frame is " + std::to_string(frame.size()) + " bytes, expected " +
                                                          std::to_string(frame_size(n)));
        std::vector<bool> bits;
        for (std::size_t i = 0; i < 8 * payload_size(n); ++i) {
            const bool bit = (frame[kHeaderSize + i / 8] >> (7 - i % 8)) & 1U;
            if (i < 2 * n)
                bits.push_back(bit);
            else if (bit)
                throw Error(ErrorCode::ProtocolViolation, "nonzero padding bit");
        }
        return from_bits(bits, n);
    }

    friend bool operator==(const ClassicalMessage&, const ClassicalMessage&) = default;
};

} // namespace crossbell
