#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace macanon {

// A 48-bit hardware address held as an integer. The top 24 bits are the
// manufacturer prefix (OUI), the bottom 24 the per-device NIC suffix.
struct MacAddress {
    std::uint64_t value = 0;

    static constexpr std::uint64_t kMaxValue = (std::uint64_t{1} << 48) - 1;

    constexpr std::uint32_t oui() const { return static_cast<std::uint32_t>(value >> 24); }
    constexpr std::uint32_t nic() const { return static_cast<std::uint32_t>(value & 0xffffff); }

    // Big-endian octets, as transmitted on the wire and as fed to the KDF.
    std::array<std::uint8_t, 6> bytes() const {
        std::array<std::uint8_t, 6> out{};
        for (int i = 0; i < 6; ++i)
            out[i] = static_cast<std::uint8_t>(value >> (8 * (5 - i)));
        return out;
    }

    auto operator<=>(const MacAddress&) const = default;
};

// Accepts 12 hex digits grouped as aa:bb:cc:dd:ee:ff, aa-bb-cc-dd-ee-ff,
// aabb.ccdd.eeff or aabbccddeeff, case-insensitive. Mixed separators and
// wrong group sizes are rejected. Throws ParseError.
MacAddress parse_mac(std::string_view text);

// Canonical form: lowercase, colon-separated, six zero-padded octets.
std::string format_mac(MacAddress mac);

// Inclusive range of addresses.
struct MacRange {
    MacAddress start;
    MacAddress end;

    constexpr std::uint64_t size() const { return end.value - start.value + 1; }
    constexpr bool contains(MacAddress mac) const {
        return start.value <= mac.value && mac.value <= end.value;
    }

    // 00:16:3e:00:00:00 .. 00:16:3e:7f:ff:ff, the virtual-machine address
    // block used for the reference collision experiment (2^23 addresses).
    static constexpr MacRange experiment_default() {
        return {MacAddress{0x00163e000000}, MacAddress{0x00163e7fffff}};
    }
};

// Draws `count` distinct addresses uniformly from `range`, deterministically
// for a fixed seed. Throws CapacityError when count exceeds the range size.
std::vector<MacAddress> sample_unique_macs(std::uint64_t count, const MacRange& range,
                                           std::uint64_t seed);

}  // namespace macanon
