#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace macanon {

std::string to_hex(std::span<const std::uint8_t> bytes);

// Even-length hex string to bytes; throws ParseError otherwise.
std::vector<std::uint8_t> from_hex(std::string_view text);

}  // namespace macanon
