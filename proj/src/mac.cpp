#include "macanon/mac.hpp"

#include <cctype>
#include <cstdio>
#include <unordered_set>

#include "macanon/errors.hpp"
#include "macanon/rng.hpp"

namespace macanon {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

[[noreturn]] void fail(std::string_view text, const char* reason) {
    throw ParseError("invalid MAC address \"" + std::string(text) + "\": " + reason);
}

}  // namespace

MacAddress parse_mac(std::string_view text) {
    // Determine the grouping from the first separator encountered; the rest
    // of the string must follow the same pattern.
    char sep = 0;            // 0 = bare 12 hex digits
    int group_len = 12;      // digits between separators
    std::uint64_t value = 0;
    int digits = 0;
    int run = 0;  // digits since the last separator

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (hex_value(c) >= 0) {
            if (digits == 12) fail(text, "too many hex digits");
            value = (value << 4) | static_cast<std::uint64_t>(hex_value(c));
            ++digits;
            ++run;
            if (sep != 0 && run > group_len) fail(text, "inconsistent grouping");
            continue;
        }
        if (c == ':' || c == '-' || c == '.') {
            if (sep == 0) {
                if (run != 2 && run != 4) fail(text, "inconsistent grouping");
                sep = c;
                group_len = run;
            } else if (c != sep || run != group_len) {
                fail(text, "inconsistent grouping");
            }
            if (run == 0) fail(text, "empty group");
            run = 0;
            continue;
        }
        fail(text, "non-hex character");
    }
    if (digits != 12) fail(text, digits < 12 ? "too few hex digits" : "too many hex digits");
    if (sep != 0 && run != group_len) fail(text, "inconsistent grouping");
    return MacAddress{value};
}

std::string format_mac(MacAddress mac) {
    const auto b = mac.bytes();
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", b[0], b[1], b[2], b[3],
                  b[4], b[5]);
    return std::string(buf);
}

std::vector<MacAddress> sample_unique_macs(std::uint64_t count, const MacRange& range,
                                           std::uint64_t seed) {
    if (range.start.value > range.end.value)
        throw DomainError("MAC range start exceeds end");
    const std::uint64_t size = range.size();
    if (count > size)
        throw CapacityError("cannot sample " + std::to_string(count) +
                            " unique addresses from a range of " + std::to_string(size));

    // Floyd's sampling: uniform over count-subsets, O(count) draws, and
    // still works when count == size.
    Xoshiro256ss rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(count) + 1);
    std::vector<MacAddress> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t j = size - count; j < size; ++j) {
        const std::uint64_t t = rng.bounded(j + 1);
        const std::uint64_t pick = chosen.insert(t).second ? t : j;
        if (pick != t) chosen.insert(pick);
        out.push_back(MacAddress{range.start.value + pick});
    }
    return out;
}

}  // namespace macanon
