#pragma once

#include <cstdint>
#include <memory>
#include <span>

namespace macanon {

enum class Argon2Variant : std::uint32_t {
    kD = 0,   // data-dependent addressing
    kI = 1,   // data-independent addressing
    kId = 2,  // hybrid: independent first half of first pass, dependent after
};

struct Argon2Params {
    Argon2Variant variant = Argon2Variant::kD;
    std::uint32_t time_cost = 3;          // passes over memory
    std::uint32_t memory_cost_kib = 65536;
    std::uint32_t parallelism = 1;        // lanes
};

// Reusable block arena so bulk hashing does not pay an allocation and a
// page-fault storm per invocation.
class Argon2Workspace {
public:
    std::uint64_t* ensure(std::size_t words);

private:
    std::unique_ptr<std::uint64_t[]> words_;
    std::size_t capacity_ = 0;
};

// Raw Argon2 (version 0x13). Fills out.size() bytes of tag material.
// Requires: 1 <= parallelism < 2^24, memory_cost_kib >= 8 * parallelism,
// time_cost >= 1, salt.size() >= 8, 4 <= out.size(). Throws DomainError on
// parameter violations and ResourceError when the block arena cannot be
// allocated.
void argon2_hash(const Argon2Params& params, std::span<const std::uint8_t> password,
                 std::span<const std::uint8_t> salt, std::span<std::uint8_t> out,
                 Argon2Workspace& workspace);

void argon2_hash(const Argon2Params& params, std::span<const std::uint8_t> password,
                 std::span<const std::uint8_t> salt, std::span<std::uint8_t> out);

}  // namespace macanon
