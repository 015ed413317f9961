#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace macanon {

// BLAKE2b with a configurable digest length of 1..64 bytes (unkeyed).
// Incremental interface; the KDF needs one-shot hashing plus chained
// 64-byte states, both covered here.
class Blake2b {
public:
    static constexpr std::size_t kMaxDigest = 64;
    static constexpr std::size_t kBlockBytes = 128;

    explicit Blake2b(std::size_t digest_len);

    void update(std::span<const std::uint8_t> data);
    void finish(std::span<std::uint8_t> out);  // out.size() == digest_len

    static void hash(std::size_t digest_len, std::span<const std::uint8_t> data,
                     std::span<std::uint8_t> out);

private:
    void compress(const std::uint8_t* block, bool last);

    std::uint64_t h_[8];
    std::uint64_t t0_ = 0, t1_ = 0;
    std::uint8_t buf_[kBlockBytes];
    std::size_t buf_len_ = 0;
    std::size_t digest_len_;
};

}  // namespace macanon
