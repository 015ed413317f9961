#include "macanon/blake2b.hpp"

#include <cstring>

#include "macanon/errors.hpp"

namespace macanon {

namespace {

constexpr std::uint64_t kIv[8] = {
    0x6a09e667f3bcc908ULL, 0xbb67ae8584caa73bULL, 0x3c6ef372fe94f82bULL,
    0xa54ff53a5f1d36f1ULL, 0x510e527fade682d1ULL, 0x9b05688c2b3e6c1fULL,
    0x1f83d9abfb41bd6bULL, 0x5be0cd19137e2179ULL,
};

constexpr std::uint8_t kSigma[12][16] = {
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
    {14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3},
    {11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4},
    {7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8},
    {9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13},
    {2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9},
    {12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11},
    {13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10},
    {6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5},
    {10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0},
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
    {14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3},
};

inline std::uint64_t rotr64(std::uint64_t x, int k) { return (x >> k) | (x << (64 - k)); }

inline std::uint64_t load64(const std::uint8_t* p) {
    std::uint64_t v;
    std::memcpy(&v, p, 8);
    return v;  // little-endian host
}

inline void store64(std::uint8_t* p, std::uint64_t v) { std::memcpy(p, &v, 8); }

inline void g(std::uint64_t& a, std::uint64_t& b, std::uint64_t& c, std::uint64_t& d,
              std::uint64_t x, std::uint64_t y) {
    a = a + b + x;
    d = rotr64(d ^ a, 32);
    c = c + d;
    b = rotr64(b ^ c, 24);
    a = a + b + y;
    d = rotr64(d ^ a, 16);
    c = c + d;
    b = rotr64(b ^ c, 63);
}

}  // namespace

Blake2b::Blake2b(std::size_t digest_len) : digest_len_(digest_len) {
    if (digest_len == 0 || digest_len > kMaxDigest)
        throw DomainError("blake2b: digest length must be 1..64 bytes");
    for (int i = 0; i < 8; ++i) h_[i] = kIv[i];
    // Parameter block with fanout=1, depth=1, no key.
    h_[0] ^= 0x01010000ULL ^ static_cast<std::uint64_t>(digest_len);
}

void Blake2b::compress(const std::uint8_t* block, bool last) {
    std::uint64_t m[16];
    for (int i = 0; i < 16; ++i) m[i] = load64(block + 8 * i);

    std::uint64_t v[16];
    for (int i = 0; i < 8; ++i) v[i] = h_[i];
    for (int i = 0; i < 8; ++i) v[8 + i] = kIv[i];
    v[12] ^= t0_;
    v[13] ^= t1_;
    if (last) v[14] = ~v[14];

    for (int r = 0; r < 12; ++r) {
        const auto* s = kSigma[r];
        g(v[0], v[4], v[8], v[12], m[s[0]], m[s[1]]);
        g(v[1], v[5], v[9], v[13], m[s[2]], m[s[3]]);
        g(v[2], v[6], v[10], v[14], m[s[4]], m[s[5]]);
        g(v[3], v[7], v[11], v[15], m[s[6]], m[s[7]]);
        g(v[0], v[5], v[10], v[15], m[s[8]], m[s[9]]);
        g(v[1], v[6], v[11], v[12], m[s[10]], m[s[11]]);
        g(v[2], v[7], v[8], v[13], m[s[12]], m[s[13]]);
        g(v[3], v[4], v[9], v[14], m[s[14]], m[s[15]]);
    }
    for (int i = 0; i < 8; ++i) h_[i] ^= v[i] ^ v[8 + i];
}

void Blake2b::update(std::span<const std::uint8_t> data) {
    const std::uint8_t* p = data.data();
    std::size_t n = data.size();
    while (n > 0) {
        if (buf_len_ == kBlockBytes) {
            // Flush only when more input follows; the final block is
            // compressed with the finalization flag in finish().
            t0_ += kBlockBytes;
            if (t0_ < kBlockBytes) ++t1_;
            compress(buf_, false);
            buf_len_ = 0;
        }
        const std::size_t take = std::min(n, kBlockBytes - buf_len_);
        std::memcpy(buf_ + buf_len_, p, take);
        buf_len_ += take;
        p += take;
        n -= take;
    }
}

void Blake2b::finish(std::span<std::uint8_t> out) {
    if (out.size() != digest_len_)
        throw DomainError("blake2b: output span does not match digest length");
    t0_ += buf_len_;
    if (t0_ < buf_len_) ++t1_;
    std::memset(buf_ + buf_len_, 0, kBlockBytes - buf_len_);
    compress(buf_, true);

    std::uint8_t full[kMaxDigest];
    for (int i = 0; i < 8; ++i) store64(full + 8 * i, h_[i]);
    std::memcpy(out.data(), full, digest_len_);
}

void Blake2b::hash(std::size_t digest_len, std::span<const std::uint8_t> data,
                   std::span<std::uint8_t> out) {
    Blake2b state(digest_len);
    state.update(data);
    state.finish(out);
}

}  // namespace macanon
