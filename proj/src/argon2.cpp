#include "macanon/argon2.hpp"

#include <bit>
#include <cstring>
#include <new>

#include "macanon/blake2b.hpp"
#include "macanon/errors.hpp"

namespace macanon {

namespace {

constexpr std::uint32_t kVersion = 0x13;
constexpr std::size_t kBlockWords = 128;  // 1 KiB blocks
constexpr std::size_t kSyncPoints = 4;

using Word = std::uint64_t;

struct Block {
    Word v[kBlockWords];
};

inline void xor_block(Block& dst, const Block& src) {
    for (std::size_t i = 0; i < kBlockWords; ++i) dst.v[i] ^= src.v[i];
}

// BlaMka mixing primitive: the BLAKE2b G function with the additions
// replaced by a + b + 2 * lo32(a) * lo32(b).
inline void gb(Word& a, Word& b, Word& c, Word& d) {
    auto fbla = [](Word x, Word y) {
        return x + y + 2 * (x & 0xffffffffULL) * (y & 0xffffffffULL);
    };
    a = fbla(a, b);
    d = std::rotr(d ^ a, 32);
    c = fbla(c, d);
    b = std::rotr(b ^ c, 24);
    a = fbla(a, b);
    d = std::rotr(d ^ a, 16);
    c = fbla(c, d);
    b = std::rotr(b ^ c, 63);
}

inline void round16(Word& v0, Word& v1, Word& v2, Word& v3, Word& v4, Word& v5, Word& v6,
                    Word& v7, Word& v8, Word& v9, Word& v10, Word& v11, Word& v12, Word& v13,
                    Word& v14, Word& v15) {
    gb(v0, v4, v8, v12);
    gb(v1, v5, v9, v13);
    gb(v2, v6, v10, v14);
    gb(v3, v7, v11, v15);
    gb(v0, v5, v10, v15);
    gb(v1, v6, v11, v12);
    gb(v2, v7, v8, v13);
    gb(v3, v4, v9, v14);
}

// next = P(prev ^ ref) ^ (prev ^ ref) [^ next when accumulating].
// The permutation runs over the 8 rows and then the 8 column pairs of the
// block viewed as an 8x8 matrix of 16-byte registers.
void fill_block(const Block& prev, const Block& ref, Block& next, bool with_xor) {
    Block r;
    for (std::size_t i = 0; i < kBlockWords; ++i) r.v[i] = prev.v[i] ^ ref.v[i];
    Block tmp = r;
    if (with_xor) xor_block(tmp, next);

    for (int i = 0; i < 8; ++i) {
        Word* p = r.v + 16 * i;
        round16(p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8], p[9], p[10], p[11],
                p[12], p[13], p[14], p[15]);
    }
    for (int i = 0; i < 8; ++i) {
        Word* p = r.v + 2 * i;
        round16(p[0], p[1], p[16], p[17], p[32], p[33], p[48], p[49], p[64], p[65], p[80],
                p[81], p[96], p[97], p[112], p[113]);
    }

    for (std::size_t i = 0; i < kBlockWords; ++i) next.v[i] = tmp.v[i] ^ r.v[i];
}

inline void put_le32(std::uint8_t* p, std::uint32_t v) { std::memcpy(p, &v, 4); }
inline void put_le64(Word& slot, std::uint64_t v) { slot = v; }

// Variable-length hash H': chained BLAKE2b keyed by the output length.
void hash_variable(std::span<const std::uint8_t> input, std::span<std::uint8_t> out) {
    const auto out_len = static_cast<std::uint32_t>(out.size());
    std::uint8_t len_le[4];
    put_le32(len_le, out_len);

    if (out.size() <= Blake2b::kMaxDigest) {
        Blake2b h(out.size());
        h.update(len_le);
        h.update(input);
        h.finish(out);
        return;
    }
    std::uint8_t v[64];
    Blake2b h(64);
    h.update(len_le);
    h.update(input);
    h.finish(v);

    std::size_t written = 0;
    while (out.size() - written > 64) {
        std::memcpy(out.data() + written, v, 32);
        written += 32;
        Blake2b next(64);
        next.update(v);
        next.finish(v);
    }
    std::memcpy(out.data() + written, v, out.size() - written);
}

struct Position {
    std::uint32_t pass;
    std::uint32_t lane;
    std::uint32_t slice;
};

struct Instance {
    Block* memory;
    std::uint32_t passes;
    std::uint32_t lanes;
    std::uint32_t lane_length;
    std::uint32_t segment_length;
    Argon2Variant variant;
};

std::uint32_t index_alpha(const Instance& inst, const Position& pos, std::uint32_t index,
                          std::uint32_t j1, bool same_lane) {
    std::uint32_t area;
    if (pos.pass == 0) {
        if (pos.slice == 0) {
            area = index - 1;  // blocks written so far in this segment
        } else if (same_lane) {
            area = pos.slice * inst.segment_length + index - 1;
        } else {
            area = pos.slice * inst.segment_length - (index == 0 ? 1 : 0);
        }
    } else {
        if (same_lane) {
            area = inst.lane_length - inst.segment_length + index - 1;
        } else {
            area = inst.lane_length - inst.segment_length - (index == 0 ? 1 : 0);
        }
    }
    // Quadratic mapping biases references toward recent blocks.
    const std::uint64_t area64 = area;
    std::uint64_t rel = j1;
    rel = (rel * rel) >> 32;
    rel = area64 - 1 - ((area64 * rel) >> 32);

    std::uint64_t start = 0;
    if (pos.pass != 0 && pos.slice != kSyncPoints - 1)
        start = std::uint64_t{pos.slice + 1} * inst.segment_length;
    return static_cast<std::uint32_t>((start + rel) % inst.lane_length);
}

void fill_segment(const Instance& inst, const Position& pos) {
    const bool data_independent =
        inst.variant == Argon2Variant::kI ||
        (inst.variant == Argon2Variant::kId && pos.pass == 0 && pos.slice < kSyncPoints / 2);

    Block address_block, input_block, zero_block;
    if (data_independent) {
        std::memset(&zero_block, 0, sizeof zero_block);
        std::memset(&input_block, 0, sizeof input_block);
        put_le64(input_block.v[0], pos.pass);
        put_le64(input_block.v[1], pos.lane);
        put_le64(input_block.v[2], pos.slice);
        put_le64(input_block.v[3], static_cast<std::uint64_t>(inst.lane_length) * inst.lanes);
        put_le64(input_block.v[4], inst.passes);
        put_le64(input_block.v[5], static_cast<std::uint64_t>(inst.variant));
    }

    auto next_addresses = [&] {
        ++input_block.v[6];
        fill_block(zero_block, input_block, address_block, false);
        fill_block(zero_block, address_block, address_block, false);
    };

    std::uint32_t index = 0;
    if (pos.pass == 0 && pos.slice == 0) {
        index = 2;  // first two blocks are seeded
        if (data_independent) next_addresses();
    }

    std::uint32_t cur =
        pos.lane * inst.lane_length + pos.slice * inst.segment_length + index;
    std::uint32_t prev = (cur % inst.lane_length == 0) ? cur + inst.lane_length - 1 : cur - 1;

    for (; index < inst.segment_length; ++index, ++cur, ++prev) {
        if (cur % inst.lane_length == 1) prev = cur - 1;

        std::uint64_t rand;
        if (data_independent) {
            if (index % kBlockWords == 0) next_addresses();
            rand = address_block.v[index % kBlockWords];
        } else {
            rand = inst.memory[prev].v[0];
        }
        const auto j1 = static_cast<std::uint32_t>(rand & 0xffffffffULL);
        const auto j2 = static_cast<std::uint32_t>(rand >> 32);

        std::uint32_t ref_lane = j2 % inst.lanes;
        if (pos.pass == 0 && pos.slice == 0) ref_lane = pos.lane;
        const bool same_lane = ref_lane == pos.lane;

        const std::uint32_t ref_index = index_alpha(inst, pos, index, j1, same_lane);
        const Block& ref = inst.memory[ref_lane * inst.lane_length + ref_index];
        fill_block(inst.memory[prev], ref, inst.memory[cur], pos.pass > 0);
    }
}

struct Validated {
    std::uint32_t lanes;
    std::uint32_t lane_length;
    std::uint32_t blocks;
};

Validated validate(const Argon2Params& params, std::span<const std::uint8_t> salt,
                   std::size_t out_len) {
    if (params.parallelism == 0 || params.parallelism >= (1u << 24))
        throw DomainError("argon2: parallelism must be in [1, 2^24)");
    if (params.time_cost == 0) throw DomainError("argon2: time_cost must be >= 1");
    if (params.memory_cost_kib < 8 * params.parallelism)
        throw DomainError("argon2: memory_cost_kib must be >= 8 * parallelism");
    if (salt.size() < 8) throw DomainError("argon2: salt must be at least 8 bytes");
    if (out_len < 4) throw DomainError("argon2: output must be at least 4 bytes");

    const std::uint32_t blocks_rounded =
        params.memory_cost_kib / (4 * params.parallelism) * (4 * params.parallelism);
    return Validated{params.parallelism, blocks_rounded / params.parallelism, blocks_rounded};
}

}  // namespace

std::uint64_t* Argon2Workspace::ensure(std::size_t words) {
    if (capacity_ < words) {
        words_.reset();
        words_ = std::make_unique_for_overwrite<std::uint64_t[]>(words);
        capacity_ = words;
    }
    return words_.get();
}

void argon2_hash(const Argon2Params& params, std::span<const std::uint8_t> password,
                 std::span<const std::uint8_t> salt, std::span<std::uint8_t> out,
                 Argon2Workspace& workspace) {
    const Validated v = validate(params, salt, out.size());

    Block* memory;
    try {
        memory = reinterpret_cast<Block*>(workspace.ensure(std::size_t{v.blocks} * kBlockWords));
    } catch (const std::bad_alloc&) {
        throw ResourceError("argon2: cannot allocate " +
                            std::to_string(params.memory_cost_kib) + " KiB block arena");
    }

    // H0 binds every parameter plus the password and salt.
    std::uint8_t h0[64];
    {
        Blake2b h(64);
        std::uint8_t le[4];
        auto put = [&](std::uint32_t x) {
            put_le32(le, x);
            h.update(le);
        };
        put(params.parallelism);
        put(static_cast<std::uint32_t>(out.size()));
        put(params.memory_cost_kib);
        put(params.time_cost);
        put(kVersion);
        put(static_cast<std::uint32_t>(params.variant));
        put(static_cast<std::uint32_t>(password.size()));
        h.update(password);
        put(static_cast<std::uint32_t>(salt.size()));
        h.update(salt);
        put(0);  // no secret key
        put(0);  // no associated data
        h.finish(h0);
    }

    // Seed the first two columns of every lane.
    std::uint8_t seed[64 + 8];
    std::memcpy(seed, h0, 64);
    for (std::uint32_t lane = 0; lane < v.lanes; ++lane) {
        for (std::uint32_t col = 0; col < 2; ++col) {
            put_le32(seed + 64, col);
            put_le32(seed + 68, lane);
            hash_variable({seed, sizeof seed},
                          {reinterpret_cast<std::uint8_t*>(memory[lane * v.lane_length + col].v),
                           sizeof(Block)});
        }
    }

    Instance inst{memory, params.time_cost, v.lanes, v.lane_length,
                  v.lane_length / static_cast<std::uint32_t>(kSyncPoints), params.variant};
    for (std::uint32_t pass = 0; pass < params.time_cost; ++pass)
        for (std::uint32_t slice = 0; slice < kSyncPoints; ++slice)
            for (std::uint32_t lane = 0; lane < v.lanes; ++lane)
                fill_segment(inst, Position{pass, lane, slice});

    // Tag: xor of the final column, then H'.
    Block final_block = memory[v.lane_length - 1];
    for (std::uint32_t lane = 1; lane < v.lanes; ++lane)
        xor_block(final_block, memory[lane * v.lane_length + v.lane_length - 1]);
    hash_variable({reinterpret_cast<const std::uint8_t*>(final_block.v), sizeof(Block)}, out);

    // The seed buffer embeds the raw password via H0's preimage state; the
    // password itself was hashed straight into h0. Clear both anyway.
    volatile std::uint8_t* scrub = h0;
    for (std::size_t i = 0; i < sizeof h0; ++i) scrub[i] = 0;
    scrub = seed;
    for (std::size_t i = 0; i < sizeof seed; ++i) scrub[i] = 0;
}

void argon2_hash(const Argon2Params& params, std::span<const std::uint8_t> password,
                 std::span<const std::uint8_t> salt, std::span<std::uint8_t> out) {
    Argon2Workspace workspace;
    argon2_hash(params, password, salt, out, workspace);
}

}  // namespace macanon
