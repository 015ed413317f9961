#include "macanon/anonymize.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>

#include "macanon/errors.hpp"
#include "macanon/hex.hpp"

namespace macanon {

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view text) {
    auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (text.size() % 2 != 0)
        throw ParseError("hex string has odd length (" + std::to_string(text.size()) + ")");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        const int hi = nibble(text[i]), lo = nibble(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw ParseError(std::string("invalid hex character '") + text[i + (hi < 0 ? 0 : 1)] +
                             "'");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

void KdfParams::validate() const {
    if (algorithm != "argon2d" && algorithm != "argon2id" && algorithm != "argon2i")
        throw ValidationError("unknown KDF algorithm \"" + algorithm +
                              "\" (supported: argon2d, argon2id, argon2i)");
    if (memory_cost_kib == 0 || time_cost == 0 || parallelism == 0)
        throw ValidationError("KDF memory_cost, time_cost and parallelism must be >= 1");
    if (memory_cost_kib < 8 * parallelism)
        throw ValidationError("KDF memory_cost_kib must be at least 8 * parallelism");
    if (output_length < 8)
        throw ValidationError("KDF output_length must be at least 8 bytes to cover 64-bit digests");
    if (output_length > 4096) throw ValidationError("KDF output_length above 4096 bytes");
}

Argon2Params KdfParams::to_argon2() const {
    Argon2Variant variant = Argon2Variant::kD;
    if (algorithm == "argon2id") variant = Argon2Variant::kId;
    else if (algorithm == "argon2i") variant = Argon2Variant::kI;
    return Argon2Params{variant, time_cost, memory_cost_kib, parallelism};
}

void AnonymizationPolicy::validate() const {
    kdf.validate();
    const std::size_t min_len = allow_short_salt ? kSaltMinBytesShort : kSaltMinBytes;
    if (salt.secret.size() < min_len)
        throw ValidationError("salt secret is " + std::to_string(salt.secret.size()) +
                              " bytes; minimum is " + std::to_string(min_len) +
                              (allow_short_salt ? "" : " (pass the short-salt override to lower it to 8)"));
    if (digest_bits < 1 || digest_bits > 64)
        throw ValidationError("digest_bits must lie in [1, 64]");
    if (static_cast<std::uint32_t>(digest_bits) > 8 * kdf.output_length)
        throw ValidationError("digest_bits exceeds the KDF output length");
}

std::uint64_t truncate_digest(std::span<const std::uint8_t> digest, int bits) {
    if (bits < 1 || bits > 64) throw DomainError("truncate_digest: bits must lie in [1, 64]");
    if (static_cast<std::size_t>(bits) > 8 * digest.size())
        throw DomainError("truncate_digest: digest too short for requested bits");
    const int nbytes = (bits + 7) / 8;
    std::uint64_t value = 0;
    for (int i = 0; i < nbytes; ++i) value = value << 8 | digest[static_cast<std::size_t>(i)];
    return value >> (8 * nbytes - bits);
}

std::string BucketDigest::hex() const {
    const int width = (bits + 3) / 4;
    char buf[24];
    std::snprintf(buf, sizeof buf, "%0*llx", width, static_cast<unsigned long long>(value));
    return std::string(buf);
}

std::string BucketDigest::decimal() const { return std::to_string(value); }

BucketHasher::BucketHasher(AnonymizationPolicy policy) : policy_(std::move(policy)) {
    policy_.validate();
    argon2_ = policy_.kdf.to_argon2();
    salt_input_ = policy_.salt.secret;
    salt_input_.insert(salt_input_.end(), policy_.extra_entropy.begin(),
                       policy_.extra_entropy.end());
    digest_.resize(policy_.kdf.output_length);
}

BucketDigest BucketHasher::operator()(MacAddress mac) {
    auto mac_bytes = mac.bytes();
    argon2_hash(argon2_, mac_bytes, salt_input_, digest_, workspace_);
    secure_wipe(mac_bytes);  // hash-at-detection: the raw address dies here
    const std::uint64_t value = truncate_digest(digest_, policy_.digest_bits);
    return BucketDigest{value, policy_.digest_bits};
}

BucketDigest anonymize(MacAddress mac, const AnonymizationPolicy& policy) {
    BucketHasher hasher(policy);
    return hasher(mac);
}

EntropySource system_entropy() {
    return [](std::span<std::uint8_t> out) {
        try {
            std::random_device device;
            for (auto& byte : out) byte = static_cast<std::uint8_t>(device());
        } catch (const std::exception& e) {
            throw ResourceError(std::string("entropy source failed: ") + e.what());
        }
    };
}

AnonymizationPolicy rotate_salt(const AnonymizationPolicy& policy,
                                const EntropySource& entropy) {
    AnonymizationPolicy next = policy;
    entropy(next.salt.secret);
    next.salt.created_at_unix = std::chrono::duration_cast<std::chrono::seconds>(
                                    std::chrono::system_clock::now().time_since_epoch())
                                    .count();
    return next;
}

namespace {

std::int64_t now_unix() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

bool looks_like_hex(std::string_view text) {
    if (text.size() < 16 || text.size() % 2 != 0) return false;
    for (const char c : text)
        if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Salt salt_from_hex(std::string_view hex) {
    Salt salt;
    salt.secret = from_hex(hex);
    salt.created_at_unix = now_unix();
    return salt;
}

Salt salt_from_file(const std::string& path, SaltFileFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open salt file \"" + path + "\"");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (format != SaltFileFormat::kRaw) {
        std::string_view trimmed = content;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.remove_suffix(1);
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
            trimmed.remove_prefix(1);
        if (format == SaltFileFormat::kHex || looks_like_hex(trimmed)) {
            if (format == SaltFileFormat::kHex && !looks_like_hex(trimmed))
                throw ValidationError("salt file \"" + path + "\" is not hex");
            return salt_from_hex(trimmed);
        }
    }
    Salt salt;
    salt.secret.assign(content.begin(), content.end());
    salt.created_at_unix = now_unix();
    return salt;
}

Salt salt_from_env() {
    const char* value = std::getenv(kSaltEnvVar);
    if (value == nullptr || *value == '\0')
        throw ValidationError(std::string("environment variable ") + kSaltEnvVar + " is not set");
    return salt_from_hex(value);
}

std::size_t max_concurrent_kdf(std::uint64_t memory_budget_bytes, const KdfParams& kdf) {
    const std::uint64_t per_call = std::uint64_t{kdf.memory_cost_kib} * 1024;
    if (per_call == 0) return 1;
    const std::uint64_t n = memory_budget_bytes / per_call;
    return n == 0 ? 1 : static_cast<std::size_t>(n);
}

void secure_wipe(std::span<std::uint8_t> bytes) {
    volatile std::uint8_t* p = bytes.data();
    for (std::size_t i = 0; i < bytes.size(); ++i) p[i] = 0;
}

}  // namespace macanon
