#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macanon/argon2.hpp"
#include "macanon/mac.hpp"

namespace macanon {

// Work-factor configuration for the keyed memory-hard hash. The defaults are
// deployment-grade; tests and simulations lower them explicitly.
struct KdfParams {
    std::string algorithm = "argon2d";
    std::uint32_t memory_cost_kib = 64 * 1024;
    std::uint32_t time_cost = 3;
    std::uint32_t parallelism = 1;
    std::uint32_t output_length = 32;  // bytes

    void validate() const;
    Argon2Params to_argon2() const;

    static KdfParams low_cost() {
        return KdfParams{"argon2d", 8, 1, 1, 32};
    }
};

// The static secret mixed into every hash. Unlike a password-style salt it
// is never stored beside the data; disclosure would allow brute-force
// re-identification, so it is rotated on a schedule.
struct Salt {
    std::vector<std::uint8_t> secret;
    std::int64_t created_at_unix = 0;
    std::optional<std::chrono::seconds> rotation_period;
};

constexpr std::size_t kSaltMinBytes = 16;       // production floor
constexpr std::size_t kSaltMinBytesShort = 8;   // with the explicit override

struct AnonymizationPolicy {
    KdfParams kdf;
    Salt salt;
    int digest_bits = 24;
    std::vector<std::uint8_t> extra_entropy;  // deployment identifier, appended to the secret
    bool allow_short_salt = false;            // permits >= 8-byte experimental salts

    void validate() const;
};

// The anonymous identifier: the top `bits` bits of the KDF digest.
struct BucketDigest {
    std::uint64_t value = 0;
    int bits = 0;

    std::string hex() const;      // lowercase, zero-padded to ceil(bits/4) digits
    std::string decimal() const;

    auto operator<=>(const BucketDigest&) const = default;
};

// Most significant `bits` bits of a big-endian digest. 1 <= bits <= 64 and
// bits <= 8 * digest.size().
std::uint64_t truncate_digest(std::span<const std::uint8_t> digest, int bits);

// Streaming hasher: validates the policy once, reuses the KDF arena across
// records. One instance per thread; instances share nothing mutable.
class BucketHasher {
public:
    explicit BucketHasher(AnonymizationPolicy policy);

    BucketDigest operator()(MacAddress mac);

    const AnonymizationPolicy& policy() const { return policy_; }

private:
    AnonymizationPolicy policy_;
    Argon2Params argon2_;
    std::vector<std::uint8_t> salt_input_;  // secret || extra_entropy
    std::vector<std::uint8_t> digest_;
    Argon2Workspace workspace_;
};

// One-shot form of BucketHasher.
BucketDigest anonymize(MacAddress mac, const AnonymizationPolicy& policy);

using EntropySource = std::function<void(std::span<std::uint8_t>)>;

// OS-backed entropy; throws ResourceError if the underlying device fails.
EntropySource system_entropy();

// New policy with a fresh secret of the same length and a new creation time;
// KDF parameters, digest width and extra entropy carry over unchanged.
AnonymizationPolicy rotate_salt(const AnonymizationPolicy& policy,
                                const EntropySource& entropy);

// Salt loading. Hex input must decode to bytes; validation of the length
// happens when the policy is validated.
Salt salt_from_hex(std::string_view hex);

enum class SaltFileFormat { kAuto, kRaw, kHex };
Salt salt_from_file(const std::string& path, SaltFileFormat format = SaltFileFormat::kAuto);

inline constexpr const char* kSaltEnvVar = "MACANON_SALT";
Salt salt_from_env();

// Peak KDF memory is concurrency * memory_cost; callers running hashes in
// parallel size their worker pool with this.
std::size_t max_concurrent_kdf(std::uint64_t memory_budget_bytes, const KdfParams& kdf);

// Overwrites the span through a volatile pointer so the compiler cannot
// elide the clear.
void secure_wipe(std::span<std::uint8_t> bytes);

}  // namespace macanon
