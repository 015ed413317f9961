#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macanon/anonymize.hpp"
#include "macanon/mac.hpp"
#include "macanon/rng.hpp"

namespace macanon {

enum class HashMode {
    kKdf,   // the real memory-hard pipeline, fresh 68-bit salt per round
    kFast,  // keyed 64-bit mixer; same bucket statistics, desk-scale cost
};

struct TrialConfig {
    std::uint64_t m = 1000;
    int digest_bits = 17;
    std::uint32_t rounds = 100;
    std::uint64_t base_seed = 0;
    HashMode hash_mode = HashMode::kFast;
    MacRange mac_range = MacRange::experiment_default();
    KdfParams kdf = KdfParams::low_cost();
    unsigned threads = 0;  // 0 = hardware concurrency
    std::uint64_t kdf_memory_budget_bytes = std::uint64_t{1} << 30;

    void validate() const;
};

struct TrialResult {
    std::uint64_t colliding = 0;   // addresses sharing a bucket with >= 1 other
    std::uint64_t duplicates = 0;  // m - distinct buckets occupied
};

struct ExperimentReport {
    TrialConfig config;
    std::vector<std::uint64_t> per_round_colliding;
    std::vector<std::uint64_t> per_round_duplicates;
    double median_rate = 0.0;            // median(colliding)/m
    double mean_rate = 0.0;              // mean(colliding)/m
    double duplicate_median_rate = 0.0;  // median(duplicates)/m
};

// Keyed mixing hash for fast mode. Two finalizer rounds keyed by the trial
// salt; the bucket takes the most significant bits, matching the KDF path's
// truncation.
inline std::uint64_t fast_bucket(MacAddress mac, std::uint64_t key0, std::uint64_t key1,
                                 int bits) {
    std::uint64_t h = mix64(mac.value ^ key0);
    h = mix64(h ^ key1);
    return h >> (64 - bits);
}

// One round: samples m unique addresses, derives a fresh per-round salt from
// the seed, maps every address to a bucket, and counts both collision
// metrics. Deterministic for a fixed seed.
TrialResult run_trial(std::uint64_t m, int digest_bits, std::uint64_t seed, HashMode mode,
                      const KdfParams& kdf, const MacRange& range);

// `rounds` independent trials with per-round seeds base_seed ^ round_index
// (decorrelated through SplitMix64 inside the trial). The per-round list is
// ordered by round index, so the report is identical for any worker count.
ExperimentReport run_experiment(const TrialConfig& config);

struct Table3 {
    std::vector<int> bit_sizes;              // 13..21
    std::vector<std::uint64_t> m_values;     // 100, 1k, 10k [, 100k]
    std::vector<std::vector<ExperimentReport>> cells;  // [bits index][m index]
};

Table3 generate_table3(std::uint32_t rounds, HashMode mode, bool include_100k,
                       std::uint64_t base_seed, unsigned threads = 0,
                       const KdfParams& kdf = KdfParams::low_cost());

std::string render_report_text(const ExperimentReport& report);
std::string render_report_csv(const ExperimentReport& report);
std::string render_report_jsonl(const ExperimentReport& report, bool per_round);

std::string render_table3_text(const Table3& table);
std::string render_table3_csv(const Table3& table);
std::string render_table3_jsonl(const Table3& table, bool per_round);

}  // namespace macanon
