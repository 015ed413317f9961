#include "macanon/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "macanon/errors.hpp"

namespace macanon {

namespace {

double median_over_m(std::vector<std::uint64_t> counts, std::uint64_t m) {
    std::sort(counts.begin(), counts.end());
    const std::size_t n = counts.size();
    const double mid = (n % 2 == 1)
                           ? static_cast<double>(counts[n / 2])
                           : (static_cast<double>(counts[n / 2 - 1]) +
                              static_cast<double>(counts[n / 2])) /
                                 2.0;
    return mid / static_cast<double>(m);
}

// 68 random bits packed into 9 bytes (top nibble of the first byte zero),
// the salt shape used by the reference experiment.
std::vector<std::uint8_t> derive_experiment_salt(SplitMix64& stream) {
    std::vector<std::uint8_t> salt(9);
    const std::uint64_t a = stream.next();
    const std::uint64_t b = stream.next();
    for (int i = 0; i < 8; ++i) salt[static_cast<std::size_t>(i) + 1] =
        static_cast<std::uint8_t>(a >> (8 * (7 - i)));
    salt[0] = static_cast<std::uint8_t>(b & 0x0f);
    return salt;
}

TrialResult count_collisions(std::vector<std::uint64_t>& buckets) {
    std::sort(buckets.begin(), buckets.end());
    TrialResult result;
    std::size_t i = 0;
    std::size_t distinct = 0;
    while (i < buckets.size()) {
        std::size_t j = i + 1;
        while (j < buckets.size() && buckets[j] == buckets[i]) ++j;
        ++distinct;
        if (j - i >= 2) result.colliding += j - i;
        i = j;
    }
    result.duplicates = buckets.size() - distinct;
    return result;
}

}  // namespace

void TrialConfig::validate() const {
    if (m == 0) throw DomainError("simulation requires m >= 1");
    if (m > mac_range.size())
        throw CapacityError("m = " + std::to_string(m) + " exceeds the address range size " +
                            std::to_string(mac_range.size()));
    if (rounds == 0) throw DomainError("simulation requires rounds >= 1");
    if (digest_bits < 1 || digest_bits > 64)
        throw DomainError("digest_bits must lie in [1, 64]");
    if (hash_mode == HashMode::kKdf) kdf.validate();
}

TrialResult run_trial(std::uint64_t m, int digest_bits, std::uint64_t seed, HashMode mode,
                      const KdfParams& kdf, const MacRange& range) {
    if (m > range.size())
        throw CapacityError("m = " + std::to_string(m) + " exceeds the address range size " +
                            std::to_string(range.size()));

    SplitMix64 stream(seed);
    const std::uint64_t sample_seed = stream.next();

    std::vector<std::uint64_t> buckets;
    buckets.reserve(static_cast<std::size_t>(m));

    if (mode == HashMode::kFast) {
        const std::uint64_t key0 = stream.next();
        const std::uint64_t key1 = stream.next();
        const auto macs = sample_unique_macs(m, range, sample_seed);
        for (const auto mac : macs)
            buckets.push_back(fast_bucket(mac, key0, key1, digest_bits));
    } else {
        AnonymizationPolicy policy;
        policy.kdf = kdf;
        policy.salt.secret = derive_experiment_salt(stream);
        policy.digest_bits = digest_bits;
        policy.allow_short_salt = true;
        BucketHasher hasher(std::move(policy));
        const auto macs = sample_unique_macs(m, range, sample_seed);
        for (const auto mac : macs) buckets.push_back(hasher(mac).value);
    }
    return count_collisions(buckets);
}

ExperimentReport run_experiment(const TrialConfig& config) {
    config.validate();

    unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, config.rounds);
    if (config.hash_mode == HashMode::kKdf) {
        const auto bound = max_concurrent_kdf(config.kdf_memory_budget_bytes, config.kdf);
        workers = static_cast<unsigned>(std::min<std::size_t>(workers, bound));
    }

    ExperimentReport report;
    report.config = config;
    report.per_round_colliding.resize(config.rounds);
    report.per_round_duplicates.resize(config.rounds);

    std::atomic<std::uint32_t> next_round{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::uint32_t round = next_round.fetch_add(1);
            if (round >= config.rounds) break;
            try {
                const std::uint64_t trial_seed = config.base_seed ^ round;
                const TrialResult r = run_trial(config.m, config.digest_bits, trial_seed,
                                                config.hash_mode, config.kdf, config.mac_range);
                report.per_round_colliding[round] = r.colliding;
                report.per_round_duplicates[round] = r.duplicates;
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                failed = true;
                if (error.empty()) error = e.what();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failed) throw ResourceError("simulation failed: " + error);

    report.median_rate = median_over_m(report.per_round_colliding, config.m);
    report.duplicate_median_rate = median_over_m(report.per_round_duplicates, config.m);
    const auto total = std::accumulate(report.per_round_colliding.begin(),
                                       report.per_round_colliding.end(), std::uint64_t{0});
    report.mean_rate = static_cast<double>(total) /
                       (static_cast<double>(config.m) * static_cast<double>(config.rounds));
    return report;
}

Table3 generate_table3(std::uint32_t rounds, HashMode mode, bool include_100k,
                       std::uint64_t base_seed, unsigned threads, const KdfParams& kdf) {
    Table3 table;
    for (int bits = 13; bits <= 21; ++bits) table.bit_sizes.push_back(bits);
    table.m_values = {100, 1000, 10000};
    if (include_100k) table.m_values.push_back(100000);

    for (const int bits : table.bit_sizes) {
        std::vector<ExperimentReport> row;
        row.reserve(table.m_values.size());
        for (const auto m : table.m_values) {
            TrialConfig config;
            config.m = m;
            config.digest_bits = bits;
            config.rounds = rounds;
            // Distinct stream per cell, derived so that any sub-grid of the
            // table reproduces the full run's cells.
            config.base_seed = mix64(base_seed ^ mix64(std::uint64_t(bits) << 32 ^ m));
            config.hash_mode = mode;
            config.kdf = kdf;
            config.threads = threads;
            row.push_back(run_experiment(config));
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

std::string render_report_text(const ExperimentReport& report) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "m=%llu bits=%d rounds=%u mode=%s\n"
                  "median collision rate:    %.1f%%\n"
                  "mean collision rate:      %.4f%%\n"
                  "median duplicate rate:    %.1f%%\n",
                  static_cast<unsigned long long>(report.config.m), report.config.digest_bits,
                  report.config.rounds,
                  report.config.hash_mode == HashMode::kFast ? "fast" : "kdf",
                  report.median_rate * 100.0, report.mean_rate * 100.0,
                  report.duplicate_median_rate * 100.0);
    out << buf;
    return out.str();
}

std::string render_report_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "n_bits,m,median_pct,mean_pct,duplicate_median_pct\n";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%llu,%.1f,%.4f,%.1f\n", report.config.digest_bits,
                  static_cast<unsigned long long>(report.config.m), report.median_rate * 100.0,
                  report.mean_rate * 100.0, report.duplicate_median_rate * 100.0);
    out << buf;
    return out.str();
}

namespace {

nlohmann::ordered_json report_to_json(const ExperimentReport& report, bool per_round) {
    nlohmann::ordered_json j;
    j["n_bits"] = report.config.digest_bits;
    j["m"] = report.config.m;
    j["rounds"] = report.config.rounds;
    j["hash_mode"] = report.config.hash_mode == HashMode::kFast ? "fast" : "kdf";
    j["median_pct"] = std::round(report.median_rate * 1000.0) / 10.0;
    j["mean_pct"] = report.mean_rate * 100.0;
    j["duplicate_median_pct"] = std::round(report.duplicate_median_rate * 1000.0) / 10.0;
    if (per_round) {
        j["per_round_colliding"] = report.per_round_colliding;
        j["per_round_duplicates"] = report.per_round_duplicates;
    }
    return j;
}

}  // namespace

std::string render_report_jsonl(const ExperimentReport& report, bool per_round) {
    return report_to_json(report, per_round).dump() + "\n";
}

std::string render_table3_text(const Table3& table) {
    std::ostringstream out;
    char buf[64];
    out << "median % of collisions (" << table.cells[0][0].config.rounds << " rounds)\n";
    out << "      ";
    for (const auto m : table.m_values) {
        std::snprintf(buf, sizeof buf, "  m=%-8llu", static_cast<unsigned long long>(m));
        out << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < table.bit_sizes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "n=2^%-2d", table.bit_sizes[i]);
        out << buf;
        for (std::size_t k = 0; k < table.m_values.size(); ++k) {
            std::snprintf(buf, sizeof buf, "  %8.1f%%", table.cells[i][k].median_rate * 100.0);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string render_table3_csv(const Table3& table) {
    std::ostringstream out;
    out << "n_bits,m,median_pct,mean_pct,duplicate_median_pct\n";
    char buf[96];
    for (const auto& row : table.cells)
        for (const auto& report : row) {
            std::snprintf(buf, sizeof buf, "%d,%llu,%.1f,%.4f,%.1f\n",
                          report.config.digest_bits,
                          static_cast<unsigned long long>(report.config.m),
                          report.median_rate * 100.0, report.mean_rate * 100.0,
                          report.duplicate_median_rate * 100.0);
            out << buf;
        }
    return out.str();
}

std::string render_table3_jsonl(const Table3& table, bool per_round) {
    std::string out;
    for (const auto& row : table.cells)
        for (const auto& report : row) out += render_report_jsonl(report, per_round);
    return out;
}

}  // namespace macanon
