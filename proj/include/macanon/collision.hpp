#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace macanon {

// Probability p that a given message shares its bucket with at least one of
// the other m-1 messages, given n equally likely buckets:
//
//     p = 1 - (1 - 1/n)^(m-1)
//
// and the implied expected number of colliding messages C = p * m.
struct CollisionPrediction {
    std::uint64_t messages = 0;       // m
    double buckets = 0.0;             // n
    double rate = 0.0;                // p
    double expected_colliding = 0.0;  // C = p * m
};

enum class PlanSemantics {
    kOverallRate,  // p bounds the fraction of messages that collide
    kAtLeastOne,   // p bounds the probability of any collision at all
};

struct PlanResult {
    int bits = 0;                // digest width b
    double buckets = 0.0;        // 2^b
    double predicted_rate = 0.0;
    PlanSemantics semantics = PlanSemantics::kOverallRate;
};

// p = 1 - (1 - 1/n)^(m-1), evaluated as -expm1((m-1) * log1p(-1/n)) so the
// result stays accurate when 1/n is far below the double mantissa step
// (n up to 2^48 and beyond). Throws DomainError for m == 0 or n == 0.
double collision_rate(std::uint64_t m, std::uint64_t n);

// Same, with n = 2^bits; avoids forming n as an integer so widths up to 64
// (and past the uint64 range) are exact.
double collision_rate_pow2(std::uint64_t m, int bits);

CollisionPrediction expected_collisions(std::uint64_t m, std::uint64_t n);

// Smallest b >= 1 with collision_rate(m, 2^b) <= max_rate, found by scanning
// b upward. Requires m >= 2 and 0 < max_rate < 1.
PlanResult min_bits_for_rate(std::uint64_t m, double max_rate);

// Birthday-bound approximations:
//   messages for at least one collision:  m ~ sqrt(2n ln(1/(1-p)))
//   buckets for a given message count:    n ~ (m^2/2) / ln(1/(1-p))
double birthday_messages(double n, double p);
double birthday_buckets(double m, double p);

// bits = ceil(log2(birthday_buckets(m, p))), at-least-one semantics.
PlanResult approx_bits_at_least_one(std::uint64_t m, double p);

// Width of the search space when only `fraction` of the 2^24 OUI prefixes
// is allocated: ceil(log2(2^24 * (2^24 * fraction))).
int allocated_space_bits(double fraction);

// Width of the space covered by `num_prefixes` full OUI blocks:
// ceil(log2(2^24 * num_prefixes)).
int coverage_bits(std::uint64_t num_prefixes);

// ceil(log2(x)) for positive x, exact at powers of two.
int ceil_log2(double x);

// Digest-width planning grids over m in {10^2..10^6}:
//   table 1: approx_bits_at_least_one for p in {0.05, 0.25, 0.5, 0.75}
//   table 2: min_bits_for_rate       for p in {0.01, 0.05, 0.5, 0.75}
struct BitsTable {
    int which = 1;
    std::vector<std::uint64_t> m_values;
    std::vector<double> p_values;
    std::vector<std::vector<int>> bits;  // [m index][p index]
};

BitsTable generate_table(int which);

std::string render_table_text(const BitsTable& table);
std::string render_table_csv(const BitsTable& table);

}  // namespace macanon
