#include "macanon/collision.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "macanon/errors.hpp"

namespace macanon {

namespace {

double rate_from_inverse(std::uint64_t m, double inv_n) {
    if (m == 0) throw DomainError("collision_rate: m must be >= 1");
    if (m == 1) return 0.0;
    if (inv_n >= 1.0) return 1.0;  // single bucket: collision is certain
    // (1 - 1/n)^(m-1) through logs; both factors keep full precision where
    // the direct form would round 1 - 1/n to 1.
    const double log_keep = static_cast<double>(m - 1) * std::log1p(-inv_n);
    const double p = -std::expm1(log_keep);
    // For n >= 2 the exact value is strictly below one; keep it that way
    // when the surviving tail rounds off the mantissa.
    return p < 1.0 ? p : std::nextafter(1.0, 0.0);
}

void check_probability(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw DomainError("probability must lie strictly between 0 and 1");
}

}  // namespace

double collision_rate(std::uint64_t m, std::uint64_t n) {
    if (n == 0) throw DomainError("collision_rate: n must be >= 1");
    return rate_from_inverse(m, 1.0 / static_cast<double>(n));
}

double collision_rate_pow2(std::uint64_t m, int bits) {
    if (bits < 0) throw DomainError("collision_rate_pow2: bits must be >= 0");
    return rate_from_inverse(m, std::ldexp(1.0, -bits));
}

CollisionPrediction expected_collisions(std::uint64_t m, std::uint64_t n) {
    const double p = collision_rate(m, n);
    return CollisionPrediction{m, static_cast<double>(n), p, p * static_cast<double>(m)};
}

PlanResult min_bits_for_rate(std::uint64_t m, double max_rate) {
    if (m < 2) throw DomainError("min_bits_for_rate: m must be >= 2");
    check_probability(max_rate);
    for (int bits = 1; bits <= 64; ++bits) {
        const double p = collision_rate_pow2(m, bits);
        if (p <= max_rate)
            return PlanResult{bits, std::ldexp(1.0, bits), p, PlanSemantics::kOverallRate};
    }
    throw DomainError("min_bits_for_rate: no width up to 64 bits satisfies the rate");
}

double birthday_messages(double n, double p) {
    if (!(n >= 1.0)) throw DomainError("birthday_messages: n must be >= 1");
    check_probability(p);
    // ln(1/(1-p)) == -log1p(-p)
    return std::sqrt(-2.0 * n * std::log1p(-p));
}

double birthday_buckets(double m, double p) {
    if (!(m >= 1.0)) throw DomainError("birthday_buckets: m must be >= 1");
    check_probability(p);
    return m * m / (-2.0 * std::log1p(-p));
}

int ceil_log2(double x) {
    if (!(x > 0.0)) throw DomainError("ceil_log2: argument must be positive");
    int b = static_cast<int>(std::ceil(std::log2(x)));
    // log2 can land a hair off either side of an integer; snap exactly.
    while (std::ldexp(1.0, b - 1) >= x) --b;
    while (std::ldexp(1.0, b) < x) ++b;
    return b;
}

PlanResult approx_bits_at_least_one(std::uint64_t m, double p) {
    const double n = birthday_buckets(static_cast<double>(m), p);
    const int bits = ceil_log2(n);
    return PlanResult{bits, std::ldexp(1.0, bits), p, PlanSemantics::kAtLeastOne};
}

int allocated_space_bits(double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw DomainError("allocated_space_bits: fraction must lie in (0, 1]");
    return ceil_log2(std::ldexp(1.0, 24) * (std::ldexp(1.0, 24) * fraction));
}

int coverage_bits(std::uint64_t num_prefixes) {
    if (num_prefixes == 0) throw DomainError("coverage_bits: need at least one prefix");
    if (num_prefixes > (std::uint64_t{1} << 24))
        throw DomainError("coverage_bits: more prefixes than exist");
    return ceil_log2(std::ldexp(1.0, 24) * static_cast<double>(num_prefixes));
}

BitsTable generate_table(int which) {
    BitsTable table;
    table.which = which;
    table.m_values = {100, 1000, 10000, 100000, 1000000};
    if (which == 1) {
        table.p_values = {0.05, 0.25, 0.5, 0.75};
    } else if (which == 2) {
        table.p_values = {0.01, 0.05, 0.5, 0.75};
    } else {
        throw DomainError("generate_table: table must be 1 or 2");
    }
    for (const auto m : table.m_values) {
        std::vector<int> row;
        row.reserve(table.p_values.size());
        for (const auto p : table.p_values) {
            const auto plan =
                which == 1 ? approx_bits_at_least_one(m, p) : min_bits_for_rate(m, p);
            row.push_back(plan.bits);
        }
        table.bits.push_back(std::move(row));
    }
    return table;
}

std::string render_table_text(const BitsTable& table) {
    std::ostringstream out;
    char buf[64];
    out << (table.which == 1 ? "bits for P(at least one collision) <= p\n"
                             : "bits for collision rate <= p\n");
    out << "        m";
    for (const auto p : table.p_values) {
        std::snprintf(buf, sizeof buf, "  p<=%-5.4g", p);
        out << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < table.m_values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%9llu",
                      static_cast<unsigned long long>(table.m_values[i]));
        out << buf;
        for (const auto bits : table.bits[i]) {
            std::snprintf(buf, sizeof buf, "  %7d", bits);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string render_table_csv(const BitsTable& table) {
    std::ostringstream out;
    out << "m,p,bits\n";
    for (std::size_t i = 0; i < table.m_values.size(); ++i)
        for (std::size_t j = 0; j < table.p_values.size(); ++j)
            out << table.m_values[i] << ',' << table.p_values[j] << ',' << table.bits[i][j]
                << '\n';
    return out.str();
}

}  // namespace macanon
