#include <doctest.h>

#include <cmath>

#include "macanon/collision.hpp"
#include "macanon/errors.hpp"

using namespace macanon;

namespace {
constexpr std::uint64_t kPow2(int b) { return std::uint64_t{1} << b; }
}

TEST_CASE("collision_rate spot values") {
    // Frozen from a 40-digit evaluation of 1 - (1 - 1/n)^(m-1).
    CHECK(std::abs(collision_rate(10000, kPow2(20)) - 0.009490472526) < 1e-9);
    CHECK(std::abs(collision_rate(1000, kPow2(17)) - 0.007592821992) < 1e-9);
    CHECK(std::abs(collision_rate(100, kPow2(14)) - 0.006024444697) < 1e-9);
    CHECK(collision_rate(2, 2) == doctest::Approx(0.5));
    CHECK(collision_rate(1, kPow2(20)) == 0.0);
    CHECK(collision_rate(5, 1) == 1.0);
}

TEST_CASE("collision_rate domain errors") {
    CHECK_THROWS_AS(collision_rate(0, 100), DomainError);
    CHECK_THROWS_AS(collision_rate(100, 0), DomainError);
    CHECK_THROWS_AS(collision_rate_pow2(100, -1), DomainError);
}

TEST_CASE("collision_rate agrees between integer and power-of-two forms") {
    for (int bits = 1; bits <= 48; bits += 7)
        CHECK(collision_rate(12345, kPow2(bits)) ==
              doctest::Approx(collision_rate_pow2(12345, bits)).epsilon(1e-14));
}

TEST_CASE("expected_collisions") {
    const auto pred = expected_collisions(10000, kPow2(20));
    CHECK(pred.messages == 10000);
    CHECK(pred.buckets == doctest::Approx(1048576.0));
    CHECK(pred.expected_colliding == doctest::Approx(94.9047252608).epsilon(1e-9));
    CHECK(expected_collisions(1, kPow2(30)).expected_colliding == 0.0);
}

TEST_CASE("24-bit digest holds 168,617 addresses below a 1% rate") {
    // Brute-force scan for the smallest m whose rate exceeds 0.01.
    const std::uint64_t n = kPow2(24);
    std::uint64_t first_above = 0;
    for (std::uint64_t m = 168000; m <= 169000; ++m) {
        if (collision_rate(m, n) > 0.01) {
            first_above = m;
            break;
        }
    }
    CHECK(first_above == 168618);
    CHECK(collision_rate(168617, n) <= 0.01);
    CHECK(collision_rate(168618, n) > 0.01);
}

TEST_CASE("min_bits_for_rate known widths") {
    CHECK(min_bits_for_rate(10000, 0.01).bits == 20);
    CHECK(min_bits_for_rate(1000, 0.01).bits == 17);
    CHECK(min_bits_for_rate(100, 0.01).bits == 14);
    CHECK(min_bits_for_rate(100000, 0.5).bits == 18);
    CHECK(min_bits_for_rate(2, 0.5).bits == 1);

    const auto plan = min_bits_for_rate(10000, 0.01);
    CHECK(plan.buckets == doctest::Approx(1048576.0));
    CHECK(plan.predicted_rate <= 0.01);
    CHECK(plan.semantics == PlanSemantics::kOverallRate);

    CHECK_THROWS_AS(min_bits_for_rate(1, 0.01), DomainError);
    CHECK_THROWS_AS(min_bits_for_rate(100, 0.0), DomainError);
    CHECK_THROWS_AS(min_bits_for_rate(100, 1.0), DomainError);
}

TEST_CASE("planner minimality") {
    for (const std::uint64_t m : {100ULL, 1000ULL, 10000ULL, 250000ULL}) {
        for (const double p : {0.01, 0.05, 0.5, 0.75}) {
            const int b = min_bits_for_rate(m, p).bits;
            CHECK(collision_rate_pow2(m, b) <= p);
            if (b > 1) CHECK(collision_rate_pow2(m, b - 1) > p);
        }
    }
}

TEST_CASE("rate is monotone in m and n") {
    for (int bits = 10; bits <= 40; bits += 6) {
        double prev = -1.0;
        for (std::uint64_t m = 1; m < 2000000; m = m * 3 + 1) {
            const double p = collision_rate_pow2(m, bits);
            CHECK(p >= prev);
            CHECK(p >= 0.0);
            CHECK(p < 1.0);
            prev = p;
        }
    }
    for (const std::uint64_t m : {100ULL, 10000ULL, 1000000ULL}) {
        double prev = 2.0;
        for (int bits = 1; bits <= 48; ++bits) {
            const double p = collision_rate_pow2(m, bits);
            CHECK(p <= prev);
            prev = p;
        }
    }
}

TEST_CASE("numerical stability at n = 2^48") {
    const double p = collision_rate_pow2(1000000, 48);
    CHECK(p > 0.0);
    CHECK(std::isfinite(p));
    // Exact value, frozen from extended-precision evaluation.
    CHECK(std::abs(p - 3.5527101197759538e-9) / 3.5527101197759538e-9 < 1e-12);
    // First-order series (m-1)/n; the true value sits below it by the
    // second-order term C(m-1,2)/n^2, about 1.8e-9 in relative terms.
    const double series = 999999.0 / std::ldexp(1.0, 48);
    CHECK(std::abs(p - series) / series < 2e-9);
}

TEST_CASE("birthday approximations") {
    CHECK(birthday_messages(std::ldexp(1.0, 30), 0.05) ==
          doctest::Approx(10495.308997324226).epsilon(1e-12));
    CHECK(birthday_messages(std::ldexp(1.0, 30), 0.5) ==
          doctest::Approx(38581.371617787074).epsilon(1e-12));
    CHECK(birthday_buckets(1000, 0.05) == doctest::Approx(9747862.873111855).epsilon(1e-12));
    CHECK(birthday_buckets(100, 0.5) == doctest::Approx(7213.475204444817).epsilon(1e-12));

    // p -> 0+ drives the message count to zero.
    CHECK(birthday_messages(std::ldexp(1.0, 30), 1e-15) < 1.0);

    CHECK_THROWS_AS(birthday_messages(1024.0, 0.0), DomainError);
    CHECK_THROWS_AS(birthday_messages(1024.0, 1.0), DomainError);
    CHECK_THROWS_AS(birthday_buckets(100.0, -0.1), DomainError);
}

TEST_CASE("birthday relations invert within 0.1%") {
    for (const double p : {0.05, 0.25, 0.5, 0.75})
        for (std::uint64_t m = 100; m <= 1000000; m *= 10) {
            const double back = birthday_messages(birthday_buckets(m, p), p);
            CHECK(std::abs(back - static_cast<double>(m)) / static_cast<double>(m) < 1e-3);
        }
}

TEST_CASE("approx_bits_at_least_one") {
    CHECK(approx_bits_at_least_one(10000, 0.75).bits == 26);
    CHECK(approx_bits_at_least_one(100, 0.25).bits == 15);
    CHECK(approx_bits_at_least_one(1000, 0.5).bits == 20);
    CHECK(approx_bits_at_least_one(1000, 0.05).bits == 24);
    CHECK(approx_bits_at_least_one(1000, 0.05).semantics == PlanSemantics::kAtLeastOne);
}

TEST_CASE("search-space arithmetic") {
    CHECK(allocated_space_bits(0.001) == 39);
    CHECK(allocated_space_bits(1.0) == 48);
    CHECK(allocated_space_bits(std::ldexp(1.0, -24)) == 24);
    CHECK_THROWS_AS(allocated_space_bits(0.0), DomainError);
    CHECK_THROWS_AS(allocated_space_bits(-0.5), DomainError);

    CHECK(coverage_bits(87) == 31);
    CHECK(coverage_bits(361) == 33);
    CHECK(coverage_bits(709) == 34);
    CHECK(coverage_bits(1) == 24);
    CHECK_THROWS_AS(coverage_bits(0), DomainError);
}

TEST_CASE("ceil_log2 snaps powers of two") {
    CHECK(ceil_log2(1.0) == 0);
    CHECK(ceil_log2(2.0) == 1);
    CHECK(ceil_log2(1024.0) == 10);
    CHECK(ceil_log2(1025.0) == 11);
    CHECK(ceil_log2(1023.9) == 10);
    CHECK(ceil_log2(std::ldexp(1.0, 40)) == 40);
    CHECK_THROWS_AS(ceil_log2(0.0), DomainError);
}

TEST_CASE("planning table grids") {
    const auto table1 = generate_table(1);
    const int expected1[5][4] = {
        {17, 15, 13, 12}, {24, 21, 20, 19}, {30, 28, 27, 26}, {37, 35, 33, 32}, {44, 41, 40, 39},
    };
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) CHECK(table1.bits[i][j] == expected1[i][j]);

    // Exact-scan grid; every cell is pinned by the minimality property above.
    const auto table2 = generate_table(2);
    const int expected2[5][4] = {
        {14, 11, 8, 7}, {17, 15, 11, 10}, {20, 18, 14, 13}, {24, 21, 18, 17}, {27, 25, 21, 20},
    };
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) CHECK(table2.bits[i][j] == expected2[i][j]);

    CHECK_THROWS_AS(generate_table(3), DomainError);

    const auto csv = render_table_csv(table1);
    CHECK(csv.find("m,p,bits") == 0);
    CHECK(csv.find("1000000,0.75,39") != std::string::npos);
    const auto text = render_table_text(table2);
    CHECK(text.find("1000000") != std::string::npos);
}
