#include <doctest.h>

#include <string>
#include <vector>

#include "macanon/argon2.hpp"
#include "macanon/errors.hpp"
#include "macanon/hex.hpp"

using namespace macanon;

namespace {

struct Vector {
    const char* name;
    Argon2Variant variant;
    std::uint32_t parallelism, time_cost, memory_kib;
    std::size_t out_len;
    const char* salt_hex;
    const char* password_hex;
    const char* want_hex;
};

// Frozen against two independent implementations that agree byte-for-byte
// with each other (one C, one WebAssembly build of the reference code).
const Vector kVectors[] = {
    {"d p1 t1 m8 out32", Argon2Variant::kD, 1, 1, 8, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "dbb6ab8e6e22b9d6589733b9e5aa6ebb6cbf23bfda25b20fef9eee26f9b72490"},
    {"d p1 t3 m32 out32", Argon2Variant::kD, 1, 3, 32, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "1e4ac0d7dd124110b113b4102f8829160e0eb1f3661581c1cb38aa81876948f7"},
    {"d p2 t2 m64 out32", Argon2Variant::kD, 2, 2, 64, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "294f6bd53e2fc0ea7081048e168e055a77ca8df4dbe0f8e0ac951a55d22f83c3"},
    {"d p4 t3 m32 out32", Argon2Variant::kD, 4, 3, 32, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "88ed3a3d5b10c740b4beb87f633244d457387f4b416972f713b6e2b19afefa9a"},
    {"d p1 t1 m8 out8", Argon2Variant::kD, 1, 1, 8, 8,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff", "d195e68f53d4e2b0"},
    {"d p1 t1 m8 out64", Argon2Variant::kD, 1, 1, 8, 64,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "e782c04f68e819a6d25920d07a351bc0d09a1bc175e3f20631ee9f7842efce38"
     "feb961f3fe14027bf0e56d12ddde2b1e89fe2a38922e6e27c32227a18a6b3a7a"},
    {"d p1 t2 m16 salt8", Argon2Variant::kD, 1, 2, 16, 32, "0102030405060708", "00163e7fffff",
     "1d0bddbb999775c5c1548d407940727275d5c276c841d294b9427ec8dd18f273"},
    {"d p1 t1 m8 salt9", Argon2Variant::kD, 1, 1, 8, 32, "0adeadbeef01234567", "00163e7fffff",
     "3840c6122047551aa764056e0eb881f0f506652b458e70cd883c0e75aff53d76"},
    {"d p3 t1 m24 out24", Argon2Variant::kD, 3, 1, 24, 24,
     "0102030405060708090a0b0c0d0e0f10", "00163e000001",
     "92a0009a126e9a4c855829f434c2958b76c307a73f9d0a46"},
    {"d p1 t1 m8 salt21", Argon2Variant::kD, 1, 1, 8, 32,
     "0102030405060708090a0b0c0d0e0f1073656e7331", "00163e000001",
     "ab25bd86ced1ae7ce832d4ceb5bda1936634e208797ac642cad0bcd7118a5949"},
    {"d p1 t1 m1024 out32", Argon2Variant::kD, 1, 1, 1024, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "a79fe2377b3431ec30200b365f13ab414254c7716cf4fdafc315086de67b78e3"},
    {"id p4 t2 m32 out32", Argon2Variant::kId, 4, 2, 32, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "95f4cee10e24d95b281177dab47cebb5dcadc9301efd0043f5bef5b6c980b046"},
    {"id p1 t2 m64 out32", Argon2Variant::kId, 1, 2, 64, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "218e8bec52e566d6c94e8406510ce41c6d54819c6522a52bc9726c6cd8ebd815"},
    {"id p1 t1 m8 out32", Argon2Variant::kId, 1, 1, 8, 32,
     "0102030405060708090a0b0c0d0e0f10", "00163e7fffff",
     "ae0af8e199a22dfffab159cf19e74178095aa0c560f31fdd5de7b74494582ebf"},
};

}  // namespace

TEST_CASE("reference vectors") {
    Argon2Workspace workspace;
    for (const auto& v : kVectors) {
        CAPTURE(v.name);
        const auto salt = from_hex(v.salt_hex);
        const auto password = from_hex(v.password_hex);
        std::vector<std::uint8_t> out(v.out_len);
        argon2_hash(Argon2Params{v.variant, v.time_cost, v.memory_kib, v.parallelism}, password,
                    salt, out, workspace);
        CHECK(to_hex(out) == v.want_hex);
    }
}

TEST_CASE("workspace reuse does not leak state between calls") {
    Argon2Workspace workspace;
    const auto salt = from_hex("0102030405060708090a0b0c0d0e0f10");
    const auto pw = from_hex("00163e7fffff");
    std::vector<std::uint8_t> big(32), small(32), small2(32);
    // Larger arena first, then a smaller configuration inside the same arena.
    argon2_hash(Argon2Params{Argon2Variant::kD, 1, 64, 1}, pw, salt, big, workspace);
    argon2_hash(Argon2Params{Argon2Variant::kD, 1, 8, 1}, pw, salt, small, workspace);
    argon2_hash(Argon2Params{Argon2Variant::kD, 1, 8, 1}, pw, salt, small2);
    CHECK(small == small2);
    CHECK(to_hex(small) == "dbb6ab8e6e22b9d6589733b9e5aa6ebb6cbf23bfda25b20fef9eee26f9b72490");
}

TEST_CASE("salt and parameter sensitivity") {
    const auto pw = from_hex("00163e7fffff");
    const Argon2Params params{Argon2Variant::kD, 1, 8, 1};
    std::vector<std::uint8_t> a(32), b(32);
    argon2_hash(params, pw, from_hex("0102030405060708"), a);
    argon2_hash(params, pw, from_hex("0102030405060709"), b);
    CHECK(a != b);
    argon2_hash(Argon2Params{Argon2Variant::kD, 2, 8, 1}, pw, from_hex("0102030405060708"), b);
    CHECK(a != b);
}

TEST_CASE("parameter validation") {
    const auto salt = from_hex("0102030405060708090a0b0c0d0e0f10");
    const auto pw = from_hex("00");
    std::vector<std::uint8_t> out(32);
    CHECK_THROWS_AS(argon2_hash({Argon2Variant::kD, 0, 8, 1}, pw, salt, out), DomainError);
    CHECK_THROWS_AS(argon2_hash({Argon2Variant::kD, 1, 8, 0}, pw, salt, out), DomainError);
    CHECK_THROWS_AS(argon2_hash({Argon2Variant::kD, 1, 8, 2}, pw, salt, out), DomainError);
    CHECK_THROWS_AS(argon2_hash({Argon2Variant::kD, 1, 8, 1}, pw, from_hex("01020304050607"), out),
                    DomainError);
    std::vector<std::uint8_t> tiny(3);
    CHECK_THROWS_AS(argon2_hash({Argon2Variant::kD, 1, 8, 1}, pw, salt, tiny), DomainError);
}
