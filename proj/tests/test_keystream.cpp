#include <catch2/catch_amalgamated.hpp>

#include <cacrypt/keystream.hpp>

#include "oracle.hpp"

#include <random>

using namespace cacrypt;

TEST_CASE("serialize_generation scan order") {
    Grid g(2, 2);
    g.set(0, 0, true);
    g.set(1, 1, true);
    CHECK(serialize_generation(g) == std::vector<std::uint8_t>{1, 0, 0, 1});

    CHECK(serialize_generation(Grid(3, 3)) == std::vector<std::uint8_t>(9, 0));

    Grid full(4, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) full.set(i, j, true);
    CHECK(serialize_generation(full) == std::vector<std::uint8_t>(8, 1));
}

TEST_CASE("serialize_generation golden: rows scan fastest") {
    // 2x3 grid rows [110, 001]: down column 0, then 1, then 2
    Grid g(2, 3);
    g.set(0, 0, true);
    g.set(0, 1, true);
    g.set(1, 2, true);
    CHECK(serialize_generation(g) == std::vector<std::uint8_t>{1, 0, 1, 0, 0, 1});
}

TEST_CASE("pack_byte is LSB-first") {
    const std::array<std::uint8_t, 8> one{1, 0, 0, 0, 0, 0, 0, 0};
    CHECK(pack_byte(one) == 0x01);
    const std::array<std::uint8_t, 8> high{0, 0, 0, 0, 0, 0, 0, 1};
    CHECK(pack_byte(high) == 0x80);
    const std::array<std::uint8_t, 8> zero{};
    CHECK(pack_byte(zero) == 0x00);
}

TEST_CASE("compose_block XORs a run of bytes") {
    const std::uint8_t one[] = {0xAB};
    CHECK(compose_block(one) == 0xAB);
    const std::uint8_t two[] = {0x0F, 0xF0};
    CHECK(compose_block(two) == 0xFF);
    const std::uint8_t same[] = {0x5A, 0x5A};
    CHECK(compose_block(same) == 0x00);
    CHECK_THROWS_AS(compose_block({}), std::invalid_argument);
}

TEST_CASE("generator validates its configuration") {
    CHECK_THROWS_AS(KeystreamGenerator(Grid(3, 3), parse_rule("B3/S23"), 1),
                    std::invalid_argument); // 9 cells, not byte aligned
    CHECK_THROWS_AS(KeystreamGenerator(Grid(4, 4), parse_rule("B3/S23"), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(KeystreamGenerator(Grid(4, 4), parse_rule("B0/S23"), 1),
                    std::invalid_argument);
}

TEST_CASE("next_bytes basics") {
    const Rule fredkin = parse_rule("B1357/S02468");
    SeedConfig cfg;
    cfg.password = {9, 9, 9};

    KeystreamGenerator gen = make_keystream(cfg, 8, 8, fredkin, 3);
    CHECK(gen.next_bytes(0).empty());

    KeystreamGenerator a = make_keystream(cfg, 8, 8, fredkin, 3);
    KeystreamGenerator b = make_keystream(cfg, 8, 8, fredkin, 3);
    CHECK(a.next_bytes(100) == b.next_bytes(100));
}

TEST_CASE("advancing by a then b equals advancing by a+b") {
    const Rule fredkin = parse_rule("B1357/S02468");
    SeedConfig cfg;
    std::mt19937_64 eng(10);
    for (int t = 0; t < 10; ++t) {
        for (auto& byte : cfg.password) byte = std::uint8_t(eng());
        const std::size_t a = eng() % 300, b = eng() % 300;

        KeystreamGenerator whole = make_keystream(cfg, 8, 8, fredkin, 5);
        KeystreamGenerator split = make_keystream(cfg, 8, 8, fredkin, 5);
        auto first = split.next_bytes(a);
        const auto second = split.next_bytes(b);
        first.insert(first.end(), second.begin(), second.end());
        CHECK(whole.next_bytes(a + b) == first);
    }
}

TEST_CASE("keystream golden: 128x128 Fredkin rho=10, zero password") {
    // Frozen from the straight-line reference pipeline.
    static const std::vector<std::uint8_t> expected = {0x01, 0xd3, 0xa4, 0xbe, 0x42, 0xa9,
                                                       0x06, 0x0a, 0x2d, 0xeb, 0xad, 0xf9,
                                                       0xdf, 0x19, 0x63, 0x8c};
    KeystreamGenerator gen = make_keystream(SeedConfig{}, 128, 128, parse_rule("B1357/S02468"), 10);
    CHECK(gen.next_bytes(16) == expected);
}

TEST_CASE("keystream golden: small grids") {
    static const std::vector<std::uint8_t> fredkin_4x4 = {0x21, 0x6f, 0x35, 0xd1,
                                                          0x21, 0x6f, 0x35, 0xd1};
    KeystreamGenerator a = make_keystream(SeedConfig{}, 4, 4, parse_rule("B1357/S02468"), 1);
    CHECK(a.next_bytes(8) == fredkin_4x4);

    static const std::vector<std::uint8_t> life_2x8 = {0xf0, 0xa7, 0x7a, 0xac, 0x01, 0x70};
    KeystreamGenerator b = make_keystream(SeedConfig{}, 2, 8, parse_rule("B3/S23"), 3);
    CHECK(b.next_bytes(6) == life_2x8);
}

TEST_CASE("generator matches the straight-line oracle") {
    std::mt19937_64 eng(11);
    for (int t = 0; t < 12; ++t) {
        const Rule rule = oracle::random_rule_no_b0(eng);
        const int m = 4, n = 2 * (1 + int(eng() % 4));
        const Grid seed = random_grid(m, n, 0.5, eng);
        const std::uint32_t rho = 1 + std::uint32_t(eng() % 7);

        KeystreamGenerator gen(seed, rule, rho);
        const auto got = gen.next_bytes(64);
        const auto want = oracle::naive_keystream(seed, rule, rho, 64);
        INFO("rule " << format_rule(rule) << " " << m << "x" << n << " rho " << rho);
        CHECK(got == want);
    }
}

TEST_CASE("raw Fredkin stream is bit-balanced") {
    // rho = 1 passes raw bytes through; 1 MiB from a 128x128 grid
    SeedConfig cfg;
    cfg.password = {0x42};
    KeystreamGenerator gen = make_keystream(cfg, 128, 128, parse_rule("B1357/S02468"), 1);
    const auto bytes = gen.next_bytes(std::size_t(1) << 20);
    std::uint64_t ones = 0;
    for (std::uint8_t b : bytes) ones += std::uint64_t(std::popcount(unsigned(b)));
    const double frac = double(ones) / (8.0 * double(bytes.size()));
    CHECK(frac == Catch::Approx(0.5).margin(0.01));
}
