#include <catch2/catch_amalgamated.hpp>

#include "fdq/section.hpp"
#include "fdq/serialize.hpp"
#include "test_util.hpp"

using namespace fdq;
using testutil::Rng;

namespace {
const Caps kCaps{6, 4, 16};
}

TEST_CASE("odd generator squares vanish and anticommute") {
    Section dz1 = gen_odd(1, kCaps, OddBlock::dz, 0);
    CHECK(mul(dz1, dz1).is_zero());

    Section dy1 = gen_odd(1, kCaps, OddBlock::dy, 0);
    Section dyb1 = gen_odd(1, kCaps, OddBlock::dyb, 0);
    CHECK(mul(dy1, dyb1) == -mul(dyb1, dy1));
}

TEST_CASE("even generators commute with canonical coefficients") {
    Section y1 = gen_even(2, kCaps, EvenBlock::y, 0);
    Section y2 = gen_even(2, kCaps, EvenBlock::y, 1);
    Section y1y2 = mul(y1, y2);
    CHECK(mul(y1, y1y2) == mul(y1y2, y1));
    Monomial m;
    m.y[0] = 2;
    m.y[1] = 1;
    CHECK(mul(y1, y1y2).coeff(m) == GRat::one());
}

TEST_CASE("product signs match the transposition-sort oracle") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        std::uint32_t wa = 0, wb = 0;
        for (int p = 0; p < 16; ++p) {
            if ((p & 3) >= 2) continue; // keep n<=2 shape
            if (rng.uniform(0, 3) == 0) wa |= 1u << p;
            if (rng.uniform(0, 3) == 0) wb |= 1u << p;
        }
        CHECK(odd_product_sign(wa, wb) == testutil::naive_odd_sign(wa, wb));
    }
}

TEST_CASE("multiplication is graded-commutative and associative") {
    Rng rng(5);
    for (int trial = 0; trial < 12; ++trial) {
        Section a = rng.section(2, kCaps, 6);
        Section b = rng.section(2, kCaps, 6);
        Section c = rng.section(2, kCaps, 6);
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        auto [a0, a1] = detail::parity_split(a);
        auto [b0, b1] = detail::parity_split(b);
        Section ba = mul(b0, a0) + mul(b0, a1) + mul(b1, a0) - mul(b1, a1);
        CHECK(mul(a, b) == ba);
    }
}

TEST_CASE("conjugation is an involutive ring map") {
    Rng rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        Section a = rng.section(2, kCaps, 6);
        Section b = rng.section(2, kCaps, 6);
        CHECK(a.conjugate().conjugate() == a);
        CHECK(mul(a, b).conjugate() == mul(a.conjugate(), b.conjugate()));
    }
}

TEST_CASE("caps are enforced and truncation is closed") {
    CHECK(gen_hbar(1, kCaps, 4).is_zero()); // weight 8 > cap
    Section h3 = gen_hbar(1, kCaps, 3);     // weight 6: boundary is inclusive
    Monomial m;
    m.hbar = 3;
    CHECK(h3.coeff(m) == GRat::one());

    Section y = gen_even(1, kCaps, EvenBlock::y, 0);
    Section p = y;
    for (int k = 0; k < 8; ++k) p = mul(p, y);
    CHECK(p.is_zero()); // y^9 exceeds weight 6
}

TEST_CASE("section serialization round-trips bit-exactly") {
    Rng rng(9);
    for (int trial = 0; trial < 8; ++trial) {
        Section a = rng.section(2, kCaps, 10);
        Json j = to_json(a);
        Section back = section_from_json(j);
        CHECK(back == a);
        CHECK(to_json(back).dump() == j.dump());
    }
}

TEST_CASE("dimension and cap mismatches are rejected") {
    Section a(1, kCaps), b(2, kCaps), c(1, Caps{4, 4, 16});
    CHECK_THROWS_AS(mul(a, b), contract_violation);
    CHECK_THROWS_AS(mul(a, c), contract_violation);
}
