#include <catch2/catch_amalgamated.hpp>

#include "fdq/geometry.hpp"
#include "test_util.hpp"

using namespace fdq;
using testutil::Rng;

namespace {

const Caps kCaps{6, 4, 16};

PoissonJets flat_poisson(int n, int jet) {
    PoissonJets g;
    g.n = n;
    g.jet = jet;
    Caps caps{1 << 20, jet, 0};
    g.w.assign(n * n, Section(n, caps));
    for (int i = 0; i < n; ++i) g.w[i * n + i] = Section::scalar(n, caps, GRat::i());
    return g;
}

/// gamma_quad = omega_{i jbar} (dz^i yb^j - dzb^j y^i)
Section quadratic_part(const CurvaturePack& pk, Caps caps) {
    Section r(pk.n, caps);
    for (int i = 0; i < pk.n; ++i)
        for (int j = 0; j < pk.n; ++j) {
            Section w = pk.omega[i * pk.n + j].restricted(caps);
            Section t = mul(w, gen_odd(pk.n, caps, OddBlock::dz, i)).even_mul(EvenBlock::yb, j) -
                        mul(w, gen_odd(pk.n, caps, OddBlock::dzb, j)).even_mul(EvenBlock::y, i);
            r += t;
        }
    return r;
}

} // namespace

TEST_CASE("wick reduces to the classical product without contractions") {
    PoissonJets g = flat_poisson(1, 4);
    Section y = gen_even(1, kCaps, EvenBlock::y, 0);
    Section yb = gen_even(1, kCaps, EvenBlock::yb, 0);
    CHECK(wick(yb, y, g) == mul(yb, y));
}

TEST_CASE("the pairing normalization -y^k' * (omega_{k mbar} yb^m) = h delta + classical") {
    // curved one-dimensional chart and flat two-dimensional chart
    CurvaturePack fs = derive_geometry(potential_fubini_study(8), Caps{6, 8, 16});
    CurvaturePack fl = derive_geometry(potential_flat(2, 6), Caps{6, 6, 16});
    for (const CurvaturePack* pk : {&fs, &fl}) {
        int n = pk->n;
        Caps caps{6, pk->g_jet(), 16};
        for (int kp = 0; kp < n; ++kp)
            for (int k = 0; k < n; ++k) {
                Section lowered(n, caps);
                for (int m = 0; m < n; ++m)
                    lowered += pk->omega[k * n + m].restricted(caps).even_mul(EvenBlock::yb, m);
                Section y = gen_even(n, caps, EvenBlock::y, kp);
                Section commutator = wick(lowered, y, pk->poisson) - wick(y, lowered, pk->poisson);
                Section expected =
                    (k == kp) ? gen_hbar(n, caps, 1) : Section(n, caps.with_jet(commutator.caps().jet));
                CHECK(commutator == expected.restricted(commutator.caps()));
            }
    }
}

TEST_CASE("flat contraction constant is i") {
    PoissonJets g = flat_poisson(1, 4);
    Section y = gen_even(1, kCaps, EvenBlock::y, 0);
    Section yb = gen_even(1, kCaps, EvenBlock::yb, 0);
    Section prod = wick(y, yb, g);
    CHECK(prod == mul(y, yb) + GRat::i() * gen_hbar(1, kCaps.with_jet(4), 1));
    // yb * y has no contraction, so the commutator is the single hbar term
    Section br = wick_bracket(y, yb, g);
    CHECK(br == GRat::i() * gen_hbar(1, kCaps.with_jet(4), 1));
}

TEST_CASE("wick is associative on random sections") {
    Rng rng(31);
    CurvaturePack fs = derive_geometry(potential_fubini_study(10), Caps{6, 10, 16});
    PoissonJets flat2 = flat_poisson(2, 4);
    for (int trial = 0; trial < 6; ++trial) {
        Section a = rng.section(2, kCaps, 5);
        Section b = rng.section(2, kCaps, 5);
        Section c = rng.section(2, kCaps, 5);
        CHECK(wick(wick(a, b, flat2), c, flat2) == wick(a, wick(b, c, flat2), flat2));

        Caps caps{6, 5, 16};
        Section u = rng.section(1, caps, 5);
        Section v = rng.section(1, caps, 5);
        Section w = rng.section(1, caps, 5);
        CHECK(wick(wick(u, v, fs.poisson), w, fs.poisson) ==
              wick(u, wick(v, w, fs.poisson), fs.poisson));
    }
}

TEST_CASE("delta is the bracket with the quadratic source") {
    // storage caps carry two weights of headroom for the hbar-layer of the
    // bracket before the 1/hbar normalization
    CurvaturePack fs = derive_geometry(potential_fubini_study(8), Caps{9, 8, 16});
    Caps caps{9, 4, 16};
    Section src = quadratic_part(fs, caps.with_jet(fs.g_jet()));
    Rng rng(37);
    for (int trial = 0; trial < 8; ++trial) {
        Section a = rng.section(1, caps, 6, true, true, 6);
        Section lhs = delta(a);
        Section rhs = wick_bracket(src.restricted(caps), a, fs.poisson);
        rhs.hbar_shift(-1);
        CHECK(rhs == lhs.restricted(rhs.caps()));
    }
    // and on the single generator of the worked example
    Section y = gen_even(1, caps, EvenBlock::y, 0);
    Section rhs = wick_bracket(src.restricted(caps), y, fs.poisson);
    rhs.hbar_shift(-1);
    CHECK(rhs == gen_odd(1, rhs.caps(), OddBlock::dz, 0));
}

TEST_CASE("central constants have zero bracket") {
    PoissonJets g = flat_poisson(1, 4);
    Rng rng(41);
    Section c = Section::scalar(1, kCaps, GRat{Rat(3, 2), Rat(1, 5)});
    Section a = rng.section(1, kCaps, 6);
    CHECK(wick_bracket(c, a, g).is_zero());
}

TEST_CASE("insufficient inverse-form jets raise jet underflow") {
    PoissonJets g = flat_poisson(1, 2);
    Section a = gen_even(1, kCaps, EvenBlock::y, 0); // claims jet validity 4
    CHECK_THROWS_AS(wick(a, a, g), jet_underflow);
}
