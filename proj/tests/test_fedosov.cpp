#include <catch2/catch_amalgamated.hpp>

#include "fdq/fedosov.hpp"
#include "test_util.hpp"

using namespace fdq;
using testutil::Rng;

namespace {

PotentialJet random_potential(int n, int jet, std::uint64_t seed) {
    return make_potential(n, jet, testutil::random_potential_rho(n, jet, seed));
}

AlphaJet alpha_one(const PotentialJet& g1) {
    AlphaJet a;
    a.potentials.push_back(g1);
    return a;
}

} // namespace

TEST_CASE("flat chart solution is the bare quadratic source") {
    CurvaturePack pk = derive_geometry(potential_flat(1, 10), Caps{6, 10, 16});
    FedosovSolution sol = solve_fedosov(pk, AlphaJet{}, Caps{6, 10, 16});
    CHECK(sol.I.is_zero());
    CHECK(sol.residual.is_zero());
    CHECK(sol.gauge_ok());
    CHECK(sol.gamma == gamma_quadratic(pk, sol.gamma.caps()));
}

TEST_CASE("the lifted tower solves the equation and matches the gauge-fixed solve") {
    CurvaturePack pk = derive_geometry(potential_fubini_study(16), Caps{6, 16, 16});
    KapranovData kd = kapranov_recursion(pk, 7);
    Section lifted = lift_L(pk, kd);

    FedosovSolution sol = solve_fedosov(pk, AlphaJet{}, Caps{6, 16, 16});
    CHECK(sol.residual.is_zero());
    CHECK(sol.gauge_delta10_inv.is_zero());
    CHECK(sol.gauge_pi0star.is_zero());

    Section diff = add_min_jet(sol.I, -lifted);
    CHECK(diff.is_zero());

    // no quantum corrections: I is hbar-free when alpha vanishes
    for (const auto& [m, c] : sol.I.terms()) CHECK(m.hbar == 0);
}

TEST_CASE("stage-two lift structure and its closedness") {
    CurvaturePack pk = derive_geometry(potential_fubini_study(10), Caps{6, 10, 16});
    KapranovData kd = kapranov_recursion(pk, 2);
    Section i2 = lift_stage(pk, kd.r_star[0]);

    CHECK(delta01(i2).is_zero());

    // delta^{1,0} of the stage-two lift reproduces the curvature section
    Section d = delta10(i2);
    CHECK(add_min_jet(d, -pk.r_nabla).is_zero());

    // structure: -(i/2) R_{i jbar k lbar} dzb^j y^i y^k yb^l, the lift
    // orientation forced by the identity above
    Caps caps = i2.caps();
    Section expected(1, caps);
    {
        Monomial m;
        m.odd = Monomial::bit(OddBlock::dzb, 0);
        m.y[0] = 2;
        m.yb[0] = 1;
        Section basis(1, caps);
        basis.add(m, GRat{Rat(0), Rat(-1, 2)});
        expected = mul(pk.curv_low_at(0, 0, 0, 0).restricted(caps), basis);
    }
    CHECK(i2 == expected);
}

TEST_CASE("general alpha: residual vanishes and the tail is holomorphic") {
    CurvaturePack pk = derive_geometry(potential_fubini_study(16), Caps{6, 16, 16});
    AlphaJet alpha = alpha_one(random_potential(1, 12, 808));

    FedosovSolution sol = solve_fedosov(pk, alpha, Caps{6, 16, 16});
    CHECK(sol.residual.is_zero());

    // J_alpha lives in the holomorphic fiber part, so its Wick square dies by type
    for (const auto& [m, c] : sol.J_alpha.terms()) {
        CHECK(m.deg_yb() == 0);
        CHECK(m.mask(OddBlock::dz) == 0);
    }
    Section jj = wick(sol.J_alpha, sol.J_alpha, pk.poisson);
    CHECK(jj.is_zero());

    // the alpha solution is the alpha-free one plus the tail
    FedosovSolution sol0 = solve_fedosov(pk, AlphaJet{}, Caps{6, 16, 16});
    Section recombined = add_min_jet(sol0.I, sol.J_alpha);
    CHECK(add_min_jet(sol.I, -recombined).is_zero());
}

TEST_CASE("flat sections of the abelian connection") {
    CurvaturePack pk = derive_geometry(potential_fubini_study(18), Caps{6, 18, 16});
    FedosovSolution sol = solve_fedosov(pk, AlphaJet{}, Caps{6, 18, 16});
    Caps caps{6, 12, 16};

    Section one = Section::scalar(1, caps, GRat::one());
    CHECK(flat_section_fedosov(pk, sol, one) == one);

    Section zb = gen_even(1, caps, EvenBlock::zb, 0);
    Section ozb = flat_section_fedosov(pk, sol, zb);
    CHECK(symbol(ozb) == zb.restricted(ozb.caps()));
    // flatness closes two weights below the cap: the 1/hbar bracket reaches
    // two weights past the solved window
    Section dfr = apply_DF(pk, sol, ozb);
    CHECK(dfr.restricted(dfr.caps().with_weight(4)).is_zero());

    // holomorphic symbols receive no corrections beyond the classical series
    Section z = gen_even(1, caps, EvenBlock::z, 0);
    Section oz = flat_section_fedosov(pk, sol, z);
    Section jz = flat_section_DK(pk, z);
    CHECK(add_min_jet(oz, -jz).is_zero());
    for (const auto& [m, c] : oz.terms()) CHECK(m.hbar == 0);

    // flat chart: the antiholomorphic coordinate terminates after one step
    CurvaturePack fl = derive_geometry(potential_flat(1, 8), Caps{6, 8, 16});
    FedosovSolution fsol = solve_fedosov(fl, AlphaJet{}, Caps{6, 8, 16});
    Section ozb_flat = flat_section_fedosov(fl, fsol, zb.restricted(Caps{6, 6, 16}));
    CHECK(ozb_flat == zb.restricted(ozb_flat.caps()) +
                          gen_even(1, ozb_flat.caps(), EvenBlock::yb, 0));
}

TEST_CASE("canonical potentials appear in the antiholomorphic component of their sections") {
    CurvaturePack pk = derive_geometry(potential_fubini_study(14), Caps{6, 14, 16});
    PotentialJet pot = potential_fubini_study(14);
    AlphaJet alpha = alpha_one(random_potential(1, 12, 909));
    FedosovSolution sol = solve_fedosov(pk, alpha, Caps{6, 14, 16});

    std::vector<Section> u = canonical_potentials(pk, pot, alpha, Caps{6, 14, 16});
    Section ou = flat_section_fedosov(pk, sol, u[0].restricted(Caps{6, 10, 16}));

    Section anti = ou.filtered([](const Monomial& m) { return m.deg_y() == 0 && m.odd == 0; });
    Section expected = u[0].restricted(anti.caps());
    for (int m = 0; m < 1; ++m)
        expected += mul(pk.omega[0].restricted(anti.caps()),
                        gen_even(1, anti.caps(), EvenBlock::yb, m));
    CHECK(anti == expected);
}

TEST_CASE("weight caps below the first active weight are refused") {
    CurvaturePack pk = derive_geometry(potential_fubini_study(12), Caps{2, 12, 16});
    CHECK_THROWS_AS(solve_fedosov(pk, AlphaJet{}, Caps{2, 12, 16}), cap_underflow);
}
