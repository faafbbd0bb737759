#pragma once

#include "fdq/kapranov.hpp"

namespace fdq {

/// The weight-one source of the symmetrization bracket,
/// omega_{i jbar} (dz^i yb^j - dzb^j y^i).
inline Section gamma_quadratic(const CurvaturePack& pk, Caps caps) {
    Section r(pk.n, caps);
    for (int i = 0; i < pk.n; ++i)
        for (int j = 0; j < pk.n; ++j) {
            Section w = pk.omega[i * pk.n + j].restricted(caps);
            if (w.is_zero()) continue;
            r += mul(w, gen_odd(pk.n, caps, OddBlock::dz, i)).even_mul(EvenBlock::yb, j);
            r -= mul(w, gen_odd(pk.n, caps, OddBlock::dzb, j)).even_mul(EvenBlock::y, i);
        }
    return r;
}

/// Lift the tangent slot of a tower stage into an anti-holomorphic fiber
/// generator through the Kahler pairing omega_{j kbar}. The orientation is
/// fixed by requiring delta^{1,0}(lift of stage two) = r_nabla, which the
/// flatness of the lifted connection rests on.
inline Section lift_stage(const CurvaturePack& pk, const VectorSection& st) {
    const int n = pk.n;
    Caps caps = st.comp[0].caps();
    Section r(n, caps);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Section w = pk.omega[j * n + k].restricted(caps);
            if (w.is_zero() || st.comp[j].is_zero()) continue;
            r += mul(w, st.comp[j]).even_mul(EvenBlock::yb, k);
        }
    return r;
}

/// The full lift: I = sum over stages.
inline Section lift_L(const CurvaturePack& pk, const KapranovData& kd) {
    Section r = lift_stage(pk, kd.r_star[0]);
    for (std::size_t s = 1; s < kd.r_star.size(); ++s) r = add_min_jet(r, lift_stage(pk, kd.r_star[s]));
    return r;
}

/// A gauge-fixed solution of the abelian-connection equation together with
/// its certificates. gamma = I + the quadratic source.
struct FedosovSolution {
    Section I;
    std::vector<Section> I_layers; // I stratified by weight, per-stratum jets
    Section J_alpha;
    Section gamma;
    Section residual;            // nabla I - delta I + (1/h) I*I + R - alpha
    Section gauge_delta10_inv;   // (delta^{1,0})^{-1} I
    Section gauge_pi0star;       // pi_{0,*} I
    AlphaJet alpha;

    bool gauge_ok() const { return gauge_delta10_inv.is_zero() && gauge_pi0star.is_zero(); }
};

namespace detail {

inline Section weight_layer(const Section& s, int w) {
    return s.filtered([w](const Monomial& m) { return m.weight() == w; });
}

/// Sum of (1/h) a*b over the ordered layer pairs with w1 + w2 = wsum. The
/// classical parts cancel pairwise (the layers are odd), leaving the clean
/// contraction terms, all of weight wsum - 2. The product is taken with two
/// weights of headroom: the contraction sits two weights above its image
/// under the 1/h normalization.
inline Section layered_square(const CurvaturePack& pk, const std::vector<Section>& layers, int wsum,
                              Caps caps) {
    Section r(pk.n, caps);
    Caps roomy = caps.with_weight(caps.weight + 2);
    for (int w1 = 3; w1 <= wsum - 3; ++w1) {
        int w2 = wsum - w1;
        if (w2 < 3 || w2 >= int(layers.size()) || w1 >= int(layers.size())) continue;
        if (layers[w1].is_zero() || layers[w2].is_zero()) continue;
        Section t = wick(layers[w1].restricted(roomy.with_jet(layers[w1].caps().jet)),
                         layers[w2].restricted(roomy.with_jet(layers[w2].caps().jet)), pk.poisson);
        t.hbar_shift(-1);
        r = add_min_jet(r, t.restricted(caps.with_jet(t.caps().jet)));
    }
    return r;
}

} // namespace detail

/// Residual of the abelian-connection equation for a candidate I.
inline Section fedosov_residual(const CurvaturePack& pk, const AlphaJet& alpha, const Section& I) {
    Caps roomy = I.caps().with_weight(I.caps().weight + 2);
    Section iwick = wick(I.restricted(roomy), I.restricted(roomy), pk.poisson);
    iwick.hbar_shift(-1);
    Section r = add_min_jet(nabla(pk, I), -delta(I));
    r = add_min_jet(r, iwick.restricted(I.caps().with_jet(iwick.caps().jet)));
    r = add_min_jet(r, pk.r_nabla);
    r = add_min_jet(r, -alpha_form(pk, alpha));
    return r;
}

/// Solve for the unique I with (delta^{1,0})^{-1} I = 0 and pi_{0,*} I = 0 by
/// the weight-raising fixed point
///   I = (delta^{1,0})^{-1} ( nabla I + (1/h) I*I + R - alpha ),
/// solved stratum by stratum: the weight-w layer is determined by the layers
/// below it, and only its own derivation chain consumes jet orders.
inline FedosovSolution solve_fedosov(const CurvaturePack& pk, const AlphaJet& alpha, Caps caps) {
    for (const auto& p : alpha.potentials)
        if (p.n != pk.n) throw contract_violation("solve_fedosov: alpha dimension mismatch");
    if (caps.weight < 3)
        throw cap_underflow("solve_fedosov: weight cap " + std::to_string(caps.weight) +
                            " is below the first active weight 3");

    Section alph = alpha_form(pk, alpha);
    alph = alph.restricted(caps.with_jet(alph.caps().jet));
    Section rnab = pk.r_nabla.restricted(caps.with_jet(pk.curv_jet()));

    std::vector<Section> layers(caps.weight + 1, Section(pk.n, caps.with_jet(pk.curv_jet())));
    for (int w = 3; w <= caps.weight; ++w) {
        Section rhs(pk.n, caps.with_jet(1 << 20));
        if (!layers[w - 1].is_zero()) rhs = add_min_jet(rhs, nabla(pk, layers[w - 1]));
        if (w == 3) rhs = add_min_jet(rhs, rnab);
        Section al = detail::weight_layer(alph, w - 1);
        if (!al.is_zero()) rhs = add_min_jet(rhs, -al);
        rhs = add_min_jet(rhs, detail::layered_square(pk, layers, w + 1, rhs.caps()));
        layers[w] = delta10_inv(rhs);
    }

    FedosovSolution sol;
    sol.alpha = alpha;
    sol.I = Section(pk.n, caps.with_jet(1 << 20));
    for (int w = 3; w <= caps.weight; ++w) sol.I = add_min_jet(sol.I, layers[w]);
    sol.I_layers = layers;

    // residual, assembled layer by layer so each stratum is checked at its
    // own jet validity; the top stratum needs the (absent) next layer and is
    // certified by the cap semantics instead
    Section res(pk.n, caps.with_jet(1 << 20));
    for (int w = 2; w < caps.weight; ++w) {
        Section rw(pk.n, caps.with_jet(1 << 20));
        if (!layers[w].is_zero()) rw = add_min_jet(rw, nabla(pk, layers[w]));
        rw = add_min_jet(rw, -delta(layers[w + 1]));
        rw = add_min_jet(rw, detail::layered_square(pk, layers, w + 2, rw.caps()));
        if (w == 2) rw = add_min_jet(rw, rnab);
        Section al = detail::weight_layer(alph, w);
        if (!al.is_zero()) rw = add_min_jet(rw, -al);
        res = add_min_jet(res, rw);
    }
    sol.residual = res;
    sol.gauge_delta10_inv = delta10_inv(sol.I);
    sol.gauge_pi0star = pi_0star(sol.I);
    sol.gamma = add_min_jet(sol.I, gamma_quadratic(pk, caps.with_jet(pk.g_jet())));

    // the alpha-driven tail: sum_{k>=1} (delta10_inv nabla10)^k (dbar g)
    Section dbar_g(pk.n, caps.with_jet(1 << 20));
    int i = 0;
    for (const auto& p : alpha.potentials) {
        ++i;
        Section gi = GRat::i() * p.rho.restricted(caps.with_jet(p.jet_cap));
        gi.hbar_shift(i);
        dbar_g = add_min_jet(dbar_g, dbar_base(gi));
    }
    Section jt(pk.n, dbar_g.caps());
    Section stage = dbar_g;
    for (int k = 1; k <= caps.weight && stage.caps().jet - 1 >= 0; ++k) {
        stage = delta10_inv(nabla10(pk, stage));
        if (stage.is_zero()) break;
        jt = add_min_jet(jt, stage);
    }
    sol.J_alpha = jt;
    return sol;
}

namespace detail {

/// (1/h)[I, a] with both arguments coerced to a common jet window. Computed
/// with two weights of headroom so the contraction layer above the cap
/// survives the 1/h normalization.
inline Section scaled_bracket(const CurvaturePack& pk, const Section& I, const Section& a) {
    Caps c = a.caps().with_jet(std::min(a.caps().jet, I.caps().jet));
    Caps roomy = c.with_weight(c.weight + 2);
    Section br = wick_bracket(I.restricted(roomy), a.restricted(roomy), pk.poisson);
    br.hbar_shift(-1);
    return br.restricted(c);
}

} // namespace detail

/// The abelian connection of a solution: D a = nabla a - delta a + (1/h)[I, a].
inline Section apply_DF(const CurvaturePack& pk, const FedosovSolution& sol, const Section& a) {
    Section r = add_min_jet(nabla(pk, a), -delta(a));
    return add_min_jet(r, detail::scaled_bracket(pk, sol.I, a));
}

/// The flat section with symbol f: the unique fixed point of
///   O = f + delta^{-1} ( nabla O + (1/h)[I, O] ),
/// solved stratum by stratum like the connection itself.
inline Section flat_section_fedosov(const CurvaturePack& pk, const FedosovSolution& sol,
                                    const Section& f) {
    for (const auto& [m, c] : f.terms())
        if (m.deg_y() || m.deg_yb() || m.odd)
            throw contract_violation("flat_section_fedosov: symbol must be a function jet");
    const Caps caps = f.caps();
    const int wcap = caps.weight;
    std::vector<Section> O(wcap + 1, Section(f.dim(), caps.with_jet(1 << 20)));
    for (int w = 0; w <= wcap; ++w) O[w] = detail::weight_layer(f, w);

    for (int w = 1; w <= wcap; ++w) {
        Section rhs(f.dim(), caps.with_jet(1 << 20));
        if (!O[w - 1].is_zero()) rhs = add_min_jet(rhs, nabla(pk, O[w - 1]));
        // (1/h)[I_{wi}, O_{wo}] contributes at weight wi + wo - 2 = w - 1
        for (int wi = 3; wi < int(sol.I_layers.size()); ++wi) {
            int wo = w + 1 - wi;
            if (wo < 0 || wo > wcap) continue;
            if (sol.I_layers[wi].is_zero() || O[wo].is_zero()) continue;
            rhs = add_min_jet(rhs, detail::scaled_bracket(pk, sol.I_layers[wi], O[wo]));
        }
        if (!rhs.is_zero()) O[w] = add_min_jet(O[w], delta_inv(rhs));
    }
    Section total(f.dim(), caps.with_jet(1 << 20));
    for (int w = 0; w <= wcap; ++w) total = add_min_jet(total, O[w]);
    return total;
}

/// The induced product on function jets: sigma(O_f * O_g).
inline Section star_product(const CurvaturePack& pk, const FedosovSolution& sol, const Section& f,
                            const Section& g) {
    Section of = flat_section_fedosov(pk, sol, f);
    Section og = flat_section_fedosov(pk, sol, g);
    int j = std::min(of.caps().jet, og.caps().jet);
    return symbol(wick(of.restricted(of.caps().with_jet(j)), og.restricted(og.caps().with_jet(j)),
                       pk.poisson));
}

/// The canonical potentials u_k = i * d_{z^k}(rho + sum_i hbar^i g_i) whose
/// flat sections implement the pairing [u_k, z^k']_* = hbar delta_{kk'}. The
/// i-factor makes them derivatives of a potential of the Kahler form itself
/// (rather than of the metric), which the flat-chart pairing pins down.
inline std::vector<Section> canonical_potentials(const CurvaturePack& pk, const PotentialJet& pot,
                                                 const AlphaJet& alpha, Caps caps) {
    Section P = pot.rho.restricted(caps.with_jet(pot.jet_cap));
    int i = 0;
    for (const auto& g : alpha.potentials) {
        ++i;
        Section gi = g.rho.restricted(caps.with_jet(g.jet_cap));
        gi.hbar_shift(i);
        P = add_min_jet(P, gi);
    }
    P.scale(GRat::i());
    std::vector<Section> u;
    u.reserve(pk.n);
    for (int k = 0; k < pk.n; ++k) u.push_back(P.derivative(EvenBlock::z, k));
    return u;
}

/// The classifying (1,1)-form of the induced product, computed from the
/// canonical potentials: dbar(-u_k dz^k). Equals omega - alpha.
inline Section karabegov_form(const CurvaturePack& pk, const PotentialJet& pot, const AlphaJet& alpha,
                              Caps caps) {
    std::vector<Section> u = canonical_potentials(pk, pot, alpha, caps);
    Section s(pk.n, u[0].caps());
    for (int k = 0; k < pk.n; ++k)
        s -= mul(u[k], gen_odd(pk.n, u[0].caps(), OddBlock::dz, k));
    return dbar_base(s);
}

} // namespace fdq
