#pragma once

#include "fdq/wick.hpp"

namespace fdq {

/// Operators on the fiberwise-form extension of the Weyl algebra (sections
/// carrying dy/dyb): the fiberwise de Rham differential, the two Poisson
/// contractions, the BV Laplacian and its bracket, and the Berezin integral.

/// Fiberwise de Rham differential: the odd derivation with y^i -> dy^i,
/// yb^j -> dyb^j and all other generators closed.
inline Section d_fiber(const Section& a) {
    Section r(a.dim(), a.caps());
    for (int i = 0; i < a.dim(); ++i) {
        r += a.derivative(EvenBlock::y, i).odd_wedge(OddBlock::dy, i);
        r += a.derivative(EvenBlock::yb, i).odd_wedge(OddBlock::dyb, i);
    }
    return r;
}

/// Holomorphic half of d_fiber (y -> dy only).
inline Section d_fiber_holo(const Section& a) {
    Section r(a.dim(), a.caps());
    for (int i = 0; i < a.dim(); ++i) r += a.derivative(EvenBlock::y, i).odd_wedge(OddBlock::dy, i);
    return r;
}

/// Anti-holomorphic half of d_fiber (yb -> dyb only).
inline Section d_fiber_anti(const Section& a) {
    Section r(a.dim(), a.caps());
    for (int i = 0; i < a.dim(); ++i) r += a.derivative(EvenBlock::yb, i).odd_wedge(OddBlock::dyb, i);
    return r;
}

namespace detail {

inline void check_poisson(const Section& a, const PoissonJets& g, const char* who) {
    if (a.dim() != g.n) throw contract_violation(std::string(who) + ": dimension mismatch");
    if (a.caps().jet > g.jet) throw jet_underflow(std::string(who) + ": inverse form jets too shallow", a.caps().jet);
}

} // namespace detail

/// Poisson contraction in the order used by the BV Laplacian:
///   a |-> omega^{p qbar} d_{dy^p} ( d_{dyb^q} a )
/// (the dyb generator is contracted first). Even operator of form degree -2.
inline Section poisson_contraction(const Section& a, const PoissonJets& g) {
    detail::check_poisson(a, g, "poisson_contraction");
    Section r(a.dim(), a.caps());
    for (int p = 0; p < a.dim(); ++p)
        for (int q = 0; q < a.dim(); ++q) {
            Section t = a.odd_derivative(OddBlock::dyb, q).odd_derivative(OddBlock::dy, p);
            if (t.is_zero()) continue;
            r += mul(g.at(p, q).restricted(t.caps()), t);
        }
    return r;
}

/// Poisson contraction in the opposite composition order (dy first),
///   a |-> omega^{p qbar} d_{dyb^q} ( d_{dy^p} a ),
/// the orientation entering the Berezin integral and the index pairing.
/// Equals minus poisson_contraction on any section.
inline Section berezin_contraction(const Section& a, const PoissonJets& g) {
    detail::check_poisson(a, g, "berezin_contraction");
    Section r(a.dim(), a.caps());
    for (int p = 0; p < a.dim(); ++p)
        for (int q = 0; q < a.dim(); ++q) {
            Section t = a.odd_derivative(OddBlock::dy, p).odd_derivative(OddBlock::dyb, q);
            if (t.is_zero()) continue;
            r += mul(g.at(p, q).restricted(t.caps()), t);
        }
    return r;
}

/// BV Laplacian, the graded commutator of d_fiber with the (even) Poisson
/// contraction: Delta = d_fiber o iota - iota o d_fiber.
inline Section bv_laplacian(const Section& a, const PoissonJets& g) {
    return d_fiber(poisson_contraction(a, g)) - poisson_contraction(d_fiber(a), g);
}

/// The same operator through the Lie-derivative/contraction expansion
///   omega^{p qbar} ( d_{y^p} d_{dyb^q} - d_{yb^q} d_{dy^p} ),
/// kept as an independent route for cross-checking.
inline Section bv_laplacian_expanded(const Section& a, const PoissonJets& g) {
    detail::check_poisson(a, g, "bv_laplacian_expanded");
    Section r(a.dim(), a.caps());
    for (int p = 0; p < a.dim(); ++p)
        for (int q = 0; q < a.dim(); ++q) {
            Section t = a.odd_derivative(OddBlock::dyb, q).derivative(EvenBlock::y, p) -
                        a.odd_derivative(OddBlock::dy, p).derivative(EvenBlock::yb, q);
            if (t.is_zero()) continue;
            r += mul(g.at(p, q).restricted(t.caps()), t);
        }
    return r;
}

/// BV bracket: the failure of the Laplacian to be a derivation,
///   {a,b} = Delta(ab) - Delta(a) b - (-1)^{|a|} a Delta(b),
/// extended bilinearly over mixed parities.
inline Section bv_bracket(const Section& a, const Section& b, const PoissonJets& g) {
    auto [a0, a1] = detail::parity_split(a);
    Section r = bv_laplacian(mul(a, b.restricted(a.caps())), g);
    r -= mul(bv_laplacian(a, g), b.restricted(a.caps()));
    Section adb = mul(a0, bv_laplacian(b, g).restricted(a.caps())) -
                  mul(a1, bv_laplacian(b, g).restricted(a.caps()));
    return r - adb;
}

/// Berezin integral: (1/n!) (berezin_contraction)^n followed by setting all
/// fiber variables to zero; a base-form valued result.
inline Section berezin(const Section& a, const PoissonJets& g) {
    Section t = a;
    Rat nf(1);
    for (int k = 1; k <= a.dim(); ++k) {
        t = berezin_contraction(t, g);
        nf *= k;
    }
    t.scale(GRat(Rat(1) / nf));
    return symbol(t);
}

/// Polarization weight used by the loop-order analysis: yb and dyb weigh 1,
/// everything else (including hbar) weighs 0.
inline int polarization_weight(const Monomial& m) {
    return m.deg_yb() + std::popcount(m.mask(OddBlock::dyb));
}

inline int max_polarization_weight(const Section& a) {
    int w = 0;
    for (const auto& [m, c] : a.terms()) w = std::max(w, polarization_weight(m));
    return w;
}

inline int min_polarization_weight(const Section& a) {
    int w = 1 << 20;
    for (const auto& [m, c] : a.terms()) w = std::min(w, polarization_weight(m));
    return w;
}

} // namespace fdq
