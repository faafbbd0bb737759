#pragma once

#include "fdq/section.hpp"

namespace fdq {

/// The Koszul-type operator calculus on chart sections: the nilpotent
/// symmetrization operators delta, their typed (1,0)/(0,1) halves, the
/// normalized homotopies, and the associated projections. All are total and
/// exact; none consume jet validity.

/// delta^{1,0}: a |-> dz^i ^ da/dy^i
inline Section delta10(const Section& a) {
    Section r(a.dim(), a.caps());
    for (int i = 0; i < a.dim(); ++i) r += a.derivative(EvenBlock::y, i).odd_wedge(OddBlock::dz, i);
    return r;
}

/// delta^{0,1}: a |-> dzb^j ^ da/dyb^j
inline Section delta01(const Section& a) {
    Section r(a.dim(), a.caps());
    for (int j = 0; j < a.dim(); ++j) r += a.derivative(EvenBlock::yb, j).odd_wedge(OddBlock::dzb, j);
    return r;
}

/// delta = delta^{1,0} + delta^{0,1}
inline Section delta(const Section& a) { return delta10(a) + delta01(a); }

/// (delta^{1,0})*: a |-> y^k . iota_{d/dz^k} a
inline Section delta10_star(const Section& a) {
    Section r(a.dim(), a.caps());
    for (int k = 0; k < a.dim(); ++k) r += a.odd_derivative(OddBlock::dz, k).even_mul(EvenBlock::y, k);
    return r;
}

/// (delta^{0,1})*: a |-> yb^j . iota_{d/dzb^j} a
inline Section delta01_star(const Section& a) {
    Section r(a.dim(), a.caps());
    for (int j = 0; j < a.dim(); ++j) r += a.odd_derivative(OddBlock::dzb, j).even_mul(EvenBlock::yb, j);
    return r;
}

namespace detail {

template <class Star>
Section normalized_star(const Section& a, Star star_one_term, int (*norm)(const Monomial&)) {
    Section r(a.dim(), a.caps());
    for (const auto& [m, c] : a.terms()) {
        int d = norm(m);
        if (d == 0) continue;
        Section t(a.dim(), a.caps());
        t.add(m, c * GRat(Rat(1, d)));
        r += star_one_term(t);
    }
    return r;
}

} // namespace detail

/// (delta^{1,0})^{-1} := (1/(p1+p2)) (delta^{1,0})* on bidegree (p1 dz-forms,
/// p2 holomorphic fiber generators); annihilates the p1+p2 = 0 part.
inline Section delta10_inv(const Section& a) {
    return detail::normalized_star(
        a, [](const Section& t) { return delta10_star(t); },
        +[](const Monomial& m) { return std::popcount(m.mask(OddBlock::dz)) + m.deg_y(); });
}

/// (delta^{0,1})^{-1} := (1/(q1+q2)) (delta^{0,1})*.
inline Section delta01_inv(const Section& a) {
    return detail::normalized_star(
        a, [](const Section& t) { return delta01_star(t); },
        +[](const Monomial& m) { return std::popcount(m.mask(OddBlock::dzb)) + m.deg_yb(); });
}

/// delta^{-1} := (1/(l+m)) (delta)* with l the fiber degree in y and yb and
/// m the base form degree; annihilates the constant part.
inline Section delta_inv(const Section& a) {
    return detail::normalized_star(
        a, [](const Section& t) { return delta10_star(t) + delta01_star(t); },
        +[](const Monomial& m) {
            return std::popcount(m.mask(OddBlock::dz)) + std::popcount(m.mask(OddBlock::dzb)) +
                   m.deg_y() + m.deg_yb();
        });
}

/// The part with no dz/dzb and no y/yb (constant for the Hodge-type
/// decomposition a = delta delta^{-1} a + delta^{-1} delta a + a00).
inline Section part00(const Section& a) {
    return a.filtered([](const Monomial& m) {
        return m.mask(OddBlock::dz) == 0 && m.mask(OddBlock::dzb) == 0 && m.deg_y() == 0 &&
               m.deg_yb() == 0;
    });
}

/// Projection onto (0,*)-forms valued in the anti-holomorphic fiber part:
/// kills every term carrying dz's or y's.
inline Section pi_0star(const Section& a) {
    return a.filtered([](const Monomial& m) { return m.mask(OddBlock::dz) == 0 && m.deg_y() == 0; });
}

/// Projection onto (*,0)-forms valued in the holomorphic fiber part.
inline Section pi_star0(const Section& a) {
    return a.filtered([](const Monomial& m) { return m.mask(OddBlock::dzb) == 0 && m.deg_yb() == 0; });
}

/// Symbol map: sets all fiber generators (y, yb, dy, dyb) to zero.
inline Section symbol(const Section& a) {
    return a.filtered([](const Monomial& m) {
        return m.deg_y() == 0 && m.deg_yb() == 0 && m.mask(OddBlock::dy) == 0 &&
               m.mask(OddBlock::dyb) == 0;
    });
}

/// The (p,q) base form type component.
inline Section type_component(const Section& a, int p, int q) {
    return a.filtered([p, q](const Monomial& m) {
        return std::popcount(m.mask(OddBlock::dz)) == p && std::popcount(m.mask(OddBlock::dzb)) == q;
    });
}

/// dzb^j ^ d/dzb_j, the base Dolbeault operator on jets (consumes one jet order).
inline Section dbar_base(const Section& a) {
    Section r(a.dim(), a.caps().with_jet(a.caps().jet - 1));
    for (int j = 0; j < a.dim(); ++j)
        r += a.derivative(EvenBlock::zb, j).odd_wedge(OddBlock::dzb, j);
    return r;
}

/// dz^i ^ d/dz_i.
inline Section d_base_holo(const Section& a) {
    Section r(a.dim(), a.caps().with_jet(a.caps().jet - 1));
    for (int i = 0; i < a.dim(); ++i)
        r += a.derivative(EvenBlock::z, i).odd_wedge(OddBlock::dz, i);
    return r;
}

/// Full base de Rham differential on jets.
inline Section d_base(const Section& a) { return d_base_holo(a) + dbar_base(a); }

/// Syntactic holomorphy test on jets: no zb, yb, dzb, dyb content.
inline bool is_holomorphic(const Section& a) {
    for (const auto& [m, c] : a.terms())
        if (m.deg_zb() || m.deg_yb() || m.mask(OddBlock::dzb) || m.mask(OddBlock::dyb)) return false;
    return true;
}

inline bool is_antiholomorphic(const Section& a) {
    for (const auto& [m, c] : a.terms())
        if (m.deg_z() || m.deg_y() || m.mask(OddBlock::dz) || m.mask(OddBlock::dy)) return false;
    return true;
}

} // namespace fdq
