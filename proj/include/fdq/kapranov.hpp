#pragma once

#include "fdq/geometry.hpp"

namespace fdq {

/// Sections valued in the holomorphic tangent bundle: one component per
/// output index (the vector slot is an explicit index on components, not an
/// extra generator).
struct VectorSection {
    std::vector<Section> comp;

    int dim() const { return static_cast<int>(comp.size()); }
    bool is_zero() const {
        for (const auto& s : comp)
            if (!s.is_zero()) return false;
        return true;
    }
};

/// Covariant derivative on tangent-valued sections: componentwise nabla plus
/// the tangent connection mixing the slots.
inline VectorSection nabla10_vec(const CurvaturePack& pk, const VectorSection& v) {
    const int n = pk.n;
    VectorSection r;
    r.comp.reserve(n);
    for (int m = 0; m < n; ++m) {
        Section s = nabla10(pk, v.comp[m]);
        Caps caps = s.caps();
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                Section G = pk.gamma_at(m, i, l);
                if (G.is_zero()) continue;
                s += mul(mul(G.restricted(caps), gen_odd(n, caps, OddBlock::dz, i)),
                         v.comp[l].restricted(caps));
            }
        r.comp.push_back(std::move(s));
    }
    return r;
}

inline VectorSection delta10_inv_vec(const VectorSection& v) {
    VectorSection r;
    r.comp.reserve(v.comp.size());
    for (const auto& s : v.comp) r.comp.push_back(delta10_inv(s));
    return r;
}

inline VectorSection delta10_vec(const VectorSection& v) {
    VectorSection r;
    r.comp.reserve(v.comp.size());
    for (const auto& s : v.comp) r.comp.push_back(delta10(s));
    return r;
}

/// The tower of symmetrized curvature transposes driving the L-infinity
/// recursion: taylor[k] holds the stage with k+2 symmetric lower indices,
/// a (0,1)-form valued in Sym^{k+2}(T*X) tensor TX.
struct KapranovData {
    int max_n = 0;
    std::vector<VectorSection> r_star; // r_star[k] is stage n = k+2
};

/// Stage two is built directly from the curvature; every later stage is the
/// normalized holomorphic covariant derivative of its predecessor. Each step
/// consumes one jet order.
///
/// The overall sign of stage two is fixed by flatness: the anticommutator of
/// delta^{1,0} with the stage-two derivation must reproduce the curvature
/// action nabla^2(y^m) = -R^m_{i jbar k} dz^i dzb^j y^k on the cotangent
/// frame, which forces the coefficient -1/2.
inline KapranovData kapranov_recursion(const CurvaturePack& pk, int max_n) {
    if (max_n < 2) throw contract_violation("kapranov_recursion: max_n must be at least 2");
    const int n = pk.n;
    KapranovData kd;
    kd.max_n = max_n;

    Caps caps = pk.caps.with_jet(pk.curv_jet());
    VectorSection r2;
    r2.comp.assign(n, Section(n, caps));
    for (int m = 0; m < n; ++m) {
        Section s(n, caps);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    Section c = pk.curv_at(m, i, j, k);
                    if (c.is_zero()) continue;
                    Monomial mono;
                    mono.odd = Monomial::bit(OddBlock::dzb, j);
                    mono.y[i] += 1;
                    mono.y[k] += 1;
                    Section basis(n, caps);
                    basis.add(mono, GRat(Rat(-1, 2)));
                    s += mul(c, basis);
                }
        r2.comp[m] = std::move(s);
    }
    kd.r_star.push_back(std::move(r2));

    for (int stage = 3; stage <= max_n; ++stage) {
        const VectorSection& prev = kd.r_star.back();
        if (prev.comp[0].caps().jet - 1 < 0)
            throw jet_underflow("kapranov_recursion: stage " + std::to_string(stage), stage);
        kd.r_star.push_back(delta10_inv_vec(nabla10_vec(pk, prev)));
    }
    return kd;
}

/// Apply one tower stage as a derivation on holomorphic-Weyl sections:
/// a |-> sum_j r_star^{(j)} . da/dy^j.
inline Section apply_stage(const VectorSection& st, const Section& a) {
    Section r(a.dim(), a.caps().with_jet(std::min(a.caps().jet, st.comp[0].caps().jet)));
    for (int j = 0; j < a.dim(); ++j) {
        Section da = a.derivative(EvenBlock::y, j);
        if (da.is_zero()) continue;
        r += mul(st.comp[j].restricted(r.caps()), da.restricted(r.caps()));
    }
    return r;
}

namespace detail {

inline void require_holomorphic_weyl(const Section& a, const char* who) {
    for (const auto& [m, c] : a.terms())
        if (m.deg_yb() || m.mask(OddBlock::dy) || m.mask(OddBlock::dyb))
            throw contract_violation(std::string(who) + ": section leaves the holomorphic Weyl part");
}

} // namespace detail

/// The flat connection on the holomorphic Weyl part:
/// D = nabla - delta^{1,0} + sum of tower-stage derivations.
inline Section apply_DK(const CurvaturePack& pk, const KapranovData& kd, const Section& a) {
    detail::require_holomorphic_weyl(a, "apply_DK");
    Section r = add_min_jet(nabla(pk, a), -delta10(a));
    for (const auto& st : kd.r_star) r = add_min_jet(r, apply_stage(st, a));
    return r;
}

/// Flat sections with prescribed symbol: f must be a dbar-closed jet (in
/// particular any holomorphic function jet, or a (0,q)-form jet). The flat
/// extension is sum_k (delta10_inv nabla10)^k f; the recursion adds one
/// fiber weight and consumes one jet order per step, and the whole sum is
/// reported at the jet validity of its deepest contributing stage.
inline Section flat_section_DK(const CurvaturePack& pk, const Section& f) {
    Section residual = dbar_base(f);
    if (!residual.is_zero())
        throw contract_violation("flat_section_DK: input is not dbar-closed; residual has " +
                                 std::to_string(residual.size()) + " terms");
    Section total = f;
    Section stage = f;
    for (int k = 1; k <= f.caps().weight; ++k) {
        if (stage.caps().jet - 1 < 0) break;
        stage = delta10_inv(nabla10(pk, stage));
        if (stage.is_zero()) break;
        total = add_min_jet(total, stage);
    }
    return total;
}

} // namespace fdq
