#pragma once

#include <vector>

#include "fdq/delta_ops.hpp"
#include "fdq/section.hpp"

namespace fdq {

/// Jets of the Poisson tensor components w[i][j] = omega^{i jbar} on the
/// chart, as base-only sections, valid through jet order `jet`. These drive
/// every metric contraction: the Wick product, the fiberwise BV contraction
/// and the graph propagators.
struct PoissonJets {
    int n = 1;
    int jet = 0;
    std::vector<Section> w; // row-major n*n

    const Section& at(int i, int j) const { return w[i * n + j]; }
};

/// Fiberwise Wick product: contracts holomorphic fiber derivatives of the
/// first factor against anti-holomorphic ones of the second,
///   a*b = sum_k (hbar^k/k!) omega^{i1 j1}...omega^{ik jk}
///         (d^k a / dy^{i1}..dy^{ik}) (d^k b / dyb^{j1}..dyb^{jk}).
/// Requires omega jets up to the working jet order of the inputs.
inline Section wick(const Section& a, const Section& b, const PoissonJets& g) {
    if (a.dim() != b.dim() || a.dim() != g.n) throw contract_violation("wick: dimension mismatch");
    if (a.caps().weight != b.caps().weight || a.caps().form != b.caps().form)
        throw contract_violation("wick: cap mismatch");
    int needed = std::min(a.caps().jet, b.caps().jet);
    if (needed > g.jet) throw jet_underflow("wick: inverse form jets too shallow", needed);

    const int n = a.dim();
    Caps out_caps = a.caps().with_jet(needed);
    Section result(n, out_caps);

    // pairs of partially differentiated factors at the current contraction order
    struct Pair {
        Section left, right;
    };
    std::vector<Pair> pairs{{a.restricted(out_caps), b.restricted(out_caps)}};

    Rat kfact(1);
    for (int k = 0; !pairs.empty() && k <= 4 * kMaxDim * 200; ++k) {
        if (k > 0) kfact *= k;
        Section layer(n, out_caps);
        for (const auto& p : pairs) layer += mul(p.left, p.right);
        if (k > 0) {
            layer.scale(GRat(Rat(1) / kfact));
            layer.hbar_shift(k);
        }
        result += layer;

        std::vector<Pair> next;
        next.reserve(pairs.size() * n * n);
        for (const auto& p : pairs) {
            for (int i = 0; i < n; ++i) {
                Section da = p.left.derivative(EvenBlock::y, i);
                if (da.is_zero()) continue;
                for (int j = 0; j < n; ++j) {
                    Section db = p.right.derivative(EvenBlock::yb, j);
                    if (db.is_zero()) continue;
                    next.push_back({mul(g.at(i, j).restricted(out_caps), da), std::move(db)});
                }
            }
        }
        pairs = std::move(next);
    }
    return result;
}

/// Graded Wick commutator [a,b] = a*b - (-1)^{|a||b|} b*a, extended
/// bilinearly over mixed-parity inputs.
inline Section wick_bracket(const Section& a, const Section& b, const PoissonJets& g) {
    auto [a0, a1] = detail::parity_split(a);
    auto [b0, b1] = detail::parity_split(b);
    Section r = wick(a, b, g);
    Section ba = wick(b0, a0, g) + wick(b0, a1, g) + wick(b1, a0, g) - wick(b1, a1, g);
    return r - ba.restricted(r.caps());
}

/// The Poisson bracket on function jets induced by the same pairing:
/// {f,g} = omega^{i jbar} (df/dz_i dg/dzb_j - df/dzb_j dg/dz_i).
inline Section poisson_bracket(const Section& f, const Section& h, const PoissonJets& g) {
    int needed = std::min(f.caps().jet, h.caps().jet) - 1;
    if (needed > g.jet) throw jet_underflow("poisson_bracket: inverse form jets too shallow", needed);
    Section r(f.dim(), f.caps().with_jet(needed));
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            Section t = mul(f.derivative(EvenBlock::z, i), h.derivative(EvenBlock::zb, j)) -
                        mul(f.derivative(EvenBlock::zb, j), h.derivative(EvenBlock::z, i));
            r += mul(g.at(i, j).restricted(t.caps()), t);
        }
    return r;
}

} // namespace fdq
