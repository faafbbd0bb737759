#pragma once

#include <random>
#include <vector>

#include "fdq/section.hpp"

namespace fdq::testutil {

/// Deterministic random sections for property tests.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    int uniform(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    }
    GRat coefficient() {
        Rat re(uniform(-6, 6), uniform(1, 4));
        Rat im = (uniform(0, 2) == 0) ? Rat(uniform(-3, 3), uniform(1, 3)) : Rat(0);
        GRat c{re, im};
        if (c.is_zero()) c = GRat::one();
        return c;
    }

    Monomial monomial(int n, const Caps& caps, bool with_forms, bool with_hbar) {
        for (int tries = 0; tries < 64; ++tries) {
            Monomial m;
            for (int i = 0; i < n; ++i) {
                m.z[i] = static_cast<std::uint8_t>(uniform(0, 2));
                m.zb[i] = static_cast<std::uint8_t>(uniform(0, 2));
                m.y[i] = static_cast<std::uint8_t>(uniform(0, 2));
                m.yb[i] = static_cast<std::uint8_t>(uniform(0, 2));
            }
            if (with_hbar) m.hbar = static_cast<std::int16_t>(uniform(0, 2));
            if (with_forms) {
                std::uint32_t full = (1u << n) - 1u;
                m.odd = (uniform(0, full) << 0) | (uniform(0, full) << 4) |
                        (uniform(0, full) << 8) | (uniform(0, full) << 12);
            }
            if (caps.admits(m)) return m;
        }
        return Monomial{};
    }

    /// Random section with storage caps `caps`; generated terms respect the
    /// (possibly tighter) weight bound, leaving headroom for homotopies.
    Section section(int n, Caps caps, int nterms, bool with_forms = true, bool with_hbar = true,
                    int weight_bound = -1) {
        Caps gen = caps;
        if (weight_bound >= 0) gen.weight = weight_bound;
        Section s(n, caps);
        for (int t = 0; t < nterms; ++t) s.add(monomial(n, gen, with_forms, with_hbar), coefficient());
        return s;
    }
};

/// Seeded random real-analytic potential with identity metric at the origin
/// plus sparse higher-order perturbations; exactly Hermitian by construction.
inline Section random_potential_rho(int n, int jet_cap, std::uint64_t seed) {
    Rng rng(seed);
    Caps caps{1 << 20, jet_cap, 0};
    Section rho(n, caps);
    for (int i = 0; i < n; ++i) {
        Monomial m;
        m.z[i] = 1;
        m.zb[i] = 1;
        rho.add(m, GRat::one());
    }
    int terms = 3 + 2 * n;
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        int da = rng.uniform(1, 3), db = rng.uniform(1, 3);
        for (int k = 0; k < da; ++k) m.z[rng.uniform(0, n - 1)]++;
        for (int k = 0; k < db; ++k) m.zb[rng.uniform(0, n - 1)]++;
        if (m.base_degree() > jet_cap || m.base_degree() < 3) continue;
        GRat c{Rat(rng.uniform(-2, 2), rng.uniform(2, 5)), Rat(rng.uniform(-2, 2), rng.uniform(2, 5))};
        if (c.is_zero()) continue;
        Section piece(n, caps);
        piece.add(m, c);
        rho += piece + piece.conjugate();
    }
    return rho;
}

/// Naive list-based odd multiplication oracle: multiply two odd generator
/// lists by explicit adjacent transposition sorting.
inline int naive_odd_sign(std::uint32_t a, std::uint32_t b) {
    if (a & b) return 0;
    std::vector<int> seq;
    for (int p = 0; p < 32; ++p)
        if (a >> p & 1) seq.push_back(p);
    for (int p = 0; p < 32; ++p)
        if (b >> p & 1) seq.push_back(p);
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) sign = -sign;
    return sign;
}

} // namespace fdq::testutil
