#pragma once

#include <vector>

#include "fdq/bv_ops.hpp"
#include "fdq/jets.hpp"

namespace fdq {

namespace detail {

/// Invert a matrix of base-jet sections: constant part by exact elimination,
/// higher orders by the terminating Neumann series.
inline std::vector<Section> invert_jet_matrix(const std::vector<Section>& a, int n, Caps caps,
                                              std::string* offending = nullptr) {
    // constant part
    std::vector<GRat> c0(n * n), inv0(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c0[i * n + j] = a[i * n + j].coeff(Monomial{});
    std::vector<GRat> aug = c0;
    for (int i = 0; i < n; ++i) inv0[i * n + i] = GRat::one();
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (!aug[r * n + col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) {
            if (offending) {
                *offending = "[";
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        *offending += to_string(c0[i * n + j]) + (j + 1 < n ? ", " : (i + 1 < n ? "; " : "]"));
            }
            throw contract_violation("degenerate metric at the chart origin");
        }
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(aug[pivot * n + j], aug[col * n + j]);
                std::swap(inv0[pivot * n + j], inv0[col * n + j]);
            }
        GRat d = aug[col * n + col];
        for (int j = 0; j < n; ++j) {
            aug[col * n + j] /= d;
            inv0[col * n + j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || aug[r * n + col].is_zero()) continue;
            GRat f = aug[r * n + col];
            for (int j = 0; j < n; ++j) {
                aug[r * n + j] -= f * aug[col * n + j];
                inv0[r * n + j] -= f * inv0[col * n + j];
            }
        }
    }

    auto matmul = [&](const std::vector<Section>& x, const std::vector<Section>& y) {
        std::vector<Section> r(n * n, Section(n, caps));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) r[i * n + j] += mul(x[i * n + k], y[k * n + j]).restricted(caps);
        return r;
    };

    std::vector<Section> inv0_s(n * n, Section(n, caps)), nilp(n * n, Section(n, caps));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            inv0_s[i * n + j] = Section::scalar(n, caps, inv0[i * n + j]);
            nilp[i * n + j] = a[i * n + j].restricted(caps);
            nilp[i * n + j].add(Monomial{}, -c0[i * n + j]); // strictly positive base degree
        }

    // (C0 + N)^{-1} = sum_k (-C0^{-1} N)^k C0^{-1}
    std::vector<Section> result = inv0_s;
    std::vector<Section> pow = inv0_s;
    for (int k = 1; k <= caps.jet; ++k) {
        pow = matmul(pow, nilp);
        pow = matmul(pow, inv0_s);
        bool zero = true;
        for (auto& s : pow)
            if (!s.is_zero()) zero = false;
        if (zero) break;
        for (int e = 0; e < n * n; ++e) {
            if (k % 2) {
                result[e] -= pow[e];
            } else {
                result[e] += pow[e];
            }
        }
    }
    return result;
}

} // namespace detail

/// All derived chart geometry: metric, inverse, Kahler form, Christoffel
/// symbols, curvature in all index positions, the curvature section of the
/// Weyl algebra, its fiberwise-form lift, and the holomorphic tangent trace.
/// Entries are jets valid through the recorded orders.
struct CurvaturePack {
    int n = 1;
    Caps caps;
    int rho_jet = 0;

    std::vector<Section> g;      // g_{i jbar}, [i*n+j], valid rho_jet-2
    std::vector<Section> ginv;   // matrix inverse of g, valid rho_jet-2
    std::vector<Section> omega;  // omega_{i jbar} = i g_{i jbar}
    PoissonJets poisson;         // omega^{i jbar}, valid rho_jet-2
    std::vector<Section> gamma;  // Gamma^l_{ik}, [(l*n+i)*n+k], valid rho_jet-3
    std::vector<Section> curv;   // R^l_{i jbar k}, [((l*n+i)*n+j)*n+k], valid rho_jet-4
    std::vector<Section> curv_low; // R_{i jbar k lbar}, [((i*n+j)*n+k)*n+l]

    Section omega_form;   // the Kahler form as a section
    Section r_nabla;      // curvature section of the Weyl algebra
    Section r_tilde;      // fiberwise-form lift of r_nabla
    Section tr_r_plus;    // trace of the holomorphic tangent curvature

    // connection coefficient sections for the covariant derivative, valid rho_jet-3
    std::vector<Section> conn_y, conn_yb, conn_dy, conn_dyb;

    int g_jet() const { return rho_jet - 2; }
    int gamma_jet() const { return rho_jet - 3; }
    int curv_jet() const { return rho_jet - 4; }

    const Section& gamma_at(int l, int i, int k) const { return gamma[(l * n + i) * n + k]; }
    const Section& curv_at(int l, int i, int j, int k) const {
        return curv[((l * n + i) * n + j) * n + k];
    }
    const Section& curv_low_at(int i, int j, int k, int l) const {
        return curv_low[((i * n + j) * n + k) * n + l];
    }
};

/// Derive the full geometry from a potential jet. Requires jet_cap >= 2;
/// rejects potentials whose metric is degenerate at the origin.
inline CurvaturePack derive_geometry(const PotentialJet& pot, Caps caps) {
    if (pot.jet_cap < 2) throw jet_underflow("derive_geometry: potential too shallow", 2);
    const int n = pot.n;
    CurvaturePack pk;
    pk.n = n;
    pk.caps = caps;
    pk.rho_jet = pot.jet_cap;

    Caps gcaps = caps.with_jet(pot.jet_cap - 2);
    Section rho = pot.rho.restricted(caps.with_jet(pot.jet_cap));

    pk.g.assign(n * n, Section(n, gcaps));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            pk.g[i * n + j] = rho.derivative(EvenBlock::z, i).derivative(EvenBlock::zb, j).restricted(gcaps);

    std::string offending;
    try {
        pk.ginv = detail::invert_jet_matrix(pk.g, n, gcaps, &offending);
    } catch (const contract_violation&) {
        throw contract_violation("degenerate metric at origin, g(0) = " + offending);
    }

    pk.omega.assign(n * n, Section(n, gcaps));
    pk.poisson.n = n;
    pk.poisson.jet = gcaps.jet;
    pk.poisson.w.assign(n * n, Section(n, gcaps));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            pk.omega[i * n + j] = GRat::i() * pk.g[i * n + j];
            // omega^{i jbar} omega_{k jbar} = -delta_{ik}: w = i * (g^{-1})^T
            pk.poisson.w[i * n + j] = GRat::i() * pk.ginv[j * n + i];
        }

    // Gamma^l_{ik} = g^{l mbar} d_{z_i} g_{k mbar}, with g^{l mbar} = ginv[m][l]
    Caps ccaps = caps.with_jet(pot.jet_cap - 3);
    pk.gamma.assign(n * n * n, Section(n, ccaps));
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                Section s(n, ccaps);
                for (int m = 0; m < n; ++m)
                    s += mul(pk.ginv[m * n + l].restricted(ccaps),
                             pk.g[k * n + m].derivative(EvenBlock::z, i).restricted(ccaps));
                pk.gamma[(l * n + i) * n + k] = std::move(s);
            }

    // R^l_{i jbar k} = -d_{zb_j} Gamma^l_{ik}
    Caps rcaps = caps.with_jet(pot.jet_cap - 4);
    pk.curv.assign(n * n * n * n, Section(n, rcaps));
    pk.curv_low.assign(n * n * n * n, Section(n, rcaps));
    if (pot.jet_cap >= 4) {
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        pk.curv[((l * n + i) * n + j) * n + k] =
                            -pk.gamma_at(l, i, k).derivative(EvenBlock::zb, j).restricted(rcaps);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        Section s(n, rcaps);
                        for (int m = 0; m < n; ++m)
                            s += mul(pk.curv_at(m, i, j, k), pk.g[m * n + l].restricted(rcaps));
                        pk.curv_low[((i * n + j) * n + k) * n + l] = std::move(s);
                    }
    }

    // omega as a form section
    pk.omega_form = Section(n, gcaps);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Monomial m;
            m.odd = Monomial::bit(OddBlock::dz, i) | Monomial::bit(OddBlock::dzb, j);
            Section basis(n, gcaps);
            basis.add(m, GRat::one());
            pk.omega_form += mul(pk.omega[i * n + j], basis);
        }

    // curvature section of the Weyl algebra; the orientation is fixed by the
    // identity nabla^2 = (1/hbar)[r_nabla, -] on fiber generators
    pk.r_nabla = Section(n, rcaps);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Section t = pk.curv_low_at(i, j, k, l);
                    if (t.is_zero()) continue;
                    Monomial m;
                    m.odd = Monomial::bit(OddBlock::dz, i) | Monomial::bit(OddBlock::dzb, j);
                    m.y[k] += 1;
                    m.yb[l] += 1;
                    Section basis(n, rcaps);
                    basis.add(m, -GRat::i());
                    pk.r_nabla += mul(t, basis);
                }
    pk.r_tilde = d_fiber_holo(d_fiber_anti(pk.r_nabla));

    pk.tr_r_plus = Section(n, rcaps);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Section t = pk.curv_at(k, i, j, k);
                if (t.is_zero()) continue;
                Monomial m;
                m.odd = Monomial::bit(OddBlock::dz, i) | Monomial::bit(OddBlock::dzb, j);
                Section basis(n, rcaps);
                basis.add(m, GRat::one());
                pk.tr_r_plus += mul(t, basis);
            }

    // connection coefficient sections
    pk.conn_y.assign(n, Section(n, ccaps));
    pk.conn_yb.assign(n, Section(n, ccaps));
    pk.conn_dy.assign(n, Section(n, ccaps));
    pk.conn_dyb.assign(n, Section(n, ccaps));
    for (int k = 0; k < n; ++k) {
        Section sy(n, ccaps), sdy(n, ccaps);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                Section G = pk.gamma_at(k, i, l);
                if (G.is_zero()) continue;
                sy += mul(G, gen_odd(n, ccaps, OddBlock::dz, i)).even_mul(EvenBlock::y, l);
                sdy += mul(mul(G, gen_odd(n, ccaps, OddBlock::dz, i)), gen_odd(n, ccaps, OddBlock::dy, l));
            }
        pk.conn_y[k] = -sy;
        pk.conn_dy[k] = -sdy;
        pk.conn_yb[k] = pk.conn_y[k].conjugate();
        pk.conn_dyb[k] = pk.conn_dy[k].conjugate();
    }
    return pk;
}

namespace detail {

/// Validity of a covariant derivative: one jet below the input, clamped to
/// the connection jets wherever the connection actually contributes.
inline int nabla_out_jet(const CurvaturePack& pk, const Section& a, const char* who) {
    bool curved = false;
    for (const auto& s : pk.gamma)
        if (!s.is_zero()) curved = true;
    int j = a.caps().jet - 1;
    if (curved) j = std::min(j, pk.gamma_jet());
    if (j < 0) throw jet_underflow(std::string(who) + ": no jet window left", 0);
    return j;
}

} // namespace detail

/// Covariant derivative of a section (Levi-Civita, extended to the fiber
/// generators y, yb, dy, dyb). Consumes one jet order.
inline Section nabla(const CurvaturePack& pk, const Section& a) {
    Caps rc = a.caps().with_jet(detail::nabla_out_jet(pk, a, "nabla"));
    Section r = d_base(a).restricted(rc);
    for (int k = 0; k < pk.n; ++k) {
        r += mul(pk.conn_y[k].restricted(rc), a.derivative(EvenBlock::y, k).restricted(rc));
        r += mul(pk.conn_yb[k].restricted(rc), a.derivative(EvenBlock::yb, k).restricted(rc));
        r += mul(pk.conn_dy[k].restricted(rc), a.odd_derivative(OddBlock::dy, k).restricted(rc));
        r += mul(pk.conn_dyb[k].restricted(rc), a.odd_derivative(OddBlock::dyb, k).restricted(rc));
    }
    return r;
}

/// The (1,0) part of nabla.
inline Section nabla10(const CurvaturePack& pk, const Section& a) {
    Caps rc = a.caps().with_jet(detail::nabla_out_jet(pk, a, "nabla10"));
    Section r = d_base_holo(a).restricted(rc);
    for (int k = 0; k < pk.n; ++k) {
        r += mul(pk.conn_y[k].restricted(rc), a.derivative(EvenBlock::y, k).restricted(rc));
        r += mul(pk.conn_dy[k].restricted(rc), a.odd_derivative(OddBlock::dy, k).restricted(rc));
    }
    return r;
}

/// The (0,1) part of nabla.
inline Section nabla01(const CurvaturePack& pk, const Section& a) {
    Caps rc = a.caps().with_jet(detail::nabla_out_jet(pk, a, "nabla01"));
    Section r = dbar_base(a).restricted(rc);
    for (int k = 0; k < pk.n; ++k) {
        r += mul(pk.conn_yb[k].restricted(rc), a.derivative(EvenBlock::yb, k).restricted(rc));
        r += mul(pk.conn_dyb[k].restricted(rc), a.odd_derivative(OddBlock::dyb, k).restricted(rc));
    }
    return r;
}

/// Exponential of a section all of whose terms carry positive form degree or
/// positive weight; terminates within the caps.
inline Section exp_section(const Section& a) {
    for (const auto& [m, c] : a.terms())
        if (m.form_degree() == 0 && m.weight() <= 0 && m.base_degree() == 0)
            throw contract_violation("exp_section: non-nilpotent constant term");
    Section r = Section::scalar(a.dim(), a.caps(), GRat::one());
    Section pw = Section::scalar(a.dim(), a.caps(), GRat::one());
    Rat kf(1);
    int k = 1;
    for (; k <= 1000; ++k) {
        pw = mul(pw, a);
        if (pw.is_zero()) break;
        kf *= k;
        Section t = pw;
        t.scale(GRat(Rat(1) / kf));
        r += t;
    }
    if (k > 1000) throw contract_violation("exp_section: series did not terminate within caps");
    return r;
}

/// The closed (1,1) form of a potential, normalized so that the form of the
/// metric potential is -omega: i * dbar d (g).
inline Section closed_form_of_potential(const PotentialJet& p, Caps caps) {
    Section g = p.rho.restricted(caps.with_jet(p.jet_cap));
    return GRat::i() * dbar_base(d_base_holo(g));
}

/// alpha as a form section (the hbar >= 1 part of omega_hbar + omega).
inline Section alpha_form(const CurvaturePack& pk, const AlphaJet& alpha) {
    Section r(pk.n, pk.caps);
    int i = 0;
    for (const auto& p : alpha.potentials) {
        ++i;
        if (p.n != pk.n) throw contract_violation("alpha_form: dimension mismatch");
        Section f = closed_form_of_potential(p, pk.caps);
        f.hbar_shift(i);
        r = add_min_jet(r, f);
    }
    return r;
}

/// omega_hbar = -omega + sum_i hbar^i alpha_i: the formal deformation of the
/// Kahler form described by an AlphaJet.
inline Section omega_hbar(const CurvaturePack& pk, const AlphaJet& alpha) {
    return add_min_jet(-pk.omega_form, alpha_form(pk, alpha));
}

namespace detail {

/// Dense rational power series in one variable, for the characteristic
/// class generating functions.
struct PowerSeries {
    std::vector<Rat> c; // c[k] = coefficient of x^k

    static PowerSeries expm1_scaled(int order, const Rat& s) {
        // e^{s x} - 1
        PowerSeries r;
        r.c.assign(order + 1, Rat(0));
        Rat f(1);
        Rat p(1);
        for (int k = 1; k <= order; ++k) {
            f *= k;
            p *= s;
            r.c[k] = p / f;
        }
        return r;
    }
    static PowerSeries x(int order) {
        PowerSeries r;
        r.c.assign(order + 1, Rat(0));
        if (order >= 1) r.c[1] = 1;
        return r;
    }
    PowerSeries mul(const PowerSeries& o) const {
        PowerSeries r;
        r.c.assign(c.size(), Rat(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; i + j < c.size() && j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        return r;
    }
    /// this / o where o has a unit constant term after factoring x^shift.
    PowerSeries div(const PowerSeries& o) const {
        PowerSeries r;
        r.c.assign(c.size(), Rat(0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            Rat acc = c[k];
            for (std::size_t j = 0; j < k; ++j) acc -= r.c[j] * o.c[k - j];
            r.c[k] = acc / o.c[0];
        }
        return r;
    }
    /// log of a series with constant term 1: integrate f'/f.
    PowerSeries log() const {
        PowerSeries d;
        d.c.assign(c.size(), Rat(0));
        for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = c[k] * int(k);
        PowerSeries q = d.div(*this);
        PowerSeries r;
        r.c.assign(c.size(), Rat(0));
        for (std::size_t k = 1; k < c.size(); ++k) r.c[k] = q.c[k - 1] / int(k);
        return r;
    }
};

/// Coefficients of log(x / (1 - e^{-x})) up to x^order.
inline PowerSeries log_todd_series(int order) {
    PowerSeries num = PowerSeries::x(order + 1);
    PowerSeries den = PowerSeries::expm1_scaled(order + 1, Rat(-1)); // e^{-x} - 1
    for (auto& v : den.c) v = -v;                                    // 1 - e^{-x}
    // both vanish to first order; divide out one x
    PowerSeries num1, den1;
    num1.c.assign(order + 1, Rat(0));
    den1.c.assign(order + 1, Rat(0));
    for (int k = 0; k <= order; ++k) {
        num1.c[k] = num.c[k + 1];
        den1.c[k] = den.c[k + 1];
    }
    return num1.div(den1).log();
}

/// Coefficients of log(x / (e^{x/2} - e^{-x/2})) up to x^order (even series).
inline PowerSeries log_ahat_series(int order) {
    PowerSeries num = PowerSeries::x(order + 1);
    PowerSeries a = PowerSeries::expm1_scaled(order + 1, Rat(1, 2));
    PowerSeries b = PowerSeries::expm1_scaled(order + 1, Rat(-1, 2));
    PowerSeries den;
    den.c.assign(order + 2, Rat(0));
    for (int k = 0; k <= order + 1; ++k) den.c[k] = a.c[k] - b.c[k];
    PowerSeries num1, den1;
    num1.c.assign(order + 1, Rat(0));
    den1.c.assign(order + 1, Rat(0));
    for (int k = 0; k <= order; ++k) {
        num1.c[k] = num.c[k + 1];
        den1.c[k] = den.c[k + 1];
    }
    return num1.div(den1).log();
}

} // namespace detail

/// Characteristic class forms of the chart geometry through form degree
/// 2*order, evaluated on the holomorphic tangent curvature by power sums.
/// The matrix argument of both generating functions is oriented so that the
/// multiplicative identity Td = Ahat * exp(-Tr/2) holds.
struct CharClasses {
    Section ahat;
    Section todd;
};

inline CharClasses char_classes(const CurvaturePack& pk, int order) {
    const int n = pk.n;
    if (pk.curv_jet() < 0) throw jet_underflow("char_classes: curvature jets unavailable", 4);
    Caps caps = pk.caps.with_jet(pk.curv_jet());

    // N[a][b] = -(R+)^a_b = -sum_{ij} R^a_{i jbar b} dz^i dzb^j
    std::vector<Section> N(n * n, Section(n, caps));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Section s(n, caps);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Section t = pk.curv_at(a, i, j, b);
                    if (t.is_zero()) continue;
                    Monomial m;
                    m.odd = Monomial::bit(OddBlock::dz, i) | Monomial::bit(OddBlock::dzb, j);
                    Section basis(n, caps);
                    basis.add(m, -GRat::one());
                    s += mul(t, basis);
                }
            N[a * n + b] = std::move(s);
        }

    // power sums tr(N^k), nonzero only for 2k <= 2*order
    std::vector<Section> traces(order + 1, Section(n, caps));
    std::vector<Section> pw = N;
    for (int k = 1; k <= order; ++k) {
        if (k > 1) {
            std::vector<Section> nx(n * n, Section(n, caps));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c) nx[a * n + b] += mul(pw[a * n + c], N[c * n + b]);
            pw = std::move(nx);
        }
        Section tr(n, caps);
        for (int a = 0; a < n; ++a) tr += pw[a * n + a];
        traces[k] = std::move(tr);
    }

    auto assemble = [&](const detail::PowerSeries& logf) {
        Section acc(n, caps);
        for (int k = 1; k <= order; ++k) {
            if (logf.c[k] == 0) continue;
            Section t = traces[k];
            t.scale(GRat(logf.c[k]));
            acc += t;
        }
        return exp_section(acc);
    };
    CharClasses cc;
    cc.todd = assemble(detail::log_todd_series(order));
    cc.ahat = assemble(detail::log_ahat_series(order));
    return cc;
}

} // namespace fdq
