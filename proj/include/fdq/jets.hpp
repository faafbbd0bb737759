#pragma once

#include <string>
#include <vector>

#include "fdq/serialize.hpp"

namespace fdq {

/// Taylor coefficients of a Kahler potential at the chart origin,
/// rho = sum rho_{a,b} z^a zb^b, stored as a base-only section. The geometric
/// input of the whole engine.
struct PotentialJet {
    int n = 1;
    int jet_cap = 0;
    Section rho;

    /// Reality: rho_{b,a} = conj(rho_{a,b}).
    bool is_real() const { return rho.conjugate() == rho; }
};

inline PotentialJet make_potential(int n, int jet_cap, Section rho) {
    PotentialJet p{n, jet_cap, std::move(rho)};
    if (!p.is_real()) throw validation_error("potential jet is not real");
    for (const auto& [m, c] : p.rho.terms())
        if (m.deg_y() || m.deg_yb() || m.odd || m.hbar)
            throw validation_error("potential jet carries non-base generators");
    return p;
}

/// Flat chart potential sum_i z_i zb_i.
inline PotentialJet potential_flat(int n, int jet_cap) {
    Section rho(n, Caps{1 << 20, jet_cap, 0});
    for (int i = 0; i < n; ++i) {
        Monomial m;
        m.z[i] = 1;
        m.zb[i] = 1;
        rho.add(m, GRat::one());
    }
    return make_potential(n, jet_cap, std::move(rho));
}

/// Fubini-Study potential log(1 + z zb) on a one-dimensional chart,
/// expanded through the requested jet order: sum_k (-1)^{k+1} (z zb)^k / k.
inline PotentialJet potential_fubini_study(int jet_cap) {
    Section rho(1, Caps{1 << 20, jet_cap, 0});
    for (int k = 1; 2 * k <= jet_cap; ++k) {
        Monomial m;
        m.z[0] = static_cast<std::uint8_t>(k);
        m.zb[0] = static_cast<std::uint8_t>(k);
        rho.add(m, GRat(Rat((k % 2) ? 1 : -1, k)));
    }
    return make_potential(1, jet_cap, std::move(rho));
}

inline Json to_json(const PotentialJet& p) {
    Json j;
    j["n"] = p.n;
    j["jet_cap"] = p.jet_cap;
    Json terms = Json::array();
    for (const auto& [m, c] : p.rho.terms()) {
        Json t;
        Json a = Json::array(), b = Json::array();
        for (int i = 0; i < p.n; ++i) a.push_back(int(m.z[i]));
        for (int i = 0; i < p.n; ++i) b.push_back(int(m.zb[i]));
        t["a"] = std::move(a);
        t["b"] = std::move(b);
        t["re"] = detail::rat_str(c.re);
        t["im"] = detail::rat_str(c.im);
        terms.push_back(std::move(t));
    }
    j["rho"] = std::move(terms);
    return j;
}

inline PotentialJet potential_from_json(const Json& j) {
    int n, jet_cap;
    try {
        n = j.at("n").get<int>();
        jet_cap = j.at("jet_cap").get<int>();
    } catch (const std::exception& e) {
        throw validation_error(std::string("potential schema: ") + e.what());
    }
    if (n < 1 || n > kMaxDim) throw validation_error("potential schema: n out of range");
    Section rho(n, Caps{1 << 20, jet_cap, 0});
    try {
        for (const auto& t : j.at("rho")) {
            Monomial m;
            const auto& a = t.at("a");
            const auto& b = t.at("b");
            if (int(a.size()) != n || int(b.size()) != n)
                throw validation_error("potential schema: bad multi-index arity");
            for (int i = 0; i < n; ++i) m.z[i] = static_cast<std::uint8_t>(a[i].get<int>());
            for (int i = 0; i < n; ++i) m.zb[i] = static_cast<std::uint8_t>(b[i].get<int>());
            GRat c{Rat(t.at("re").get<std::string>()), Rat(t.value("im", std::string("0")))};
            rho.add(m, c);
        }
    } catch (const validation_error&) {
        throw;
    } catch (const std::exception& e) {
        throw validation_error(std::string("potential schema: ") + e.what());
    }
    return make_potential(n, jet_cap, std::move(rho));
}

/// Resolve "flat" / "fubini-study" preset names at a given dimension/order.
inline PotentialJet potential_preset(const std::string& name, int n, int jet_cap) {
    if (name == "flat") return potential_flat(n, jet_cap);
    if (name == "fubini-study") {
        if (n != 1) throw validation_error("fubini-study preset is one-dimensional");
        return potential_fubini_study(jet_cap);
    }
    throw validation_error("unknown potential preset '" + name + "'");
}

/// Formal (1,1)-class representative given through potentials:
/// alpha = sum_{i>=1} hbar^i alpha_i with alpha_i the closed (1,1) form of
/// potentials[i-1]. Each alpha_i is closed by construction.
struct AlphaJet {
    std::vector<PotentialJet> potentials;

    bool empty() const { return potentials.empty(); }
};

inline Json to_json(const AlphaJet& a) {
    Json j = Json::array();
    for (const auto& p : a.potentials) j.push_back(to_json(p));
    return j;
}

inline AlphaJet alpha_from_json(const Json& j) {
    AlphaJet a;
    for (const auto& p : j) a.potentials.push_back(potential_from_json(p));
    return a;
}

} // namespace fdq
