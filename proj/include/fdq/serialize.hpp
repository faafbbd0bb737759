#pragma once

#include <string>

#include <json.hpp>

#include "fdq/section.hpp"

namespace fdq {

using Json = nlohmann::ordered_json;

/// Human-readable monomial, e.g. "h^2 z1^2 zb2 y1 dz1 dyb2"; "1" when empty.
inline std::string to_string(const Monomial& m, int n) {
    std::string s;
    auto put = [&](const std::string& name, int e) {
        if (e == 0) return;
        if (!s.empty()) s += ' ';
        s += name;
        if (e != 1) s += '^' + std::to_string(e);
    };
    if (m.hbar != 0) put("h", m.hbar);
    const char* even_names[4] = {"z", "zb", "y", "yb"};
    for (int b = 0; b < 4; ++b)
        for (int i = 0; i < n; ++i) put(even_names[b] + std::to_string(i + 1), m.exp(static_cast<EvenBlock>(b), i));
    const char* odd_names[4] = {"dz", "dzb", "dy", "dyb"};
    for (int b = 0; b < 4; ++b)
        for (int i = 0; i < n; ++i)
            if (m.has_odd(static_cast<OddBlock>(b), i)) put(odd_names[b] + std::to_string(i + 1), 1);
    return s.empty() ? "1" : s;
}

/// Multi-line canonical text form of a section, terms in canonical monomial
/// order (hbar, then even exponent blocks z, zb, y, yb lexicographically,
/// then the odd word), one "coefficient * monomial" per line.
inline std::string to_string(const Section& s) {
    if (s.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : s.terms()) {
        if (!out.empty()) out += '\n';
        out += "(" + to_string(c) + ") " + to_string(m, s.dim());
    }
    return out;
}

inline Json to_json(const Monomial& m, int n) {
    Json j;
    j["h"] = m.hbar;
    auto arr = [&](const std::uint8_t* p) {
        Json a = Json::array();
        for (int i = 0; i < n; ++i) a.push_back(int(p[i]));
        return a;
    };
    j["z"] = arr(m.z.data());
    j["zb"] = arr(m.zb.data());
    j["y"] = arr(m.y.data());
    j["yb"] = arr(m.yb.data());
    auto idx = [&](OddBlock b) {
        Json a = Json::array();
        for (int i = 0; i < n; ++i)
            if (m.has_odd(b, i)) a.push_back(i + 1);
        return a;
    };
    j["dz"] = idx(OddBlock::dz);
    j["dzb"] = idx(OddBlock::dzb);
    j["dy"] = idx(OddBlock::dy);
    j["dyb"] = idx(OddBlock::dyb);
    return j;
}

inline Monomial monomial_from_json(const Json& j, int n) {
    Monomial m;
    m.hbar = static_cast<std::int16_t>(j.at("h").get<int>());
    auto rd = [&](const char* key, EvenBlock b) {
        const auto& a = j.at(key);
        if (int(a.size()) != n) throw validation_error("monomial: bad exponent arity");
        for (int i = 0; i < n; ++i) m.exp(b, i) = static_cast<std::uint8_t>(a[i].get<int>());
    };
    rd("z", EvenBlock::z);
    rd("zb", EvenBlock::zb);
    rd("y", EvenBlock::y);
    rd("yb", EvenBlock::yb);
    auto rdo = [&](const char* key, OddBlock b) {
        for (const auto& v : j.at(key)) {
            int i = v.get<int>();
            if (i < 1 || i > n) throw validation_error("monomial: odd index out of range");
            m.odd |= Monomial::bit(b, i - 1);
        }
    };
    rdo("dz", OddBlock::dz);
    rdo("dzb", OddBlock::dzb);
    rdo("dy", OddBlock::dy);
    rdo("dyb", OddBlock::dyb);
    return m;
}

inline Json to_json(const Section& s) {
    Json j;
    j["n"] = s.dim();
    j["caps"] = {{"weight", s.caps().weight}, {"jet", s.caps().jet}, {"form", s.caps().form}};
    Json terms = Json::array();
    for (const auto& [m, c] : s.terms()) terms.push_back({{"m", to_json(m, s.dim())}, {"c", to_string(c)}});
    j["terms"] = std::move(terms);
    return j;
}

inline Section section_from_json(const Json& j) {
    int n = j.at("n").get<int>();
    Caps caps{j.at("caps").at("weight").get<int>(), j.at("caps").at("jet").get<int>(),
              j.at("caps").at("form").get<int>()};
    Section s(n, caps);
    for (const auto& t : j.at("terms")) s.add(monomial_from_json(t.at("m"), n), parse_grat(t.at("c").get<std::string>()));
    return s;
}

} // namespace fdq
