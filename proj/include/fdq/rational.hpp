#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

#include "fdq/error.hpp"

namespace fdq {

/// Exact rational scalar. GMP-backed; always stored in canonical reduced
/// form with positive denominator.
using Rat = boost::multiprecision::mpq_rational;

/// Element of Q(i): re + im*sqrt(-1). All engine coefficients live here;
/// there is no floating point anywhere.
struct GaussianRational {
    Rat re{0};
    Rat im{0};

    GaussianRational() = default;
    GaussianRational(long n) : re(n) {}
    GaussianRational(const Rat& r) : re(r) {}
    GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return GaussianRational(1); }
    /// sqrt(-1)
    static GaussianRational i() { return {Rat(0), Rat(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rat r = re * o.re - im * o.im;
        Rat i2 = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i2);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rat n = o.re * o.re + o.im * o.im;
        if (n == 0) throw contract_violation("GaussianRational: division by zero");
        Rat r = (re * o.re + im * o.im) / n;
        Rat i2 = (im * o.re - re * o.im) / n;
        re = std::move(r);
        im = std::move(i2);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

using GRat = GaussianRational;

inline GRat gr(long p, long q = 1) { return GRat(Rat(p, q)); }

namespace detail {

inline std::string rat_str(const Rat& r) { return r.str(); }

} // namespace detail

/// Canonical text form: "p/q" for real values, "p/q+r/s*i" otherwise
/// (minus signs folded into the numerators, denominators omitted when 1).
inline std::string to_string(const GRat& c) {
    if (c.im == 0) return detail::rat_str(c.re);
    std::string s;
    if (c.re != 0) s += detail::rat_str(c.re);
    std::string ims = detail::rat_str(c.im);
    if (c.re != 0 && ims[0] != '-') s += "+";
    s += ims + "*i";
    return s;
}

/// Parse the canonical text form produced by to_string. Accepts "p/q",
/// "r/s*i" and "p/q+r/s*i" (with either sign on the imaginary part).
inline GRat parse_grat(const std::string& text) {
    if (text.empty()) throw validation_error("empty rational literal");
    auto parse_rat = [](std::string s) -> Rat {
        if (!s.empty() && s[0] == '+') s.erase(0, 1);
        try {
            return Rat(s);
        } catch (...) {
            throw validation_error("bad rational literal '" + s + "'");
        }
    };
    // split at the sign that separates re from im (skip a leading sign)
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < text.size(); ++k) {
        if (text[k] == '+' || text[k] == '-') split = k;
    }
    auto strip_i = [&](std::string s) -> std::string {
        if (s.size() >= 2 && s.substr(s.size() - 2) == "*i") return s.substr(0, s.size() - 2);
        if (!s.empty() && s.back() == 'i') {
            s.pop_back();
            if (s.empty() || s == "-" || s == "+") s += "1";
            return s;
        }
        return s;
    };
    bool has_i = text.find('i') != std::string::npos;
    if (!has_i) return GRat(parse_rat(text));
    if (split == std::string::npos || text.find('i') < split)
        return GRat(Rat(0), parse_rat(strip_i(text)));
    return GRat(parse_rat(text.substr(0, split)), parse_rat(strip_i(text.substr(split))));
}

} // namespace fdq
