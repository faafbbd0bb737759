#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>

#include "fdq/error.hpp"

namespace fdq {

/// Maximum chart dimension supported by the fixed-size monomial layout.
constexpr int kMaxDim = 4;

/// Blocks of odd generators in canonical order:
/// dz^1<..<dz^n < dzb^1<..<dzb^n < dy^1<..<dy^n < dyb^1<..<dyb^n.
/// The stored coefficient of a monomial is relative to this ascending order.
enum class OddBlock : int { dz = 0, dzb = 1, dy = 2, dyb = 3 };

/// Families of even (commuting) generators.
enum class EvenBlock : int { z = 0, zb = 1, y = 2, yb = 3 };

/// One monomial in the chart algebra: commuting powers of z, zb, y, yb and
/// hbar, plus a square-free word of odd generators (dz, dzb, dy, dyb).
/// hbar is signed; negative powers occur only in the final index-density
/// assembly, never inside the Weyl algebra proper.
struct Monomial {
    std::array<std::uint8_t, kMaxDim> z{}, zb{}, y{}, yb{};
    std::uint32_t odd = 0; // bits [4b, 4b+n): block b per OddBlock
    std::int16_t hbar = 0;

    static constexpr std::uint32_t bit(OddBlock b, int i) {
        return 1u << (4 * static_cast<int>(b) + i);
    }
    static constexpr int bitpos(OddBlock b, int i) { return 4 * static_cast<int>(b) + i; }

    bool has_odd(OddBlock b, int i) const { return odd & bit(b, i); }
    std::uint32_t mask(OddBlock b) const { return (odd >> (4 * static_cast<int>(b))) & 0xFu; }

    std::uint8_t& exp(EvenBlock b, int i) {
        switch (b) {
            case EvenBlock::z: return z[i];
            case EvenBlock::zb: return zb[i];
            case EvenBlock::y: return y[i];
            default: return yb[i];
        }
    }
    std::uint8_t exp(EvenBlock b, int i) const {
        switch (b) {
            case EvenBlock::z: return z[i];
            case EvenBlock::zb: return zb[i];
            case EvenBlock::y: return y[i];
            default: return yb[i];
        }
    }

    int deg_z() const { return z[0] + z[1] + z[2] + z[3]; }
    int deg_zb() const { return zb[0] + zb[1] + zb[2] + zb[3]; }
    int deg_y() const { return y[0] + y[1] + y[2] + y[3]; }
    int deg_yb() const { return yb[0] + yb[1] + yb[2] + yb[3]; }

    /// Total (z, zb)-degree: the jet order this monomial lives at.
    int base_degree() const { return deg_z() + deg_zb(); }
    /// Number of odd generators.
    int form_degree() const { return std::popcount(odd); }
    /// Fiber weight: y, yb, dy, dyb weigh 1 and hbar weighs 2. On sections of
    /// the Weyl algebra (no dy/dyb) this is the usual weight deg_y+deg_yb+2k.
    int weight() const {
        return deg_y() + deg_yb() + std::popcount(odd >> 8) + 2 * hbar;
    }
    /// Parity of the monomial: odd iff it carries an odd number of odd generators.
    bool is_odd() const { return std::popcount(odd) & 1; }

    bool operator==(const Monomial&) const = default;
    auto operator<=>(const Monomial& o) const {
        if (auto c = hbar <=> o.hbar; c != 0) return c;
        if (auto c = z <=> o.z; c != 0) return c;
        if (auto c = zb <=> o.zb; c != 0) return c;
        if (auto c = y <=> o.y; c != 0) return c;
        if (auto c = yb <=> o.yb; c != 0) return c;
        return odd <=> o.odd;
    }
};

namespace sign_detail {

/// Parity of #{(i, j) : i in a, j in b, i > j}; the Koszul sign of merging
/// two ascending odd words a, b into one ascending word is (-1)^that.
inline int merge_inversions(std::uint32_t a, std::uint32_t b) {
    int inv = 0;
    while (b) {
        std::uint32_t lo = b & -b;
        int p = std::countr_zero(lo);
        inv += std::popcount(a >> (p + 1));
        b ^= lo;
    }
    return inv;
}

} // namespace sign_detail

/// Sign of the odd-word product a*b, or 0 if they overlap.
inline int odd_product_sign(std::uint32_t a, std::uint32_t b) {
    if (a & b) return 0;
    return (sign_detail::merge_inversions(a, b) & 1) ? -1 : 1;
}

/// Koszul sign of removing (left derivative) or inserting (left wedge) the
/// generator at global bit position p from/into the ascending word w: the
/// generator passes every present generator of smaller order.
inline int odd_passage_sign(std::uint32_t w, int p) {
    return (std::popcount(w & ((1u << p) - 1)) & 1) ? -1 : 1;
}

} // namespace fdq
