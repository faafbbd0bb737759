#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "fdq/monomial.hpp"
#include "fdq/rational.hpp"

namespace fdq {

/// Truncation caps. weight and form are quotient-ring caps (degrees add under
/// multiplication, so dropping everything above them is exact). jet is a
/// validity order: coefficients of base degree <= jet are exact, higher ones
/// are not stored; base derivatives lower it by one.
struct Caps {
    int weight = 1 << 20;
    int jet = 1 << 20;
    int form = 1 << 20;

    bool admits(const Monomial& m) const {
        return m.weight() <= weight && m.base_degree() <= jet && m.form_degree() <= form;
    }
    bool operator==(const Caps&) const = default;

    Caps with_jet(int j) const { return {weight, j, form}; }
    Caps with_weight(int w) const { return {w, jet, form}; }
    Caps with_form(int f) const { return {weight, jet, f}; }
};

/// A graded formal series over Q(i), truncated by Caps: the universal carrier
/// for sections of the (complexified) Weyl algebra and its fiberwise-form
/// extension on a chart of dimension n. Zero coefficients are never stored;
/// term order is the canonical Monomial order, so iteration is deterministic.
class Section {
  public:
    using Terms = std::map<Monomial, GRat>;

    Section() = default;
    Section(int n, Caps caps) : n_(n), caps_(caps) {
        if (n < 1 || n > kMaxDim) throw contract_violation("Section: dimension out of range");
    }

    int dim() const { return n_; }
    const Caps& caps() const { return caps_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    static Section scalar(int n, Caps caps, const GRat& c) {
        Section s(n, caps);
        s.add(Monomial{}, c);
        return s;
    }

    void add(const Monomial& m, const GRat& c) {
        if (c.is_zero() || !caps_.admits(m)) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    GRat coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? GRat{} : it->second;
    }

    Section& operator+=(const Section& o) {
        require_same_shape(o, "operator+=");
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    Section& operator-=(const Section& o) {
        require_same_shape(o, "operator-=");
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    friend Section operator+(Section a, const Section& b) { return a += b; }
    friend Section operator-(Section a, const Section& b) { return a -= b; }
    friend Section operator-(const Section& a) {
        Section r(a.n_, a.caps_);
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Section& scale(const GRat& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend Section operator*(const GRat& c, Section s) { return s.scale(c); }

    bool operator==(const Section& o) const {
        return n_ == o.n_ && terms_ == o.terms_;
    }

    /// Graded-commutative product. Requires equal dimension and weight/form
    /// caps; the jet validity of the result is the minimum of the two inputs.
    friend Section mul(const Section& a, const Section& b) {
        a.require_same_shape(b, "mul");
        Section r(a.n_, a.caps_.with_jet(std::min(a.caps_.jet, b.caps_.jet)));
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                int sign = odd_product_sign(ma.odd, mb.odd);
                if (sign == 0) continue;
                Monomial m = ma;
                bool overflow = false;
                for (int i = 0; i < a.n_; ++i) {
                    m.z[i] += mb.z[i];
                    m.zb[i] += mb.zb[i];
                    m.y[i] += mb.y[i];
                    m.yb[i] += mb.yb[i];
                    if (m.z[i] > 200 || m.zb[i] > 200 || m.y[i] > 200 || m.yb[i] > 200)
                        overflow = true;
                }
                if (overflow) throw contract_violation("mul: exponent overflow");
                m.odd |= mb.odd;
                m.hbar = static_cast<std::int16_t>(m.hbar + mb.hbar);
                if (!r.caps_.admits(m)) continue;
                GRat c = ca * cb;
                if (sign < 0) c = -c;
                r.add(m, c);
            }
        }
        return r;
    }

    /// Multiply by hbar^k in place (k may be negative).
    Section& hbar_shift(int k) {
        Terms moved;
        for (auto& [m, c] : terms_) {
            Monomial mm = m;
            mm.hbar = static_cast<std::int16_t>(mm.hbar + k);
            if (caps_.admits(mm)) moved.emplace(mm, std::move(c));
        }
        terms_ = std::move(moved);
        return *this;
    }

    /// Partial derivative in an even generator (z_i, zb_i, y_i or yb_i).
    /// Base derivatives reduce the jet validity by one.
    Section derivative(EvenBlock b, int i) const {
        bool base = (b == EvenBlock::z || b == EvenBlock::zb);
        Section r(n_, base ? caps_.with_jet(caps_.jet - 1) : caps_);
        for (const auto& [m, c] : terms_) {
            int e = m.exp(b, i);
            if (e == 0) continue;
            Monomial mm = m;
            mm.exp(b, i) = static_cast<std::uint8_t>(e - 1);
            r.add(mm, GRat(Rat(e)) * c);
        }
        return r;
    }

    /// Left derivative in the odd generator (block, i).
    Section odd_derivative(OddBlock b, int i) const {
        Section r(n_, caps_);
        int p = Monomial::bitpos(b, i);
        for (const auto& [m, c] : terms_) {
            if (!(m.odd >> p & 1)) continue;
            Monomial mm = m;
            mm.odd &= ~(1u << p);
            int s = odd_passage_sign(mm.odd, p);
            r.add(mm, s < 0 ? -c : c);
        }
        return r;
    }

    /// Left wedge by the odd generator (block, i).
    Section odd_wedge(OddBlock b, int i) const {
        Section r(n_, caps_);
        int p = Monomial::bitpos(b, i);
        for (const auto& [m, c] : terms_) {
            if (m.odd >> p & 1) continue;
            Monomial mm = m;
            mm.odd |= 1u << p;
            int s = odd_passage_sign(m.odd, p);
            r.add(mm, s < 0 ? -c : c);
        }
        return r;
    }

    /// Multiply every term's even exponent up: z_i^k etc.
    Section even_mul(EvenBlock b, int i, int k = 1) const {
        Section r(n_, caps_);
        for (const auto& [m, c] : terms_) {
            Monomial mm = m;
            mm.exp(b, i) = static_cast<std::uint8_t>(mm.exp(b, i) + k);
            r.add(mm, c);
        }
        return r;
    }

    /// Keep only terms selected by the predicate.
    Section filtered(const std::function<bool(const Monomial&)>& keep) const {
        Section r(n_, caps_);
        for (const auto& [m, c] : terms_)
            if (keep(m)) r.terms_.emplace(m, c);
        return r;
    }

    /// Re-truncate to (componentwise) tighter caps.
    Section restricted(Caps caps) const {
        Section r(n_, caps);
        for (const auto& [m, c] : terms_)
            if (caps.admits(m)) r.terms_.emplace(m, c);
        return r;
    }

    /// Swap z<->zb, y<->yb, dz<->dzb, dy<->dyb and conjugate coefficients.
    Section conjugate() const {
        Section r(n_, caps_);
        for (const auto& [m, c] : terms_) {
            Monomial mm;
            mm.z = m.zb;
            mm.zb = m.z;
            mm.y = m.yb;
            mm.yb = m.y;
            mm.hbar = m.hbar;
            mm.odd = (m.mask(OddBlock::dzb) << 0) | (m.mask(OddBlock::dz) << 4) |
                     (m.mask(OddBlock::dyb) << 8) | (m.mask(OddBlock::dy) << 12);
            // conjugation maps generator bit p to p^4; re-sorting the image
            // sequence into canonical order costs its inversion parity
            int pos[16];
            int k = 0;
            for (int p = 0; p < 16; ++p)
                if (m.odd >> p & 1) pos[k++] = p ^ 4;
            int inv = 0;
            for (int u = 0; u < k; ++u)
                for (int v = u + 1; v < k; ++v)
                    if (pos[u] > pos[v]) ++inv;
            GRat cc = c.conj();
            r.add(mm, (inv & 1) ? -cc : cc);
        }
        return r;
    }

    /// Coefficient-wise evaluation at the chart origin of the base variables:
    /// keeps only terms with z = zb = 0.
    Section at_origin() const {
        return filtered([](const Monomial& m) { return m.base_degree() == 0; });
    }

  private:
    void require_same_shape(const Section& o, const char* who) const {
        if (n_ != o.n_) throw contract_violation(std::string(who) + ": dimension mismatch");
        if (caps_.weight != o.caps_.weight || caps_.form != o.caps_.form)
            throw contract_violation(std::string(who) + ": cap mismatch");
    }

    int n_ = 1;
    Caps caps_{};
    Terms terms_;
};

/// Add sections whose jet validities may differ: the sum carries the minimum.
inline Section add_min_jet(const Section& a, const Section& b) {
    int j = std::min(a.caps().jet, b.caps().jet);
    Caps c = a.caps().with_jet(j);
    Section r = a.restricted(c);
    r += b.restricted(c);
    return r;
}

namespace detail {

inline std::pair<Section, Section> parity_split(const Section& a) {
    Section even(a.dim(), a.caps()), odd(a.dim(), a.caps());
    for (const auto& [m, c] : a.terms()) (m.is_odd() ? odd : even).add(m, c);
    return {even, odd};
}

} // namespace detail

/// Convenience: the generator sections.
inline Section gen_even(int n, Caps caps, EvenBlock b, int i) {
    Section s(n, caps);
    Monomial m;
    m.exp(b, i) = 1;
    s.add(m, GRat::one());
    return s;
}
inline Section gen_odd(int n, Caps caps, OddBlock b, int i) {
    Section s(n, caps);
    Monomial m;
    m.odd = Monomial::bit(b, i);
    s.add(m, GRat::one());
    return s;
}
inline Section gen_hbar(int n, Caps caps, int k = 1) {
    Section s(n, caps);
    Monomial m;
    m.hbar = static_cast<std::int16_t>(k);
    s.add(m, GRat::one());
    return s;
}

} // namespace fdq
