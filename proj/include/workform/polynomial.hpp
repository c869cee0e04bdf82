#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "workform/rational.hpp"
#include "workform/scalar_expr.hpp"

namespace workform {

/// Canonical sparse polynomial: monomial exponent vector (trailing zeros
/// trimmed) -> exact rational coefficient. Two polynomials over any ambient
/// dimension are equal iff their maps are identical.
class Polynomial {
  public:
    using Monomial = std::vector<unsigned>;
    using TermMap = std::map<Monomial, Rational>;

    Polynomial() = default;

    static Polynomial constant(Rational c) {
        Polynomial p;
        if (c != 0) p.terms_[{}] = std::move(c);
        return p;
    }

    static Polynomial variable(int index) {
        Polynomial p;
        Monomial m(static_cast<std::size_t>(index) + 1, 0);
        m[index] = 1;
        p.terms_[std::move(m)] = 1;
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    Rational constant_term() const {
        auto it = terms_.find({});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int nvars() const {
        std::size_t m = 0;
        for (const auto& [mono, c] : terms_) m = std::max(m, mono.size());
        return static_cast<int>(m);
    }

    void add_term(Monomial m, const Rational& c) {
        if (c == 0) return;
        while (!m.empty() && m.back() == 0) m.pop_back();
        auto [it, inserted] = terms_.emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(std::max(ma.size(), mb.size()), 0);
                for (std::size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
                for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
                r.add_term(std::move(m), ca * cb);
            }
        }
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }

    Polynomial pow(std::uint64_t e) const {
        Polynomial acc = constant(1);
        Polynomial b = *this;
        while (e) {
            if (e & 1) acc = acc * b;
            if (e >>= 1) b = b * b;
        }
        return acc;
    }

    Polynomial differentiate(int axis) const {
        Polynomial r;
        for (const auto& [m, c] : terms_) {
            if (static_cast<int>(m.size()) <= axis || m[axis] == 0) continue;
            Monomial d = m;
            Rational k(d[axis]);
            d[axis] -= 1;
            r.add_term(std::move(d), c * k);
        }
        return r;
    }

    /// Substitutes x_i -> center[i] + t * (x_i - center[i]) for the first
    /// nvars variables; t becomes the variable with index nvars.
    Polynomial homotopy_substitute(const std::vector<Rational>& center, int nvars) const {
        std::vector<Polynomial> lines;
        lines.reserve(center.size());
        Polynomial t = variable(nvars);
        for (int i = 0; i < nvars; ++i) {
            Polynomial line = constant(center[i]) +
                              t * (variable(i) - constant(center[i]));
            lines.push_back(std::move(line));
        }
        Polynomial r;
        for (const auto& [m, c] : terms_) {
            Polynomial term = constant(c);
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (static_cast<int>(i) >= nvars)
                    throw Error("internal: homotopy substitution past ambient dimension");
                term = term * lines[i].pow(m[i]);
            }
            r = r + term;
        }
        return r;
    }

    /// Multiplies by var^e.
    Polynomial times_var_power(int var, unsigned e) const {
        if (e == 0) return *this;
        Polynomial r;
        for (const auto& [m, c] : terms_) {
            Monomial mm = m;
            if (mm.size() <= static_cast<std::size_t>(var)) mm.resize(var + 1, 0);
            mm[var] += e;
            r.add_term(std::move(mm), c);
        }
        return r;
    }

    /// Definite integral over [0, 1] in the given variable, termwise exact:
    /// c * var^p -> c / (p + 1), the variable disappears.
    Polynomial integrate_unit_in_var(int var) const {
        Polynomial r;
        for (const auto& [m, c] : terms_) {
            unsigned p = static_cast<std::size_t>(var) < m.size() ? m[var] : 0;
            Monomial mm = m;
            if (static_cast<std::size_t>(var) < mm.size()) mm[var] = 0;
            r.add_term(std::move(mm), c / Rational(p + 1));
        }
        return r;
    }

    Rational evaluate_rational(const std::vector<Rational>& point) const {
        Rational s(0);
        for (const auto& [m, c] : terms_) {
            Rational term = c;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (i >= point.size()) throw Error("internal: point too short for polynomial");
                term *= rational_pow(point[i], m[i]);
            }
            s += term;
        }
        return s;
    }

    ScalarExpr to_expr() const {
        std::vector<ScalarExpr> terms;
        terms.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            std::vector<ScalarExpr> factors;
            factors.push_back(ScalarExpr::constant(c));
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                factors.push_back(pow(ScalarExpr::variable(static_cast<int>(i)),
                                      Rational(m[i])));
            }
            terms.push_back(detail::make_product(std::move(factors)));
        }
        return detail::make_sum(std::move(terms));
    }

  private:
    TermMap terms_;
};

/// Polynomial normal form, or nullopt when the expression is not a
/// polynomial (exp/ln/quadrature nodes, fractional or negative variable
/// powers). Constant bases with integer exponents fold exactly.
inline std::optional<Polynomial> normalize_polynomial(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant:
            return Polynomial::constant(e.constant_value());
        case Kind::Variable:
            return Polynomial::variable(e.variable_index());
        case Kind::Sum: {
            Polynomial r;
            for (const auto& t : e.operands()) {
                auto p = normalize_polynomial(t);
                if (!p) return std::nullopt;
                r = r + *p;
            }
            return r;
        }
        case Kind::Product: {
            Polynomial r = Polynomial::constant(1);
            for (const auto& f : e.operands()) {
                auto p = normalize_polynomial(f);
                if (!p) return std::nullopt;
                r = r * (*p);
            }
            return r;
        }
        case Kind::Power: {
            const Rational& r = e.exponent();
            if (!is_integer(r)) return std::nullopt;
            BigInt ei = numer(r);
            if (ei < 0) {
                // A negative integer power of a nonzero constant is rational.
                auto p = normalize_polynomial(e.base());
                if (p && p->is_constant() && p->constant_term() != 0 && ei >= -4096) {
                    return Polynomial::constant(rational_pow(
                        p->constant_term(), ei.convert_to<std::int64_t>()));
                }
                return std::nullopt;
            }
            if (ei > 256) return std::nullopt;  // refuse degree blowup
            auto p = normalize_polynomial(e.base());
            if (!p) return std::nullopt;
            return p->pow(ei.convert_to<std::uint64_t>());
        }
        case Kind::Exp:
        case Kind::Ln:
        case Kind::HQuadrature:
            return std::nullopt;
    }
    return std::nullopt;
}

/// Exact zero test through the polynomial normal form; false when the
/// expression is not polynomial (even if it happens to vanish).
inline bool is_zero_polynomial(const ScalarExpr& e) {
    if (e.is_zero()) return true;
    auto p = normalize_polynomial(e);
    return p && p->is_zero();
}

}  // namespace workform
