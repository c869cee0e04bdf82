#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "workform/errors.hpp"
#include "workform/quadrature.hpp"
#include "workform/rational.hpp"

namespace workform {

/// Exact symbolic scalar function. The grammar is the smallest one closed
/// under the decomposition pipeline: rational constants, variables,
/// sums, products, rational powers, exp, ln, and a quadrature-backed
/// integral node produced by the homotopy operator on non-polynomial input.
///
/// Values are immutable and cheap to copy (shared subtrees). All
/// construction goes through canonicalizing factories: sums and products
/// are flattened and sorted, like terms and same-base powers merged,
/// rational constants folded. Canonical form is guaranteed only for
/// polynomials (see polynomial.hpp); everything else is best-effort.
class ScalarExpr {
  public:
    enum class Kind {
        Constant,     // rational value
        Variable,     // x_i, 0-based index
        Sum,          // n-ary, flattened, like terms merged
        Product,      // n-ary, flattened, same-base powers merged
        Power,        // base ^ rational exponent
        Exp,          // exp(argument)
        Ln,           // ln(argument)
        HQuadrature,  // integral over t in [0,1] of argument; t is the
                      // bound variable with index == arity
    };

    ScalarExpr() : node_(zero().node_) {}

    static const ScalarExpr& zero() {
        static const ScalarExpr e = make_constant_node(Rational(0));
        return e;
    }
    static const ScalarExpr& one() {
        static const ScalarExpr e = make_constant_node(Rational(1));
        return e;
    }

    static ScalarExpr constant(Rational r) {
        if (r == 0) return zero();
        if (r == 1) return one();
        return make_constant_node(std::move(r));
    }

    static ScalarExpr variable(int index) {
        Node n;
        n.kind = Kind::Variable;
        n.index = index;
        return ScalarExpr(std::move(n));
    }

    /// Raw quadrature node: the value of integral_0^1 integrand dt where the
    /// integrand lives in (arity + 1) variables and t has index == arity.
    /// A syntactically zero integrand folds to 0; exact integration of
    /// polynomial integrands is the homotopy module's job.
    static ScalarExpr quadrature_integral(ScalarExpr integrand, int arity) {
        if (integrand.is_zero()) return zero();
        Node n;
        n.kind = Kind::HQuadrature;
        n.index = arity;
        n.children.push_back(std::move(integrand));
        return ScalarExpr(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    const Rational& constant_value() const { return node_->value; }
    int variable_index() const { return node_->index; }
    int quadrature_arity() const { return node_->index; }
    const std::vector<ScalarExpr>& operands() const { return node_->children; }
    const ScalarExpr& base() const { return node_->children[0]; }
    const Rational& exponent() const { return node_->value; }
    const ScalarExpr& argument() const { return node_->children[0]; }

    bool is_constant() const { return node_->kind == Kind::Constant; }
    bool is_zero() const { return is_constant() && node_->value == 0; }
    bool is_one() const { return is_constant() && node_->value == 1; }

    friend int compare(const ScalarExpr& a, const ScalarExpr& b);

  private:
    struct Node {
        Kind kind = Kind::Constant;
        Rational value;  // Constant value or Power exponent
        int index = 0;   // Variable index or HQuadrature arity
        std::vector<ScalarExpr> children;
    };

    explicit ScalarExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

    static ScalarExpr make_constant_node(Rational r) {
        Node n;
        n.kind = Kind::Constant;
        n.value = std::move(r);
        return ScalarExpr(std::move(n));
    }

    std::shared_ptr<const Node> node_;

    friend ScalarExpr detail_make_node(ScalarExpr::Kind kind, Rational value, int index,
                                       std::vector<ScalarExpr> children);
};

// Internal node factory used by the canonicalizing constructors below.
inline ScalarExpr detail_make_node(ScalarExpr::Kind kind, Rational value, int index,
                                   std::vector<ScalarExpr> children) {
    ScalarExpr::Node n;
    n.kind = kind;
    n.value = std::move(value);
    n.index = index;
    n.children = std::move(children);
    return ScalarExpr(std::move(n));
}

/// Total order on canonical trees; 0 means structurally equal.
inline int compare(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.node_ == b.node_) return 0;
    using Kind = ScalarExpr::Kind;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Constant: {
            const Rational &x = a.constant_value(), &y = b.constant_value();
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        case Kind::Variable:
            return a.variable_index() == b.variable_index()
                       ? 0
                       : (a.variable_index() < b.variable_index() ? -1 : 1);
        case Kind::Power: {
            int c = compare(a.base(), b.base());
            if (c != 0) return c;
            const Rational &x = a.exponent(), &y = b.exponent();
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        case Kind::Exp:
        case Kind::Ln:
            return compare(a.argument(), b.argument());
        case Kind::HQuadrature: {
            if (a.quadrature_arity() != b.quadrature_arity())
                return a.quadrature_arity() < b.quadrature_arity() ? -1 : 1;
            return compare(a.argument(), b.argument());
        }
        case Kind::Sum:
        case Kind::Product: {
            const auto &xs = a.operands(), &ys = b.operands();
            if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                int c = compare(xs[i], ys[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
    return 0;
}

inline bool same_tree(const ScalarExpr& a, const ScalarExpr& b) { return compare(a, b) == 0; }

struct ScalarExprLess {
    bool operator()(const ScalarExpr& a, const ScalarExpr& b) const { return compare(a, b) < 0; }
};

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr pow(const ScalarExpr& base, const Rational& exponent);
ScalarExpr exp(const ScalarExpr& u);
ScalarExpr ln(const ScalarExpr& u);

namespace detail {

// Splits an addend into (rational coefficient, coefficient-free core).
inline std::pair<Rational, ScalarExpr> split_coefficient(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    if (e.kind() == Kind::Constant) return {e.constant_value(), ScalarExpr::one()};
    if (e.kind() == Kind::Product && e.operands().front().kind() == Kind::Constant) {
        const auto& ops = e.operands();
        Rational c = ops.front().constant_value();
        if (ops.size() == 2) return {c, ops[1]};
        std::vector<ScalarExpr> rest(ops.begin() + 1, ops.end());
        // Remaining factors are already canonical and constant-free.
        return {c, detail_make_node(Kind::Product, Rational(0), 0, std::move(rest))};
    }
    return {Rational(1), e};
}

inline ScalarExpr make_sum(std::vector<ScalarExpr> terms);
inline ScalarExpr make_product(std::vector<ScalarExpr> factors);

inline ScalarExpr scale(const Rational& c, const ScalarExpr& core) {
    if (c == 0) return ScalarExpr::zero();
    if (core.is_one()) return ScalarExpr::constant(c);
    if (c == 1) return core;
    return make_product({ScalarExpr::constant(c), core});
}

inline ScalarExpr make_sum(std::vector<ScalarExpr> terms) {
    using Kind = ScalarExpr::Kind;
    std::map<ScalarExpr, Rational, ScalarExprLess> by_core;
    Rational constant(0);
    std::vector<ScalarExpr> work = std::move(terms);
    while (!work.empty()) {
        ScalarExpr t = std::move(work.back());
        work.pop_back();
        if (t.kind() == Kind::Sum) {
            for (const auto& c : t.operands()) work.push_back(c);
            continue;
        }
        auto [c, core] = split_coefficient(t);
        if (c == 0) continue;
        if (core.is_one()) {
            constant += c;
        } else {
            by_core[core] += c;
        }
    }
    std::vector<ScalarExpr> out;
    out.reserve(by_core.size() + 1);
    for (const auto& [core, c] : by_core) {
        if (c == 0) continue;
        out.push_back(scale(c, core));
    }
    if (constant != 0) out.push_back(ScalarExpr::constant(constant));
    if (out.empty()) return ScalarExpr::zero();
    if (out.size() == 1) return out.front();
    return detail_make_node(Kind::Sum, Rational(0), 0, std::move(out));
}

// True when the expression is provably > 0 wherever it is defined.
inline bool syntactically_positive_impl(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant:
            return e.constant_value() > 0;
        case Kind::Exp:
            return true;
        case Kind::Power:
            return syntactically_positive_impl(e.base());
        case Kind::Product: {
            for (const auto& f : e.operands())
                if (!syntactically_positive_impl(f)) return false;
            return true;
        }
        case Kind::Sum: {
            for (const auto& t : e.operands())
                if (!syntactically_positive_impl(t)) return false;
            return true;
        }
        default:
            return false;
    }
}

inline ScalarExpr make_exp(const ScalarExpr& u) {
    using Kind = ScalarExpr::Kind;
    if (u.is_zero()) return ScalarExpr::one();
    // Pull r*ln(v) addends out as v^r factors when v is syntactically
    // positive; the remainder stays under exp.
    std::vector<ScalarExpr> addends;
    if (u.kind() == Kind::Sum) {
        addends = u.operands();
    } else {
        addends.push_back(u);
    }
    std::vector<ScalarExpr> factors;
    std::vector<ScalarExpr> residue;
    for (const auto& a : addends) {
        auto [c, core] = split_coefficient(a);
        if (core.kind() == Kind::Ln && syntactically_positive_impl(core.argument())) {
            factors.push_back(pow(core.argument(), c));
        } else {
            residue.push_back(a);
        }
    }
    if (factors.empty()) {
        return detail_make_node(Kind::Exp, Rational(0), 0, {u});
    }
    if (!residue.empty()) {
        ScalarExpr rem = make_sum(std::move(residue));
        if (!rem.is_zero())
            factors.push_back(detail_make_node(Kind::Exp, Rational(0), 0, {rem}));
    }
    return make_product(std::move(factors));
}

inline ScalarExpr make_ln(const ScalarExpr& u) {
    using Kind = ScalarExpr::Kind;
    if (u.is_one()) return ScalarExpr::zero();
    if (u.kind() == Kind::Exp) return u.argument();
    return detail_make_node(Kind::Ln, Rational(0), 0, {u});
}

inline ScalarExpr make_power(const ScalarExpr& base, const Rational& exponent) {
    using Kind = ScalarExpr::Kind;
    if (exponent == 0) return ScalarExpr::one();
    if (exponent == 1) return base;
    if (base.is_one()) return ScalarExpr::one();
    if (base.kind() == Kind::Constant) {
        const Rational& c = base.constant_value();
        if (is_integer(exponent)) {
            BigInt e = numer(exponent);
            // Keep 0^negative symbolic (a domain error at evaluation) and
            // avoid folding absurdly large exponents.
            if ((c != 0 || e > 0) && abs(e) <= 4096) {
                return ScalarExpr::constant(
                    rational_pow(c, e.convert_to<std::int64_t>()));
            }
        } else if (c == 0 && exponent > 0) {
            return ScalarExpr::zero();
        }
        return detail_make_node(Kind::Power, exponent, 0, {base});
    }
    if (base.kind() == Kind::Exp) {
        return make_exp(ScalarExpr::constant(exponent) * base.argument());
    }
    if (base.kind() == Kind::Power) {
        // (u^r)^s = u^(r s) is unconditionally valid for integer s, and for
        // fractional s whenever r is not an even integer (even powers lose
        // the sign of u).
        const Rational& r = base.exponent();
        bool r_even_integer = is_integer(r) && numer(r) % 2 == 0;
        if (is_integer(exponent) || !r_even_integer) {
            return make_power(base.base(), r * exponent);
        }
    }
    if (base.kind() == Kind::Product && is_integer(exponent)) {
        std::vector<ScalarExpr> factors;
        factors.reserve(base.operands().size());
        for (const auto& f : base.operands()) factors.push_back(make_power(f, exponent));
        return make_product(std::move(factors));
    }
    return detail_make_node(Kind::Power, exponent, 0, {base});
}

inline ScalarExpr make_product(std::vector<ScalarExpr> factors) {
    using Kind = ScalarExpr::Kind;
    std::vector<ScalarExpr> work = std::move(factors);
    for (int pass = 0; pass < 32; ++pass) {
        Rational constant(1);
        std::map<ScalarExpr, Rational, ScalarExprLess> powers;
        std::vector<ScalarExpr> exp_args;
        std::vector<ScalarExpr> queue = std::move(work);
        while (!queue.empty()) {
            ScalarExpr f = std::move(queue.back());
            queue.pop_back();
            switch (f.kind()) {
                case Kind::Constant:
                    constant *= f.constant_value();
                    if (constant == 0) return ScalarExpr::zero();
                    break;
                case Kind::Product:
                    for (const auto& g : f.operands()) queue.push_back(g);
                    break;
                case Kind::Exp:
                    exp_args.push_back(f.argument());
                    break;
                case Kind::Power:
                    powers[f.base()] += f.exponent();
                    break;
                default:
                    powers[f] += 1;
                    break;
            }
        }
        std::vector<ScalarExpr> rebuilt;
        rebuilt.reserve(powers.size() + 1);
        bool stable = true;
        for (const auto& [b, r] : powers) {
            if (r == 0) continue;
            ScalarExpr f = (r == 1) ? b : make_power(b, r);
            switch (f.kind()) {
                case Kind::Constant:
                case Kind::Product:
                case Kind::Exp:
                    stable = false;
                    break;
                case Kind::Power:
                    if (!same_tree(f.base(), b)) stable = false;
                    break;
                default:
                    break;
            }
            rebuilt.push_back(std::move(f));
        }
        if (!exp_args.empty()) {
            ScalarExpr e = make_exp(make_sum(std::move(exp_args)));
            if (!e.is_one()) {
                if (e.kind() != Kind::Exp) stable = false;
                rebuilt.push_back(std::move(e));
            }
        }
        if (stable) {
            if (rebuilt.empty()) return ScalarExpr::constant(constant);
            if (constant == 1 && rebuilt.size() == 1) return rebuilt.front();
            std::vector<ScalarExpr> out;
            out.reserve(rebuilt.size() + 1);
            if (constant != 1) out.push_back(ScalarExpr::constant(constant));
            // Map iteration already sorted the non-constant factors.
            for (auto& f : rebuilt) out.push_back(std::move(f));
            if (out.size() == 1) return out.front();
            return detail_make_node(Kind::Product, Rational(0), 0, std::move(out));
        }
        work = std::move(rebuilt);
        if (constant != 1) work.push_back(ScalarExpr::constant(constant));
    }
    throw Error("internal: product canonicalization did not stabilize");
}

}  // namespace detail

inline ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    return detail::make_sum({a, b});
}

inline ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    return detail::make_product({a, b});
}

inline ScalarExpr operator-(const ScalarExpr& a) {
    return ScalarExpr::constant(Rational(-1)) * a;
}

inline ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

inline ScalarExpr pow(const ScalarExpr& base, const Rational& exponent) {
    return detail::make_power(base, exponent);
}

inline ScalarExpr exp(const ScalarExpr& u) { return detail::make_exp(u); }
inline ScalarExpr ln(const ScalarExpr& u) { return detail::make_ln(u); }

inline ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    return a * pow(b, Rational(-1));
}

inline ScalarExpr& operator+=(ScalarExpr& a, const ScalarExpr& b) { return a = a + b; }
inline ScalarExpr& operator-=(ScalarExpr& a, const ScalarExpr& b) { return a = a - b; }
inline ScalarExpr& operator*=(ScalarExpr& a, const ScalarExpr& b) { return a = a * b; }

inline bool syntactically_positive(const ScalarExpr& e) {
    return detail::syntactically_positive_impl(e);
}

/// Smallest m such that all free variables have index < m.
inline int arity_needed(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant:
            return 0;
        case Kind::Variable:
            return e.variable_index() + 1;
        case Kind::Power:
            return arity_needed(e.base());
        case Kind::HQuadrature:
            return e.quadrature_arity();
        default: {
            int m = 0;
            for (const auto& c : e.operands()) m = std::max(m, arity_needed(c));
            return m;
        }
    }
}

inline bool depends_on(const ScalarExpr& e, int axis) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant:
            return false;
        case Kind::Variable:
            return e.variable_index() == axis;
        case Kind::Power:
            return depends_on(e.base(), axis);
        case Kind::HQuadrature:
            return axis < e.quadrature_arity() && depends_on(e.argument(), axis);
        default:
            for (const auto& c : e.operands())
                if (depends_on(c, axis)) return true;
            return false;
    }
}

/// Exact partial derivative with respect to x_axis. Total on the grammar;
/// quadrature nodes differentiate under the integral sign.
inline ScalarExpr differentiate(const ScalarExpr& e, int axis) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant:
            return ScalarExpr::zero();
        case Kind::Variable:
            return e.variable_index() == axis ? ScalarExpr::one() : ScalarExpr::zero();
        case Kind::Sum: {
            std::vector<ScalarExpr> terms;
            terms.reserve(e.operands().size());
            for (const auto& t : e.operands()) terms.push_back(differentiate(t, axis));
            return detail::make_sum(std::move(terms));
        }
        case Kind::Product: {
            const auto& fs = e.operands();
            std::vector<ScalarExpr> terms;
            terms.reserve(fs.size());
            for (std::size_t i = 0; i < fs.size(); ++i) {
                ScalarExpr di = differentiate(fs[i], axis);
                if (di.is_zero()) continue;
                std::vector<ScalarExpr> factors;
                factors.reserve(fs.size());
                for (std::size_t j = 0; j < fs.size(); ++j)
                    factors.push_back(i == j ? di : fs[j]);
                terms.push_back(detail::make_product(std::move(factors)));
            }
            return detail::make_sum(std::move(terms));
        }
        case Kind::Power: {
            ScalarExpr db = differentiate(e.base(), axis);
            if (db.is_zero()) return ScalarExpr::zero();
            return ScalarExpr::constant(e.exponent()) *
                   pow(e.base(), e.exponent() - 1) * db;
        }
        case Kind::Exp: {
            ScalarExpr du = differentiate(e.argument(), axis);
            if (du.is_zero()) return ScalarExpr::zero();
            return e * du;
        }
        case Kind::Ln: {
            ScalarExpr du = differentiate(e.argument(), axis);
            if (du.is_zero()) return ScalarExpr::zero();
            return du * pow(e.argument(), Rational(-1));
        }
        case Kind::HQuadrature: {
            if (axis >= e.quadrature_arity()) return ScalarExpr::zero();
            return ScalarExpr::quadrature_integral(differentiate(e.argument(), axis),
                                                   e.quadrature_arity());
        }
    }
    return ScalarExpr::zero();
}

/// Simultaneous substitution x_i -> replacement[i]. The replacements live in
/// a space of result_arity variables; a quadrature node's bound variable is
/// renumbered to the new space.
inline ScalarExpr substitute(const ScalarExpr& e, const std::vector<ScalarExpr>& replacement,
                             int result_arity) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant:
            return e;
        case Kind::Variable: {
            int i = e.variable_index();
            if (i >= static_cast<int>(replacement.size()))
                throw Error("internal: substitution map too small for variable index " +
                            std::to_string(i));
            return replacement[i];
        }
        case Kind::Sum: {
            std::vector<ScalarExpr> ts;
            ts.reserve(e.operands().size());
            for (const auto& t : e.operands())
                ts.push_back(substitute(t, replacement, result_arity));
            return detail::make_sum(std::move(ts));
        }
        case Kind::Product: {
            std::vector<ScalarExpr> fs;
            fs.reserve(e.operands().size());
            for (const auto& f : e.operands())
                fs.push_back(substitute(f, replacement, result_arity));
            return detail::make_product(std::move(fs));
        }
        case Kind::Power:
            return pow(substitute(e.base(), replacement, result_arity), e.exponent());
        case Kind::Exp:
            return exp(substitute(e.argument(), replacement, result_arity));
        case Kind::Ln:
            return ln(substitute(e.argument(), replacement, result_arity));
        case Kind::HQuadrature: {
            int a = e.quadrature_arity();
            if (static_cast<int>(replacement.size()) < a)
                throw Error("internal: substitution map too small for quadrature node");
            std::vector<ScalarExpr> inner(replacement.begin(), replacement.begin() + a);
            inner.push_back(ScalarExpr::variable(result_arity));  // bound t
            return ScalarExpr::quadrature_integral(
                substitute(e.argument(), inner, result_arity + 1), result_arity);
        }
    }
    return e;
}

/// Numeric value at a point. Throws DomainError on ln of a non-positive
/// argument, fractional power of a negative base, or negative power of zero;
/// QuadratureError if a quadrature-backed coefficient fails its estimate.
inline double evaluate(const ScalarExpr& e, const std::vector<double>& point) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Constant:
            return to_double(e.constant_value());
        case Kind::Variable: {
            int i = e.variable_index();
            if (i >= static_cast<int>(point.size()))
                throw Error("internal: evaluation point has too few coordinates");
            return point[i];
        }
        case Kind::Sum: {
            double s = 0.0;
            for (const auto& t : e.operands()) s += evaluate(t, point);
            return s;
        }
        case Kind::Product: {
            double p = 1.0;
            for (const auto& f : e.operands()) p *= evaluate(f, point);
            return p;
        }
        case Kind::Power: {
            double b = evaluate(e.base(), point);
            const Rational& r = e.exponent();
            if (is_integer(r)) {
                if (b == 0.0 && r < 0) throw DomainError("negative power of zero");
                return std::pow(b, to_double(r));
            }
            if (b > 0.0) return std::pow(b, to_double(r));
            if (b == 0.0 && r > 0) return 0.0;
            throw DomainError("fractional power of a non-positive base");
        }
        case Kind::Exp:
            return std::exp(evaluate(e.argument(), point));
        case Kind::Ln: {
            double v = evaluate(e.argument(), point);
            if (!(v > 0.0)) throw DomainError("ln of a non-positive argument");
            return std::log(v);
        }
        case Kind::HQuadrature: {
            if (static_cast<int>(point.size()) < e.quadrature_arity())
                throw Error("internal: evaluation point has too few coordinates");
            std::vector<double> extended(point.begin(), point.begin() + e.quadrature_arity());
            extended.push_back(0.0);  // slot for the bound t
            const ScalarExpr& integrand = e.argument();
            return integrate_unit_interval([&](double t) {
                extended[e.quadrature_arity()] = t;
                return evaluate(integrand, extended);
            });
        }
    }
    throw Error("internal: unreachable expression kind");
}

inline bool contains_quadrature(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    if (e.kind() == Kind::HQuadrature) return true;
    if (e.kind() == Kind::Power) return contains_quadrature(e.base());
    for (const auto& c : e.operands())
        if (contains_quadrature(c)) return true;
    return false;
}

/// On-request rewriting: merge r*ln(u) addends into a single ln of a product,
/// e.g. ln(x) - ln(y) -> ln(x/y). Non-log addends are kept as they are.
inline ScalarExpr combine_logs(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    std::vector<ScalarExpr> addends;
    if (e.kind() == Kind::Sum) {
        addends = e.operands();
    } else {
        addends.push_back(e);
    }
    std::vector<ScalarExpr> log_factors;
    std::vector<ScalarExpr> rest;
    for (const auto& a : addends) {
        auto [c, core] = detail::split_coefficient(a);
        if (core.kind() == Kind::Ln) {
            log_factors.push_back(pow(core.argument(), c));
        } else {
            rest.push_back(a);
        }
    }
    if (log_factors.size() < 2) return e;
    rest.push_back(ln(detail::make_product(std::move(log_factors))));
    return detail::make_sum(std::move(rest));
}

/// On-request rewriting: ln(u*v) -> ln(u) + ln(v) and ln(u^r) -> r*ln(u),
/// applied recursively. Valid where the input is defined.
inline ScalarExpr expand_logs(const ScalarExpr& e) {
    using Kind = ScalarExpr::Kind;
    switch (e.kind()) {
        case Kind::Ln: {
            const ScalarExpr& u = e.argument();
            if (u.kind() == Kind::Product) {
                std::vector<ScalarExpr> terms;
                for (const auto& f : u.operands()) terms.push_back(expand_logs(ln(f)));
                return detail::make_sum(std::move(terms));
            }
            if (u.kind() == Kind::Power) {
                return ScalarExpr::constant(u.exponent()) * expand_logs(ln(u.base()));
            }
            return e;
        }
        case Kind::Sum: {
            std::vector<ScalarExpr> ts;
            for (const auto& t : e.operands()) ts.push_back(expand_logs(t));
            return detail::make_sum(std::move(ts));
        }
        case Kind::Product: {
            std::vector<ScalarExpr> fs;
            for (const auto& f : e.operands()) fs.push_back(expand_logs(f));
            return detail::make_product(std::move(fs));
        }
        default:
            return e;
    }
}

}  // namespace workform
