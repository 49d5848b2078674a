#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/fields.hpp"
#include "frechet/taylor.hpp"

namespace frechet {

enum class ExprKind { variable, constant, add, sub, mul, div, int_pow, exp_fn, log_fn, recip1m };

/// Immutable expression tree over field operations plus the real-only
/// analytic primitives exp, log and recip1m (x -> 1/(1-x)). Constants are
/// exact rationals, embedded into the target field when a value or series is
/// built, so one tree serves every field. The primitives are gated to the
/// real field when the series is constructed; over other fields only
/// rational-operation trees are admitted.
class Expr {
public:
    Expr() = default;
    bool valid() const { return node_ != nullptr; }

    static Expr variable(int index);
    static Expr constant(Rational value);
    static Expr constant(std::int64_t value) { return constant(Rational(value)); }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& a, int exponent);
    friend Expr exp(const Expr& a);
    friend Expr log(const Expr& a);
    friend Expr recip_one_minus(const Expr& a);

    ExprKind kind() const;
    int var_index() const;
    const Rational& constant_value() const;
    int exponent() const;
    Expr lhs() const;
    Expr rhs() const;

    /// True when the tree uses field operations only (no exp/log/recip1m):
    /// the syntactic certificate of analyticity over every field.
    bool rational_ops_only() const;
    int max_var_index() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Node n);
    const Node& node() const;

    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    ExprKind kind = ExprKind::constant;
    int var = 0;
    Rational value;
    int exponent = 0;
    Expr lhs, rhs;
};

inline Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

inline const Expr::Node& Expr::node() const {
    if (!node_)
        throw UsageError("empty expression");
    return *node_;
}

inline Expr Expr::variable(int index) {
    if (index < 0)
        throw UsageError("variable index must be nonnegative");
    Expr::Node n;
    n.kind = ExprKind::variable;
    n.var = index;
    return make(std::move(n));
}

inline Expr Expr::constant(Rational value) {
    Expr::Node n;
    n.kind = ExprKind::constant;
    n.value = std::move(value);
    return make(std::move(n));
}

namespace detail {
inline void require_operand(const Expr& e) {
    if (!e.valid())
        throw UsageError("empty expression operand");
}
} // namespace detail

inline Expr operator+(const Expr& a, const Expr& b) {
    detail::require_operand(a);
    detail::require_operand(b);
    Expr::Node n;
    n.kind = ExprKind::add;
    n.lhs = a;
    n.rhs = b;
    return Expr::make(std::move(n));
}
inline Expr operator-(const Expr& a, const Expr& b) {
    detail::require_operand(a);
    detail::require_operand(b);
    Expr::Node n;
    n.kind = ExprKind::sub;
    n.lhs = a;
    n.rhs = b;
    return Expr::make(std::move(n));
}
inline Expr operator*(const Expr& a, const Expr& b) {
    detail::require_operand(a);
    detail::require_operand(b);
    Expr::Node n;
    n.kind = ExprKind::mul;
    n.lhs = a;
    n.rhs = b;
    return Expr::make(std::move(n));
}
inline Expr operator/(const Expr& a, const Expr& b) {
    detail::require_operand(a);
    detail::require_operand(b);
    Expr::Node n;
    n.kind = ExprKind::div;
    n.lhs = a;
    n.rhs = b;
    return Expr::make(std::move(n));
}
inline Expr operator-(const Expr& a) { return Expr::constant(0) - a; }

inline Expr pow(const Expr& a, int exponent) {
    detail::require_operand(a);
    Expr::Node n;
    n.kind = ExprKind::int_pow;
    n.lhs = a;
    n.exponent = exponent;
    return Expr::make(std::move(n));
}
inline Expr exp(const Expr& a) {
    detail::require_operand(a);
    Expr::Node n;
    n.kind = ExprKind::exp_fn;
    n.lhs = a;
    return Expr::make(std::move(n));
}
inline Expr log(const Expr& a) {
    detail::require_operand(a);
    Expr::Node n;
    n.kind = ExprKind::log_fn;
    n.lhs = a;
    return Expr::make(std::move(n));
}
inline Expr recip_one_minus(const Expr& a) {
    detail::require_operand(a);
    Expr::Node n;
    n.kind = ExprKind::recip1m;
    n.lhs = a;
    return Expr::make(std::move(n));
}

inline ExprKind Expr::kind() const { return node().kind; }
inline int Expr::var_index() const { return node().var; }
inline const Rational& Expr::constant_value() const { return node().value; }
inline int Expr::exponent() const { return node().exponent; }
inline Expr Expr::lhs() const { return node().lhs; }
inline Expr Expr::rhs() const { return node().rhs; }

inline bool Expr::rational_ops_only() const {
    switch (kind()) {
    case ExprKind::exp_fn:
    case ExprKind::log_fn:
    case ExprKind::recip1m:
        return false;
    case ExprKind::variable:
    case ExprKind::constant:
        return true;
    case ExprKind::int_pow:
        return lhs().rational_ops_only();
    default:
        return lhs().rational_ops_only() && rhs().rational_ops_only();
    }
}

inline int Expr::max_var_index() const {
    switch (kind()) {
    case ExprKind::variable:
        return node().var;
    case ExprKind::constant:
        return -1;
    case ExprKind::int_pow:
    case ExprKind::exp_fn:
    case ExprKind::log_fn:
    case ExprKind::recip1m:
        return lhs().max_var_index();
    default:
        return std::max(lhs().max_var_index(), rhs().max_var_index());
    }
}

/// Syntactic composition: replace variable i by replacements[i].
inline Expr substitute(const Expr& e, std::span<const Expr> replacements) {
    switch (e.kind()) {
    case ExprKind::variable: {
        const int i = e.var_index();
        if (i >= static_cast<int>(replacements.size()))
            throw UsageError("substitution is missing a replacement expression");
        return replacements[static_cast<std::size_t>(i)];
    }
    case ExprKind::constant:
        return e;
    case ExprKind::add:
        return substitute(e.lhs(), replacements) + substitute(e.rhs(), replacements);
    case ExprKind::sub:
        return substitute(e.lhs(), replacements) - substitute(e.rhs(), replacements);
    case ExprKind::mul:
        return substitute(e.lhs(), replacements) * substitute(e.rhs(), replacements);
    case ExprKind::div:
        return substitute(e.lhs(), replacements) / substitute(e.rhs(), replacements);
    case ExprKind::int_pow:
        return pow(substitute(e.lhs(), replacements), e.exponent());
    case ExprKind::exp_fn:
        return exp(substitute(e.lhs(), replacements));
    case ExprKind::log_fn:
        return log(substitute(e.lhs(), replacements));
    case ExprKind::recip1m:
        return recip_one_minus(substitute(e.lhs(), replacements));
    }
    throw Error("unreachable expression kind");
}

namespace detail {

template <NormedField F>
void require_real_primitive(const F& K, const char* name) {
    if (K.kind() != FieldKind::real)
        throw MinSmoothnessError(std::string(name) +
                                 " is a real-field primitive; over other fields only "
                                 "rational-operation expressions are admitted");
}

} // namespace detail

/// Plain evaluation of an expression at a point.
template <NormedField F>
ScalarOf<F> expr_eval(const F& K, const Expr& e, const Vector<ScalarOf<F>>& x) {
    switch (e.kind()) {
    case ExprKind::variable:
        if (e.var_index() >= static_cast<int>(x.size()))
            throw UsageError("variable index exceeds point dimension");
        return x[static_cast<std::size_t>(e.var_index())];
    case ExprKind::constant:
        return K.from_rational(e.constant_value());
    case ExprKind::add:
        return expr_eval(K, e.lhs(), x) + expr_eval(K, e.rhs(), x);
    case ExprKind::sub:
        return expr_eval(K, e.lhs(), x) - expr_eval(K, e.rhs(), x);
    case ExprKind::mul:
        return expr_eval(K, e.lhs(), x) * expr_eval(K, e.rhs(), x);
    case ExprKind::div: {
        auto b = expr_eval(K, e.rhs(), x);
        if (K.is_zero(b))
            throw DomainError("division by zero at evaluation point");
        return K.div(expr_eval(K, e.lhs(), x), b);
    }
    case ExprKind::int_pow: {
        auto u = expr_eval(K, e.lhs(), x);
        int ex = e.exponent();
        const bool invert = ex < 0;
        if (invert)
            ex = -ex;
        auto acc = K.one();
        auto base = u;
        for (int b = ex; b > 0; b >>= 1) {
            if (b & 1)
                acc = acc * base;
            if (b > 1)
                base = base * base;
        }
        if (invert) {
            if (K.is_zero(acc))
                throw DomainError("zero raised to a negative power");
            return K.div(K.one(), acc);
        }
        return acc;
    }
    case ExprKind::exp_fn: {
        detail::require_real_primitive(K, "exp");
        auto u = expr_eval(K, e.lhs(), x);
        if constexpr (std::is_same_v<ScalarOf<F>, double>)
            return std::exp(u);
        else
            throw MinSmoothnessError("exp needs the real field");
    }
    case ExprKind::log_fn: {
        detail::require_real_primitive(K, "log");
        auto u = expr_eval(K, e.lhs(), x);
        if constexpr (std::is_same_v<ScalarOf<F>, double>) {
            if (u <= 0.0)
                throw DomainError("log of a nonpositive value");
            return std::log(u);
        } else {
            throw MinSmoothnessError("log needs the real field");
        }
    }
    case ExprKind::recip1m: {
        detail::require_real_primitive(K, "recip1m");
        auto u = expr_eval(K, e.lhs(), x);
        auto denom = K.one() - u;
        if (K.is_zero(denom))
            throw DomainError("recip1m at its pole");
        return K.div(K.one(), denom);
    }
    }
    throw Error("unreachable expression kind");
}

namespace detail {

/// 1/(b0 + h) = sum_k (-1)^k h^k / b0^{k+1}, the reciprocal expansion used
/// for division (no reversion involved).
template <NormedField F>
TaylorSeries<ScalarOf<F>> reciprocal_series(const F& K, const ScalarOf<F>& b0, int N) {
    if (K.is_zero(b0))
        throw DomainError("division by zero at expansion point");
    auto s = ts_zero(K, Vector<ScalarOf<F>>{b0}, N, 1);
    auto c = K.div(K.one(), b0);
    const auto neg_inv_b0 = K.neg(c);
    for (int k = 0; k <= N; ++k) {
        s.terms[static_cast<std::size_t>(k)].coeffs[0] = c;
        c = c * neg_inv_b0;
    }
    return s;
}

/// One-variable series of an analytic primitive at inner value u0, with
/// exact rational coefficient generators evaluated into the target field.
template <NormedField F>
TaylorSeries<ScalarOf<F>> primitive_series(const F& K, ExprKind kind, const ScalarOf<F>& u0, int N) {
    if constexpr (std::is_same_v<ScalarOf<F>, double>) {
        auto s = ts_zero(K, Vector<ScalarOf<F>>{u0}, N, 1);
        switch (kind) {
        case ExprKind::exp_fn: {
            const double e = std::exp(u0);
            Rational inv_fact(1);
            for (int k = 0; k <= N; ++k) {
                if (k > 0)
                    inv_fact /= k;
                s.terms[static_cast<std::size_t>(k)].coeffs[0] = e * K.from_rational(inv_fact);
            }
            return s;
        }
        case ExprKind::log_fn: {
            if (u0 <= 0.0)
                throw DomainError("log expanded at a nonpositive value");
            // log(u0 + h) = log u0 + sum_{k>=1} (-1)^{k+1} (h/u0)^k / k
            s.terms[0].coeffs[0] = std::log(u0);
            double inv_pow = 1.0;
            for (int k = 1; k <= N; ++k) {
                inv_pow /= u0;
                s.terms[static_cast<std::size_t>(k)].coeffs[0] = (k % 2 ? 1.0 : -1.0) * inv_pow / k;
            }
            return s;
        }
        case ExprKind::recip1m: {
            // 1/(1-u) = sum_k h^k / (1-u0)^{k+1}
            const double denom = 1.0 - u0;
            if (K.is_zero(denom))
                throw DomainError("recip1m expanded at its pole");
            double c = 1.0 / denom;
            for (int k = 0; k <= N; ++k) {
                s.terms[static_cast<std::size_t>(k)].coeffs[0] = c;
                c /= denom;
            }
            return s;
        }
        default:
            throw UsageError("not an analytic primitive");
        }
    } else {
        (void)u0;
        (void)N;
        throw MinSmoothnessError("analytic primitive needs the real field");
    }
}

template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_int_pow(const F& K, const TaylorSeries<ScalarOf<F>>& u, int exponent, int N) {
    const bool invert = exponent < 0;
    int e = invert ? -exponent : exponent;
    auto acc = ts_constant(K, u.base_point, N, Vector<ScalarOf<F>>{K.one()});
    auto base = u;
    for (int b = e; b > 0; b >>= 1) {
        if (b & 1)
            acc = ts_mul(K, acc, base);
        if (b > 1)
            base = ts_mul(K, base, base);
    }
    if (invert)
        return ts_compose(K, reciprocal_series(K, acc.value()[0], N), acc);
    return acc;
}

} // namespace detail

/// Jet automatic differentiation: the truncation at order N of the exact
/// expansion of e around x, as a scalar-valued series in d = dim(x)
/// variables. Exact over exact fields for rational-operation expressions.
template <NormedField F>
TaylorSeries<ScalarOf<F>> taylor_at(const F& K, const Expr& e, const Vector<ScalarOf<F>>& x, int N) {
    if (N < 0)
        throw UsageError("expansion order must be nonnegative");
    if (x.empty())
        throw UsageError("expansion point must have dimension >= 1");
    if (e.max_var_index() >= static_cast<int>(x.size()))
        throw UsageError("variable index exceeds point dimension");
    switch (e.kind()) {
    case ExprKind::variable: {
        auto s = ts_zero(K, x, N, 1);
        s.terms[0].coeffs[0] = x[static_cast<std::size_t>(e.var_index())];
        if (N >= 1)
            s.terms[1].coeffs[static_cast<std::size_t>(e.var_index())] = K.one();
        return s;
    }
    case ExprKind::constant:
        return ts_constant(K, x, N, Vector<ScalarOf<F>>{K.from_rational(e.constant_value())});
    case ExprKind::add:
        return ts_add(K, taylor_at(K, e.lhs(), x, N), taylor_at(K, e.rhs(), x, N));
    case ExprKind::sub:
        return ts_sub(K, taylor_at(K, e.lhs(), x, N), taylor_at(K, e.rhs(), x, N));
    case ExprKind::mul:
        return ts_mul(K, taylor_at(K, e.lhs(), x, N), taylor_at(K, e.rhs(), x, N));
    case ExprKind::div: {
        auto a = taylor_at(K, e.lhs(), x, N);
        auto b = taylor_at(K, e.rhs(), x, N);
        return ts_mul(K, a, ts_compose(K, detail::reciprocal_series(K, b.value()[0], N), b));
    }
    case ExprKind::int_pow:
        return detail::ts_int_pow(K, taylor_at(K, e.lhs(), x, N), e.exponent(), N);
    case ExprKind::exp_fn:
    case ExprKind::log_fn:
    case ExprKind::recip1m: {
        detail::require_real_primitive(K, e.kind() == ExprKind::exp_fn   ? "exp"
                                          : e.kind() == ExprKind::log_fn ? "log"
                                                                         : "recip1m");
        auto u = taylor_at(K, e.lhs(), x, N);
        return ts_compose(K, detail::primitive_series(K, e.kind(), u.value()[0], N), u);
    }
    }
    throw Error("unreachable expression kind");
}

/// Partial derivative recovered from the full iterated derivative by
/// slotting basis vectors: D^{|alpha|} f(x)(e_1^{alpha_1}, ..., e_d^{alpha_d}).
template <NormedField F>
ScalarOf<F> partial_derivative(const F& K, const DerivativeSequence<ScalarOf<F>>& seq,
                               const std::vector<int>& alpha) {
    if (seq.out_dim() != 1)
        throw UsageError("partial_derivative expects a scalar-valued sequence");
    if (static_cast<int>(alpha.size()) != seq.in_dim())
        throw UsageError("multi-index length must equal the dimension");
    int total = 0;
    for (int a : alpha) {
        if (a < 0)
            throw UsageError("multi-index entries must be nonnegative");
        total += a;
    }
    if (total > seq.order())
        throw UsageError("multi-index order exceeds available derivatives");
    std::vector<Vector<ScalarOf<F>>> args;
    args.reserve(static_cast<std::size_t>(total));
    for (int i = 0; i < seq.in_dim(); ++i)
        for (int c = 0; c < alpha[static_cast<std::size_t>(i)]; ++c)
            args.push_back(basis_vector(K, seq.in_dim(), i));
    return ml_eval(K, seq.tensors[static_cast<std::size_t>(total)],
                   std::span<const Vector<ScalarOf<F>>>(args))[0];
}

/// One-dimensional convenience: f^(n)(x) = D^n f(x)(1, ..., 1) through the
/// canonical identification of L(k, F) with F.
template <NormedField F>
ScalarOf<F> deriv1(const F& K, const DerivativeSequence<ScalarOf<F>>& seq, int order) {
    if (seq.in_dim() != 1)
        throw UsageError("deriv1 needs a one-dimensional sequence");
    if (seq.out_dim() != 1)
        throw UsageError("deriv1 expects a scalar-valued sequence");
    if (order < 0 || order > seq.order())
        throw UsageError("derivative order out of range");
    std::vector<Vector<ScalarOf<F>>> args(static_cast<std::size_t>(order),
                                          Vector<ScalarOf<F>>{K.one()});
    return ml_eval(K, seq.tensors[static_cast<std::size_t>(order)],
                   std::span<const Vector<ScalarOf<F>>>(args))[0];
}

} // namespace frechet
