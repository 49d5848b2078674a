#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "frechet/errors.hpp"
#include "frechet/rational.hpp"

namespace frechet {

enum class FieldKind { rational, real, padic };

/// A normed field presented as a context object: constants, equality policy,
/// division and the norm live here; the scalar type itself carries the
/// arithmetic operators +, -, * and unary -.
///
/// Scalars are immutable values; every operation is pure, so scalars and
/// field objects may be freely shared across threads.
template <class F>
concept NormedField = requires(const F k, const typename F::Scalar a, const typename F::Scalar b) {
    typename F::Scalar;
    { k.kind() } -> std::same_as<FieldKind>;
    { k.name() } -> std::same_as<std::string>;
    { k.ultrametric() } -> std::same_as<bool>;
    { k.zero() } -> std::same_as<typename F::Scalar>;
    { k.one() } -> std::same_as<typename F::Scalar>;
    { k.from_int(std::int64_t{}) } -> std::same_as<typename F::Scalar>;
    { k.from_rational(Rational{}) } -> std::same_as<typename F::Scalar>;
    { k.add(a, b) } -> std::same_as<typename F::Scalar>;
    { k.sub(a, b) } -> std::same_as<typename F::Scalar>;
    { k.mul(a, b) } -> std::same_as<typename F::Scalar>;
    { k.neg(a) } -> std::same_as<typename F::Scalar>;
    { k.div(a, b) } -> std::same_as<typename F::Scalar>;
    { k.eq(a, b) } -> std::same_as<bool>;
    { k.is_zero(a) } -> std::same_as<bool>;
    { k.norm(a) } -> std::same_as<double>;
    { k.parse(std::string_view{}) } -> std::same_as<typename F::Scalar>;
    { k.format(a) } -> std::same_as<std::string>;
    { a + b } -> std::convertible_to<typename F::Scalar>;
    { a - b } -> std::convertible_to<typename F::Scalar>;
    { a * b } -> std::convertible_to<typename F::Scalar>;
    { -a } -> std::convertible_to<typename F::Scalar>;
};

template <class F>
using ScalarOf = typename F::Scalar;

/// Exact rationals with the archimedean absolute value. The oracle field:
/// every polynomial identity checked over it holds on the nose.
struct RationalField {
    using Scalar = Rational;

    FieldKind kind() const { return FieldKind::rational; }
    std::string name() const { return "rational"; }
    bool ultrametric() const { return false; }

    Scalar zero() const { return Rational(0); }
    Scalar one() const { return Rational(1); }
    Scalar from_int(std::int64_t n) const { return Rational(n); }
    Scalar from_rational(const Rational& q) const { return q; }

    Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
    Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
    Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
    Scalar neg(const Scalar& a) const { return -a; }
    Scalar div(const Scalar& a, const Scalar& b) const {
        if (b == 0)
            throw DomainError("rational division by zero");
        return a / b;
    }

    bool eq(const Scalar& a, const Scalar& b) const { return a == b; }
    bool is_zero(const Scalar& a) const { return a == 0; }
    double norm(const Scalar& a) const { return rational_norm(a); }

    Scalar parse(std::string_view s) const { return parse_rational(s); }
    std::string format(const Scalar& a) const { return format_rational(a); }
};

/// Binary64 reals. Equality is approximate with a mixed absolute/relative
/// tolerance; both knobs are caller-overridable.
struct RealField {
    using Scalar = double;

    double abs_tol = 1e-9;
    double rel_tol = 1e-9;

    FieldKind kind() const { return FieldKind::real; }
    std::string name() const { return "real"; }
    bool ultrametric() const { return false; }

    Scalar zero() const { return 0.0; }
    Scalar one() const { return 1.0; }
    Scalar from_int(std::int64_t n) const { return static_cast<double>(n); }
    Scalar from_rational(const Rational& q) const {
        return rational_num(q).convert_to<double>() / rational_den(q).convert_to<double>();
    }

    Scalar add(Scalar a, Scalar b) const { return a + b; }
    Scalar sub(Scalar a, Scalar b) const { return a - b; }
    Scalar mul(Scalar a, Scalar b) const { return a * b; }
    Scalar neg(Scalar a) const { return -a; }
    Scalar div(Scalar a, Scalar b) const {
        if (b == 0.0)
            throw DomainError("real division by zero");
        return a / b;
    }

    bool eq(Scalar a, Scalar b) const {
        return std::abs(a - b) <= abs_tol + rel_tol * std::max(std::abs(a), std::abs(b));
    }
    bool is_zero(Scalar a) const { return std::abs(a) <= abs_tol; }
    double norm(Scalar a) const { return std::abs(a); }

    Scalar parse(std::string_view s) const {
        // Accepts decimals and "n/d" alike; goes through the exact parser so
        // CLI points use one grammar for every field.
        return from_rational(parse_rational(s));
    }
    std::string format(Scalar a) const {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), a);
        if (ec != std::errc())
            throw Error("double formatting failed");
        return std::string(buf, end);
    }
};

} // namespace frechet
