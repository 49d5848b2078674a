#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "frechet/errors.hpp"

namespace frechet {

// Expression templates are switched off so that arithmetic on these types
// always yields concrete values; `auto` on a compound expression must never
// capture references to temporaries.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

/// Arbitrary-precision rational, always in canonical form: reduced fraction
/// with positive denominator. Backed by boost::multiprecision's rational
/// adaptor, which maintains that invariant on every operation.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rational make_rational(BigInt num, BigInt den) {
    if (den == 0)
        throw UsageError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

inline BigInt rational_num(const Rational& q) { return numerator(q); }
inline BigInt rational_den(const Rational& q) { return denominator(q); }

/// Archimedean absolute value |q|, as a nonnegative double.
inline double rational_norm(const Rational& q) {
    Rational a = q < 0 ? Rational(-q) : q;
    return a.convert_to<double>();
}

/// "n", "-n/d", or a decimal such as "1.25" / "2.5e-3" (converted exactly).
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw UsageError("bad rational literal: '" + std::string(text) + "'"); };
    std::size_t i = 0;
    auto peek = [&]() -> int { return i < text.size() ? text[i] : -1; };
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = text[i++] == '-';

    BigInt digits = 0;
    std::size_t ndigits = 0;
    auto scan_digits = [&] {
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            digits = digits * 10 + (text[i] - '0');
            ++ndigits;
            ++i;
        }
    };
    scan_digits();
    if (ndigits == 0) fail();
    BigInt int_part = digits;

    long frac_len = 0;
    if (peek() == '.') {
        ++i;
        digits = int_part;
        std::size_t before = ndigits;
        scan_digits();
        frac_len = static_cast<long>(ndigits - before);
        int_part = digits; // now the full digit string as an integer
    }
    long exponent = 0;
    if (peek() == 'e' || peek() == 'E') {
        ++i;
        bool eneg = false;
        if (peek() == '+' || peek() == '-') eneg = text[i++] == '-';
        long e = 0;
        std::size_t before = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            e = e * 10 + (text[i++] - '0');
        if (i == before || e > 4096) fail();
        exponent = eneg ? -e : e;
    }
    BigInt den = 1;
    if (peek() == '/') {
        if (frac_len != 0 || exponent != 0) fail();
        ++i;
        digits = 0;
        ndigits = 0;
        scan_digits();
        if (ndigits == 0) fail();
        den = digits;
        if (den == 0) fail();
    }
    if (i != text.size()) fail();

    long ten_power = exponent - frac_len;
    BigInt num = int_part;
    if (ten_power > 0)
        num *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(ten_power));
    else if (ten_power < 0)
        den *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-ten_power));
    if (neg) num = -num;
    return make_rational(num, den);
}

/// Canonical text form: "n" when the denominator is 1, else "n/d".
inline std::string format_rational(const Rational& q) {
    if (rational_den(q) == 1)
        return rational_num(q).str();
    return rational_num(q).str() + "/" + rational_den(q).str();
}

} // namespace frechet
