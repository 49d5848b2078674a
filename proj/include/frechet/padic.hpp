#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/fields.hpp"
#include "frechet/rational.hpp"

namespace frechet {

/// Fixed-precision p-adic number: value = p^valuation * (d0 + d1*p + ...),
/// with the unit digits stored least-significant first and d0 != 0.
///
/// Each value tracks its own guaranteed digit count (digits().size()).
/// Arithmetic propagates precision honestly: a sum is good modulo
/// p^min(v1+N1, v2+N2), and cancellation of leading digits shortens the
/// guaranteed window accordingly. A value whose whole window cancels is the
/// canonical zero ("zero to known precision"); comparisons therefore only
/// ever assert over jointly guaranteed digits.
class PAdic {
public:
    PAdic() = default; // canonical zero, prime-agnostic

    static PAdic zero(int prime = 0) {
        PAdic z;
        z.prime_ = prime;
        return z;
    }

    /// The input integer is exact, so the unit part keeps the full ambient
    /// precision regardless of its p-valuation.
    static PAdic from_integer(int prime, int precision, const BigInt& n) {
        check_prime(prime);
        if (precision <= 0)
            throw UsageError("p-adic precision must be positive");
        if (n == 0)
            return zero(prime);
        BigInt u = n;
        long shift = 0;
        while (u % prime == 0) {
            u /= prime;
            ++shift;
        }
        return normalized(prime, shift, u, precision);
    }

    /// Unit digits as stored: digits[0] != 0, each in [0, p-1].
    static PAdic from_unit_digits(int prime, long valuation, std::vector<int> digits) {
        check_prime(prime);
        if (digits.empty() || digits[0] == 0)
            throw UsageError("p-adic unit part must have a nonzero leading digit");
        for (int d : digits)
            if (d < 0 || d >= prime)
                throw UsageError("p-adic digit out of range");
        PAdic x;
        x.prime_ = prime;
        x.valuation_ = valuation;
        x.digits_ = std::move(digits);
        return x;
    }

    /// Sum of digit*p^exponent terms, at the given ambient precision.
    static PAdic from_terms(int prime, int precision,
                            const std::vector<std::pair<long, int>>& terms) {
        check_prime(prime);
        std::set<long> seen;
        long lo = 0;
        bool any = false;
        for (const auto& [e, d] : terms) {
            if (!seen.insert(e).second)
                throw UsageError("duplicate exponent in p-adic digit list");
            if (d < 0 || d >= prime)
                throw UsageError("p-adic digit out of range");
            if (d != 0 && (!any || e < lo)) {
                lo = e;
                any = true;
            }
        }
        if (!any)
            return zero(prime);
        BigInt u = 0;
        for (const auto& [e, d] : terms)
            if (d != 0)
                u += BigInt(d) * pow_int(prime, e - lo);
        return normalized(prime, lo, u, precision);
    }

    bool is_zero() const { return digits_.empty(); }
    int prime() const { return prime_; }
    int precision() const { return static_cast<int>(digits_.size()); }
    const std::vector<int>& digits() const { return digits_; }

    long valuation() const {
        if (is_zero())
            throw DomainError("valuation of p-adic zero");
        return valuation_;
    }

    /// Digit of p^n in the full expansion (0 outside the unit window).
    int digit_at(long n) const {
        if (is_zero() || n < valuation_)
            return 0;
        std::size_t i = static_cast<std::size_t>(n - valuation_);
        return i < digits_.size() ? digits_[i] : 0;
    }

    /// p^(-valuation); 0 for the canonical zero.
    double norm() const {
        if (is_zero())
            return 0.0;
        return std::pow(static_cast<double>(prime_), static_cast<double>(-valuation_));
    }

    PAdic operator-() const {
        if (is_zero())
            return *this;
        BigInt m = pow_int(prime_, precision());
        return normalized(prime_, valuation_, m - unit_int(), precision());
    }

    friend PAdic operator+(const PAdic& a, const PAdic& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        int p = common_prime(a, b);
        long v = std::min(a.valuation_, b.valuation_);
        long window = std::min(a.valuation_ + a.precision(), b.valuation_ + b.precision()) - v;
        BigInt u = a.unit_int() * pow_int(p, a.valuation_ - v) +
                   b.unit_int() * pow_int(p, b.valuation_ - v);
        return normalized(p, v, u, window);
    }

    friend PAdic operator-(const PAdic& a, const PAdic& b) { return a + (-b); }

    friend PAdic operator*(const PAdic& a, const PAdic& b) {
        if (a.is_zero() || b.is_zero())
            return zero(a.prime_ != 0 ? a.prime_ : b.prime_);
        int p = common_prime(a, b);
        long window = std::min(a.precision(), b.precision());
        return normalized(p, a.valuation_ + b.valuation_, a.unit_int() * b.unit_int(), window);
    }

    PAdic inv() const {
        if (is_zero())
            throw DomainError("inversion of p-adic zero");
        BigInt m = pow_int(prime_, precision());
        return normalized(prime_, -valuation_, mod_inverse(unit_int(), m), precision());
    }

    /// Equality over the jointly guaranteed digits. A nonzero value never
    /// equals zero: its leading digit is guaranteed nonzero.
    friend bool eq_guaranteed(const PAdic& a, const PAdic& b) {
        if (a.is_zero() || b.is_zero())
            return a.is_zero() && b.is_zero();
        if (a.prime_ != b.prime_)
            throw UsageError("comparing p-adics with different primes");
        if (a.valuation_ != b.valuation_)
            return false;
        int n = std::min(a.precision(), b.precision());
        for (int i = 0; i < n; ++i)
            if (a.digits_[i] != b.digits_[i])
                return false;
        return true;
    }

    /// Literal format "p:v:d0,d1,d2,..." (unit digits least-significant
    /// first). The canonical zero prints with an empty digit list.
    std::string to_string() const {
        std::string s = std::to_string(prime_) + ":" + std::to_string(is_zero() ? 0 : valuation_) + ":";
        for (std::size_t i = 0; i < digits_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(digits_[i]);
        }
        return s;
    }

    static PAdic parse(std::string_view text) {
        auto fail = [&] { throw UsageError("bad p-adic literal: '" + std::string(text) + "'"); };
        auto c1 = text.find(':');
        auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
        if (c2 == std::string_view::npos) fail();
        int p = 0;
        long v = 0;
        try {
            p = std::stoi(std::string(text.substr(0, c1)));
            v = std::stol(std::string(text.substr(c1 + 1, c2 - c1 - 1)));
        } catch (const std::exception&) {
            fail();
        }
        std::string_view rest = text.substr(c2 + 1);
        std::vector<int> digits;
        while (!rest.empty()) {
            auto comma = rest.find(',');
            std::string tok(rest.substr(0, comma));
            try {
                digits.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                fail();
            }
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        if (digits.empty()) {
            if (p != 0) check_prime(p);
            return zero(p);
        }
        return from_unit_digits(p, v, std::move(digits));
    }

    static void check_prime(int p) {
        if (p < 2)
            throw UsageError("p-adic prime must be >= 2");
        for (int d = 2; d * d <= p; ++d)
            if (p % d == 0)
                throw UsageError(std::to_string(p) + " is not prime");
    }

    static BigInt pow_int(int p, long e) {
        if (e < 0)
            throw UsageError("negative power in p-adic integer arithmetic");
        return boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e));
    }

private:
    int prime_ = 0;
    long valuation_ = 0;
    std::vector<int> digits_; // empty iff zero

    BigInt unit_int() const {
        BigInt u = 0;
        for (std::size_t i = digits_.size(); i-- > 0;)
            u = u * prime_ + digits_[i];
        return u;
    }

    static int common_prime(const PAdic& a, const PAdic& b) {
        if (a.prime_ != b.prime_)
            throw UsageError("mixed p-adic primes: " + std::to_string(a.prime_) + " vs " +
                             std::to_string(b.prime_));
        return a.prime_;
    }

    // value = p^v0 * u with u known modulo p^window
    static PAdic normalized(int p, long v0, BigInt u, long window) {
        if (window <= 0)
            return zero(p);
        BigInt m = pow_int(p, window);
        u %= m;
        if (u < 0) u += m;
        if (u == 0)
            return zero(p);
        long shift = 0;
        while (u % p == 0) {
            u /= p;
            ++shift;
        }
        window -= shift;
        if (window <= 0)
            return zero(p);
        PAdic x;
        x.prime_ = p;
        x.valuation_ = v0 + shift;
        x.digits_.resize(static_cast<std::size_t>(window));
        for (long i = 0; i < window; ++i) {
            x.digits_[static_cast<std::size_t>(i)] = static_cast<int>(u % p);
            u /= p;
        }
        return x;
    }

    static BigInt mod_inverse(BigInt a, const BigInt& m) {
        BigInt r0 = m, r1 = a % m, s0 = 0, s1 = 1;
        while (r1 != 0) {
            BigInt q = r0 / r1;
            r0 -= q * r1;
            std::swap(r0, r1);
            s0 -= q * s1;
            std::swap(s0, s1);
        }
        if (r0 != 1)
            throw DomainError("p-adic unit is not invertible modulo p^N");
        s0 %= m;
        if (s0 < 0) s0 += m;
        return s0;
    }
};

/// Q_p truncated to N digits beyond the leading valuation, with the
/// ultrametric norm p^(-v). Default precision 32 digits; the counterexample
/// demos need precision >= a+b+2 for quotient exponents a, b.
struct PAdicField {
    using Scalar = PAdic;

    explicit PAdicField(int prime, int precision = 32) : p(prime), precision(precision) {
        PAdic::check_prime(p);
        if (precision <= 0)
            throw UsageError("p-adic precision must be positive");
    }

    int p;
    int precision;

    FieldKind kind() const { return FieldKind::padic; }
    std::string name() const { return "padic:" + std::to_string(p); }
    bool ultrametric() const { return true; }

    Scalar zero() const { return PAdic::zero(p); }
    Scalar one() const { return PAdic::from_integer(p, precision, 1); }
    Scalar from_int(std::int64_t n) const { return PAdic::from_integer(p, precision, BigInt(n)); }
    Scalar from_rational(const Rational& q) const {
        PAdic num = PAdic::from_integer(p, precision, rational_num(q));
        if (rational_den(q) == 1)
            return num;
        return num * PAdic::from_integer(p, precision, rational_den(q)).inv();
    }

    Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
    Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
    Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
    Scalar neg(const Scalar& a) const { return -a; }
    Scalar div(const Scalar& a, const Scalar& b) const {
        if (b.is_zero())
            throw DomainError("p-adic division by zero");
        return a * b.inv();
    }

    bool eq(const Scalar& a, const Scalar& b) const { return eq_guaranteed(a, b); }
    bool is_zero(const Scalar& a) const { return a.is_zero(); }
    double norm(const Scalar& a) const { return a.norm(); }

    /// Field-level literal parsing reads the digit list as the complete
    /// expansion: shorter literals are zero-padded up to the ambient
    /// precision (longer ones keep all their digits).
    Scalar parse(std::string_view s) const {
        PAdic x = PAdic::parse(s);
        if (x.is_zero())
            return PAdic::zero(p);
        if (x.prime() != p)
            throw UsageError("p-adic literal has prime " + std::to_string(x.prime()) +
                             ", field expects " + std::to_string(p));
        if (x.precision() < precision) {
            auto digits = x.digits();
            digits.resize(static_cast<std::size_t>(precision), 0);
            return PAdic::from_unit_digits(p, x.valuation(), std::move(digits));
        }
        return x;
    }
    std::string format(const Scalar& a) const {
        return a.is_zero() ? PAdic::zero(p).to_string() : a.to_string();
    }
};

} // namespace frechet
