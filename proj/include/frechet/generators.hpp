#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "frechet/expr.hpp"
#include "frechet/fields.hpp"
#include "frechet/padic.hpp"
#include "frechet/taylor.hpp"

namespace frechet {

/// Seeded generator for the randomized property suites. Draws go through
/// plain modular reduction rather than std::uniform_int_distribution so a
/// seed reproduces the same cases on any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const auto range = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(eng_() % range);
    }

    bool chance(int num, int den) { return uniform(1, den) <= num; }

private:
    std::mt19937_64 eng_;
};

inline Rational random_rational(Rng& rng, int max_abs_num = 9, int max_den = 9) {
    return make_rational(BigInt(rng.uniform(-max_abs_num, max_abs_num)),
                         BigInt(rng.uniform(1, max_den)));
}

inline Rational random_nonzero_rational(Rng& rng, int max_abs_num = 9, int max_den = 9) {
    for (;;) {
        auto q = random_rational(rng, max_abs_num, max_den);
        if (q != 0)
            return q;
    }
}

template <NormedField F>
ScalarOf<F> random_scalar(const F& K, Rng& rng) {
    return K.from_rational(random_rational(rng));
}

template <NormedField F>
Vector<ScalarOf<F>> random_vector(const F& K, Rng& rng, int d) {
    Vector<ScalarOf<F>> v;
    v.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        v.push_back(random_scalar(K, rng));
    return v;
}

/// Random polynomial series: coefficients are dense small rationals up to
/// `degree`, zero padding up to `order` (so the series is the polynomial it
/// claims to be, not a truncation).
template <NormedField F>
TaylorSeries<ScalarOf<F>> random_polynomial_series(const F& K, Rng& rng, Vector<ScalarOf<F>> base,
                                                   int out_dim, int degree, int order) {
    auto s = ts_zero(K, std::move(base), order, out_dim);
    for (int n = 0; n <= degree && n <= order; ++n)
        for (auto& c : s.terms[static_cast<std::size_t>(n)].coeffs)
            c = K.from_rational(random_rational(rng, 4, 3));
    return s;
}

/// Random polynomial expression in d variables with total degree <= degree.
inline Expr random_polynomial_expr(Rng& rng, int d, int degree, int terms = 4) {
    Expr acc = Expr::constant(random_rational(rng, 3, 2));
    for (int t = 0; t < terms; ++t) {
        Expr mono = Expr::constant(random_nonzero_rational(rng, 3, 2));
        int budget = static_cast<int>(rng.uniform(1, degree));
        for (int b = 0; b < budget; ++b)
            mono = mono * Expr::variable(static_cast<int>(rng.uniform(0, d - 1)));
        acc = acc + mono;
    }
    return acc;
}

/// Random p-adic integer supported on digits below `depth` (a depth-aligned
/// ball center).
inline PAdic random_padic_center(const PAdicField& K, Rng& rng, int depth) {
    std::vector<std::pair<long, int>> terms;
    for (int n = 0; n < depth; ++n) {
        int digit = static_cast<int>(rng.uniform(0, K.p - 1));
        if (digit != 0)
            terms.push_back({n, digit});
    }
    return PAdic::from_terms(K.p, K.precision, terms);
}

} // namespace frechet
