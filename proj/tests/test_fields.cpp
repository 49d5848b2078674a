#include <catch2/catch_amalgamated.hpp>

#include "frechet/fields.hpp"
#include "frechet/generators.hpp"
#include "frechet/padic.hpp"

using namespace frechet;

TEST_CASE("rational norm basics", "[fields]") {
    RationalField Q;
    CHECK(Q.norm(Q.zero()) == 0.0);
    CHECK(Q.norm(Q.parse("-3/2")) == 1.5);
    CHECK(Q.norm(Q.one()) == 1.0);
}

TEST_CASE("rational norm is multiplicative", "[fields]") {
    RationalField Q;
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        auto a = random_rational(rng, 40, 15);
        auto b = random_rational(rng, 40, 15);
        // exact statement in the rationals themselves
        CHECK(abs(a * b) == abs(a) * abs(b));
        // and within float slack after conversion
        CHECK(Q.norm(a * b) == Catch::Approx(Q.norm(a) * Q.norm(b)).margin(1e-12));
    }
}

TEST_CASE("rational addition agrees with integer cross-multiplication", "[fields]") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        auto a = random_rational(rng, 30, 12);
        auto b = random_rational(rng, 30, 12);
        BigInt an = rational_num(a), ad = rational_den(a);
        BigInt bn = rational_num(b), bd = rational_den(b);
        BigInt num = an * bd + bn * ad;
        BigInt den = ad * bd;
        BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
        if (g != 0) {
            num /= g;
            den /= g;
        }
        auto sum = a + b;
        if (num == 0) {
            CHECK(sum == 0);
        } else {
            CHECK(rational_num(sum) == num);
            CHECK(rational_den(sum) == den);
        }
        // canonical form invariants
        CHECK(rational_den(sum) > 0);
        CHECK(boost::multiprecision::gcd(rational_num(sum) < 0 ? BigInt(-rational_num(sum))
                                                               : rational_num(sum),
                                         rational_den(sum)) <= 1);
    }
}

TEST_CASE("triangle inequality on sampled pairs", "[fields]") {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        auto a = random_rational(rng, 50, 20);
        auto b = random_rational(rng, 50, 20);
        CHECK(abs(a + b) <= abs(a) + abs(b)); // exact in the rationals
    }
    RealField R;
    for (int i = 0; i < 500; ++i) {
        double a = static_cast<double>(rng.uniform(-1000, 1000)) / 64.0;
        double b = static_cast<double>(rng.uniform(-1000, 1000)) / 64.0;
        CHECK(R.norm(a + b) <= R.norm(a) + R.norm(b) + 1e-12);
    }
}

namespace {

template <NormedField F>
void check_field_axioms(const F& K, ScalarOf<F> a, ScalarOf<F> b, ScalarOf<F> c) {
    CHECK(K.eq(K.add(K.add(a, b), c), K.add(a, K.add(b, c))));
    CHECK(K.eq(K.mul(K.mul(a, b), c), K.mul(a, K.mul(b, c))));
    CHECK(K.eq(K.mul(a, K.add(b, c)), K.add(K.mul(a, b), K.mul(a, c))));
    CHECK(K.eq(K.add(a, K.neg(a)), K.zero()));
    CHECK(K.eq(K.add(a, K.zero()), a));
    CHECK(K.eq(K.mul(a, K.one()), a));
    if (!K.is_zero(a))
        CHECK(K.eq(K.mul(a, K.div(K.one(), a)), K.one()));
}

} // namespace

TEST_CASE("field axioms hold on sampled triples", "[fields]") {
    Rng rng(17);
    RationalField Q;
    RealField R;
    PAdicField P5(5, 24);
    for (int i = 0; i < 60; ++i) {
        check_field_axioms(Q, random_scalar(Q, rng), random_scalar(Q, rng), random_scalar(Q, rng));
        check_field_axioms(R, random_scalar(R, rng), random_scalar(R, rng), random_scalar(R, rng));
        check_field_axioms(P5, P5.from_int(rng.uniform(-200, 200)), P5.from_int(rng.uniform(-200, 200)),
                           P5.from_int(rng.uniform(-200, 200)));
    }
}

TEST_CASE("rational literal parsing", "[fields]") {
    RationalField Q;
    CHECK(Q.parse("3/2") == Rational(3) / 2);
    CHECK(Q.parse("-3/2") == Rational(-3) / 2);
    CHECK(Q.parse("42") == 42);
    CHECK(Q.parse("1.25") == Rational(5) / 4);
    CHECK(Q.parse("2.5e-3") == Rational(1) / 400);
    CHECK(Q.parse("-0.5") == Rational(-1) / 2);
    CHECK_THROWS_AS(Q.parse("3/"), UsageError);
    CHECK_THROWS_AS(Q.parse("1/0"), UsageError);
    CHECK_THROWS_AS(Q.parse("abc"), UsageError);
    CHECK_THROWS_AS(Q.parse("1.5/2"), UsageError);
    CHECK(Q.format(Q.parse("6/4")) == "3/2");
    CHECK(Q.format(Q.parse("8/4")) == "2");
}

TEST_CASE("real field equality policy", "[fields]") {
    RealField R;
    CHECK(R.eq(1.0, 1.0 + 5e-10));
    CHECK_FALSE(R.eq(1.0, 1.0 + 1e-8));
    CHECK(R.is_zero(5e-10));
    CHECK_FALSE(R.is_zero(1e-8));
    RealField loose{1e-3, 1e-3};
    CHECK(loose.eq(1.0, 1.0005));
    CHECK(R.parse("0.125") == 0.125);
    CHECK(R.parse("3/4") == 0.75);
    double v = -1.0 / 3.0;
    CHECK(R.parse(R.format(v)) == v); // round-trip exact
}

TEST_CASE("real norm is multiplicative within ulp-scale tolerance", "[fields]") {
    RealField R;
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        double a = static_cast<double>(rng.uniform(-4000, 4000)) / 256.0;
        double b = static_cast<double>(rng.uniform(-4000, 4000)) / 256.0;
        double lhs = R.norm(a * b);
        double rhs = R.norm(a) * R.norm(b);
        CHECK(std::abs(lhs - rhs) <= 4e-16 * std::max(1.0, std::abs(rhs)));
    }
}
