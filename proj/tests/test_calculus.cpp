#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "frechet/calculus.hpp"
#include "frechet/generators.hpp"
#include "frechet/parser.hpp"
#include "frechet/vectorfields.hpp"

using namespace frechet;

namespace {
RationalField Q;
RealField R;
} // namespace

TEST_CASE("directional quotient of a linear map is exact for any step", "[calculus]") {
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        const int d = static_cast<int>(rng.uniform(1, 3));
        std::vector<Expr> rows;
        for (int r = 0; r < d; ++r) {
            Expr row = Expr::constant(0);
            for (int c = 0; c < d; ++c)
                row = row + Expr::constant(random_rational(rng)) * Expr::variable(c);
            rows.push_back(row);
        }
        auto f = black_box_from_exprs(Q, rows, d);
        auto x = random_vector(Q, rng, d);
        auto v = random_vector(Q, rng, d);
        auto t = Q.from_rational(random_nonzero_rational(rng));
        auto quotient = fd_directional(Q, f, x, v, t);
        auto reference = mat_vec(jacobian(Q, std::span<const Expr>(rows), x), v);
        CHECK(vec_eq(Q, quotient, reference));
    }
    // ultrametric route: forward quotient, exact as well
    PAdicField K(7, 20);
    std::vector<Expr> rows{Expr::constant(3) * Expr::variable(0) - Expr::variable(1),
                           Expr::variable(0) + Expr::variable(1)};
    auto f = black_box_from_exprs(K, rows, 2);
    Vector<PAdic> x{K.from_int(10), K.from_int(3)};
    Vector<PAdic> v{K.from_int(1), K.from_int(2)};
    auto quotient = fd_directional(K, f, x, v, K.from_int(49));
    auto reference = mat_vec(jacobian(K, std::span<const Expr>(rows), x), v);
    CHECK(vec_eq(K, quotient, reference));
}

TEST_CASE("central difference of x^2 converges at second order", "[calculus]") {
    auto f = black_box_from_exprs(R, {parse_expr("x1^2")}, 1);
    Vector<double> x{1.0}, v{1.0};
    std::vector<double> errors;
    double t = 0.1;
    for (int rung = 0; rung < 4; ++rung, t /= 2)
        errors.push_back(std::abs(fd_directional(R, f, x, v, t)[0] - 2.0));
    // quadratic convergence: error shrinks by about 4x per halving
    for (int rung = 0; rung + 1 < 4; ++rung) {
        // x^2 central differences are exact up to roundoff, so guard first
        if (errors[rung] > 1e-12) {
            double ratio = errors[rung] / errors[rung + 1];
            CHECK(ratio >= 3.0);
            CHECK(ratio <= 5.5);
        }
    }
    // the quotient itself is ~2 at every rung
    CHECK(std::abs(fd_directional(R, f, x, v, 1e-3)[0] - 2.0) <= 1e-9);
}

TEST_CASE("central-difference error ratios on a generic smooth function", "[calculus]") {
    auto e = parse_expr("exp(x1) + x1^3");
    auto f = black_box_from_exprs(R, {e}, 1);
    Vector<double> x{0.4}, v{1.0};
    double ref = deriv1(R, to_derivatives(R, taylor_at(R, e, x, 1)), 1);
    std::vector<LadderEntry> ladder;
    double t = 0.1;
    for (int rung = 0; rung < 4; ++rung, t /= 2)
        ladder.push_back({t, std::abs(fd_directional(R, f, x, v, t)[0] - ref)});
    for (int rung = 0; rung + 1 < 4; ++rung) {
        double ratio = ladder[static_cast<std::size_t>(rung)].error /
                       ladder[static_cast<std::size_t>(rung) + 1].error;
        CHECK(ratio >= 3.0);
        CHECK(ratio <= 5.5);
    }
    CHECK(convergence_order(ladder) == Catch::Approx(2.0).margin(0.3));
}

TEST_CASE("second quotient of a quadratic form is its polar form, any step", "[calculus]") {
    auto e = parse_expr("x1^2 + 3*x1*x2 - 2*x2^2");
    auto f = black_box_from_exprs(Q, {e}, 2);
    Rng rng(5);
    auto seq = to_derivatives(Q, taylor_at(Q, e, {Q.zero(), Q.zero()}, 2));
    for (int i = 0; i < 20; ++i) {
        auto x = random_vector(Q, rng, 2);
        auto v = random_vector(Q, rng, 2);
        auto w = random_vector(Q, rng, 2);
        auto t = Q.from_rational(random_nonzero_rational(rng));
        std::vector<Vector<Rational>> args{v, w};
        auto expected = ml_eval(Q, seq.tensors[2], std::span<const Vector<Rational>>(args))[0];
        CHECK(second_quotient(Q, f, x, v, w, t)[0] == expected);
    }
}

TEST_CASE("second quotient kills affine functions", "[calculus]") {
    auto f = black_box_from_exprs(Q, {parse_expr("3*x1 - 2*x2 + 7")}, 2);
    Rng rng(7);
    auto x = random_vector(Q, rng, 2);
    auto v = random_vector(Q, rng, 2);
    auto w = random_vector(Q, rng, 2);
    CHECK(second_quotient(Q, f, x, v, w, Q.one())[0] == 0);
}

TEST_CASE("second quotient of x1*x2 along basis directions is 1 for every step", "[calculus]") {
    auto f = black_box_from_exprs(Q, {parse_expr("x1*x2")}, 2);
    Rng rng(9);
    for (int i = 0; i < 10; ++i) {
        auto x = random_vector(Q, rng, 2);
        auto t = Q.from_rational(random_nonzero_rational(rng));
        CHECK(second_quotient(Q, f, x, basis_vector(Q, 2, 0), basis_vector(Q, 2, 1), t)[0] == 1);
    }
}

TEST_CASE("second quotient is literally symmetric in (v, w)", "[calculus]") {
    auto f = black_box_from_exprs(R, {parse_expr("exp(x1)*x2 + x1^3*x2^2")}, 2);
    Vector<double> x{0.2, 0.4}, v{1.0, -0.7}, w{0.3, 0.9};
    auto a = second_quotient(R, f, x, v, w, 1e-3);
    auto b = second_quotient(R, f, x, w, v, 1e-3);
    CHECK(a[0] == b[0]);
}

TEST_CASE("real second quotient approaches the AD second derivative", "[calculus]") {
    auto e = parse_expr("exp(x1*x2) + x1^3");
    auto f = black_box_from_exprs(R, {e}, 2);
    Vector<double> x{0.3, 0.2};
    auto seq = to_derivatives(R, taylor_at(R, e, x, 2));
    auto v = basis_vector(R, 2, 0);
    auto w = basis_vector(R, 2, 1);
    std::vector<Vector<double>> args{v, w};
    double ref = ml_eval(R, seq.tensors[2], std::span<const Vector<double>>(args))[0];
    CHECK(std::abs(second_quotient(R, f, x, v, w, 1e-4)[0] - ref) <= 1e-4);
    // mixed quotient with independent steps also converges, error O(t+s)
    CHECK(std::abs(mixed_quotient(R, f, x, v, w, 1e-4, 5e-5)[0] - ref) <= 1e-3);
}

TEST_CASE("counterexample: value checks from the digit formula", "[calculus]") {
    PAdicField K(5, 16);
    auto f = padic_counterexample(K);
    Rng rng(11);
    // f(0, y) = 0 for every y
    for (int i = 0; i < 10; ++i) {
        auto y = random_padic_center(K, rng, 8);
        CHECK(probe(K, f, {K.zero(), y})[0].is_zero());
    }
    // f(1, p) = p: single term k=0, l=1
    auto val = probe(K, f, {K.one(), K.from_int(5)})[0];
    CHECK(K.eq(val, K.from_int(5)));
}

TEST_CASE("counterexample: forward quotients match M = (0, x) at aligned probes", "[calculus]") {
    PAdicField K(5, 16);
    auto f = padic_counterexample(K);
    Rng rng(13);
    for (int i = 0; i < 25; ++i) {
        const int a = static_cast<int>(rng.uniform(1, 4));
        Vector<PAdic> pt{random_padic_center(K, rng, a), random_padic_center(K, rng, a)};
        auto t = PAdic::from_integer(K.p, K.precision, PAdic::pow_int(K.p, a));
        const double bound = std::pow(K.p, -(K.precision - a - 1));
        auto dx = fd_directional(K, f, pt, basis_vector(K, 2, 0), t)[0];
        auto dy = fd_directional(K, f, pt, basis_vector(K, 2, 1), t)[0];
        CHECK(dx.norm() <= bound);                 // df/dx = 0
        CHECK((dy - pt[0]).norm() <= bound);       // df/dy = x
    }
}

TEST_CASE("counterexample: mixed quotients depend on the step order", "[calculus]") {
    PAdicField K(5, 16);
    auto f = padic_counterexample(K);
    const Vector<PAdic> origin{K.zero(), K.zero()};
    auto e1 = basis_vector(K, 2, 0);
    auto e2 = basis_vector(K, 2, 1);
    auto step = [&](int a) { return PAdic::from_integer(K.p, K.precision, PAdic::pow_int(K.p, a)); };
    CHECK(K.eq(mixed_quotient(K, f, origin, e1, e2, step(1), step(3))[0], K.one()));
    CHECK(mixed_quotient(K, f, origin, e2, e1, step(1), step(3))[0].is_zero());
    CHECK(mixed_quotient(K, f, origin, e1, e2, step(3), step(1))[0].is_zero());
    CHECK(mixed_quotient(K, f, origin, e1, e2, step(2), step(2))[0].is_zero());
}

TEST_CASE("symmetry report: AD tensors are exactly symmetric", "[calculus]") {
    auto seq = to_derivatives(R, taylor_at(R, parse_expr("exp(x1*x2) + x1^2*x2"), {0.4, 0.1}, 2));
    CHECK(symmetry_check(R, seq).max_asymmetry == 0.0);
    auto seq_q = to_derivatives(Q, taylor_at(Q, parse_expr("x1^3*x2 + x2^2"), {Q.one(), Q.one()}, 3));
    CHECK(symmetry_check(Q, seq_q).max_asymmetry == 0.0);
    CHECK_THROWS_AS(symmetry_check(Q, to_derivatives(Q, taylor_at(Q, parse_expr("x1"), {Q.one()}, 1))),
                    UsageError);
}

TEST_CASE("symmetry report: FD-assembled tensors over the reals", "[calculus]") {
    auto f = black_box_from_exprs(R, {parse_expr("exp(x1*x2)")}, 2);
    auto seq = fd_assembled_second_derivative(R, f, Vector<double>{0.3, 0.2}, 1e-4, 5e-5);
    auto rep = symmetry_check(R, seq);
    CHECK(rep.max_asymmetry > 0.0);   // informative, not identically zero
    CHECK(rep.max_asymmetry <= 1e-5); // symmetric up to the FD error budget
}

TEST_CASE("symmetry report: p-adic counterexample has a norm-1 gap", "[calculus]") {
    PAdicField K(5, 16);
    auto f = padic_counterexample(K);
    auto t = PAdic::from_integer(5, 16, PAdic::pow_int(5, 1));
    auto s = PAdic::from_integer(5, 16, PAdic::pow_int(5, 3));
    auto seq = fd_assembled_second_derivative(K, f, {K.zero(), K.zero()}, t, s);
    CHECK(symmetry_check(K, seq).max_asymmetry == 1.0);
}

TEST_CASE("matrix-table construction agrees with the closed form", "[calculus]") {
    PAdicField K(5, 16);
    const int depth = 6;
    // lookup for M(x, y) = (0, x mod p^depth)
    auto table = [&](const BigInt& xk, const BigInt&) {
        return std::pair<PAdic, PAdic>{PAdic::zero(K.p), PAdic::from_integer(K.p, K.precision, xk)};
    };
    auto f_table = padic_from_matrix_table(K, depth, table);
    auto f_closed = padic_counterexample(K);
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        // probes supported below the lookup depth: the constructions agree
        Vector<PAdic> pt{random_padic_center(K, rng, depth), random_padic_center(K, rng, depth)};
        auto a = probe(K, f_table, pt)[0];
        auto b = probe(K, f_closed, pt)[0];
        CHECK(K.eq(a, b));
    }
    for (int i = 0; i < 10; ++i) {
        // deeper probes: the depth-truncation of M costs at most p^-depth
        Vector<PAdic> pt{random_padic_center(K, rng, 12), random_padic_center(K, rng, 12)};
        auto a = probe(K, f_table, pt)[0];
        auto b = probe(K, f_closed, pt)[0];
        CHECK((a - b).norm() <= std::pow(K.p, -depth));
    }
}

TEST_CASE("counterexample domain and precision guards", "[calculus]") {
    PAdicField K(5, 16);
    auto f = padic_counterexample(K);
    Vector<PAdic> outside{K.from_rational(Rational(1) / 5), K.zero()}; // norm 5 > 1
    CHECK_THROWS_AS(probe(K, f, outside), DomainError);
    CHECK_THROWS_AS(padic_mixed_demo(5, 2, 3, 3), DomainError);
    CHECK(padic_mixed_demo(5, 1, 3, 16).ok);
    CHECK(padic_mixed_demo(2, 2, 2, 16).ok);
    auto r = padic_mixed_demo(2, 2, 2, 16);
    CHECK(r.quotient_xy.is_zero());
    CHECK(r.quotient_yx.is_zero());
}

TEST_CASE("step validation", "[calculus]") {
    auto f = black_box_from_exprs(Q, {parse_expr("x1")}, 1);
    CHECK_THROWS_AS(fd_directional(Q, f, {Q.zero()}, {Q.one()}, Q.zero()), UsageError);
    CHECK_THROWS_AS(second_quotient(Q, f, {Q.zero()}, {Q.one()}, {Q.one()}, Q.zero()), UsageError);
}

TEST_CASE("convergence-order estimator on synthetic ladders", "[calculus]") {
    std::vector<LadderEntry> quad;
    for (double t : default_step_ladder())
        quad.push_back({t, 3.0 * t * t});
    CHECK(convergence_order(quad) == Catch::Approx(2.0).margin(1e-9));
    std::vector<LadderEntry> exact{{1e-2, 0.0}, {1e-3, 0.0}};
    CHECK(std::isinf(convergence_order(exact)));
}
