#include <catch2/catch_amalgamated.hpp>

#include "frechet/generators.hpp"
#include "frechet/parser.hpp"
#include "frechet/vectorfields.hpp"

#include "support/oracles.hpp"

using namespace frechet;

namespace {

RationalField Q;
RealField R;

VectorField random_field(Rng& rng, int d, int degree) {
    VectorField V;
    for (int c = 0; c < d; ++c)
        V.components.push_back(random_polynomial_expr(rng, d, degree));
    return V;
}

/// Bracket field assembled symbolically: [V,W]_c = sum_j (dW_c/dx_j V_j - dV_c/dx_j W_j).
VectorField symbolic_bracket(const VectorField& V, const VectorField& W) {
    const int d = V.dim();
    VectorField B;
    for (int c = 0; c < d; ++c) {
        Expr acc = Expr::constant(0);
        for (int j = 0; j < d; ++j)
            acc = acc +
                  testing::diff(W.components[static_cast<std::size_t>(c)], j) *
                      V.components[static_cast<std::size_t>(j)] -
                  testing::diff(V.components[static_cast<std::size_t>(c)], j) *
                      W.components[static_cast<std::size_t>(j)];
        B.components.push_back(acc);
    }
    return B;
}

} // namespace

TEST_CASE("bracket of a field with itself vanishes", "[vectorfields]") {
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        auto V = random_field(rng, 2, 3);
        auto x = random_vector(Q, rng, 2);
        CHECK(sup_norm(Q, lie_bracket(Q, V, V, x)) == 0.0);
    }
}

TEST_CASE("bracket of e1 with x1*e2 is e2", "[vectorfields]") {
    VectorField V{{Expr::constant(1), Expr::constant(0)}};
    VectorField W{{Expr::constant(0), Expr::variable(0)}};
    Rng rng(5);
    auto x = random_vector(Q, rng, 2);
    auto b = lie_bracket(Q, V, W, x);
    CHECK(b[0] == 0);
    CHECK(b[1] == 1);
}

TEST_CASE("bracket agrees with the symbolic route", "[vectorfields]") {
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
        auto V = random_field(rng, 2, 3);
        auto W = random_field(rng, 2, 3);
        auto x = random_vector(Q, rng, 2);
        auto direct = lie_bracket(Q, V, W, x);
        auto sym = vf_eval(Q, symbolic_bracket(V, W), x);
        CHECK(vec_eq(Q, direct, sym));
        // and the bracket-field Jacobian matches the symbolic Jacobian
        auto JB = bracket_jacobian(Q, V, W, x);
        auto JS = jacobian(Q, symbolic_bracket(V, W), x);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                CHECK(JB.at(r, c) == JS.at(r, c));
    }
}

TEST_CASE("antisymmetry and bilinearity, exact", "[vectorfields]") {
    Rng rng(9);
    for (int i = 0; i < 10; ++i) {
        auto V = random_field(rng, 2, 3);
        auto W = random_field(rng, 2, 3);
        auto x = random_vector(Q, rng, 2);
        CHECK(vec_eq(Q, lie_bracket(Q, V, W, x),
                     vec_scale(Q.neg(Q.one()), lie_bracket(Q, W, V, x))));

        auto V2 = random_field(rng, 2, 3);
        auto a = random_rational(rng);
        auto b = random_rational(rng);
        VectorField combo;
        for (int c = 0; c < 2; ++c)
            combo.components.push_back(Expr::constant(a) * V.components[static_cast<std::size_t>(c)] +
                                       Expr::constant(b) * V2.components[static_cast<std::size_t>(c)]);
        auto lhs = lie_bracket(Q, combo, W, x);
        auto rhs = vec_add(vec_scale(Q.from_rational(a), lie_bracket(Q, V, W, x)),
                           vec_scale(Q.from_rational(b), lie_bracket(Q, V2, W, x)));
        CHECK(vec_eq(Q, lhs, rhs));
    }
}

TEST_CASE("Jacobi identity, exact", "[vectorfields]") {
    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        auto U = random_field(rng, 2, 3);
        auto V = random_field(rng, 2, 3);
        auto W = random_field(rng, 2, 3);
        auto x = random_vector(Q, rng, 2);
        auto total = vec_add(nested_bracket(Q, U, V, W, x),
                             vec_add(nested_bracket(Q, V, W, U, x), nested_bracket(Q, W, U, V, x)));
        CHECK(sup_norm(Q, total) == 0.0);
    }
}

TEST_CASE("pullback under the identity and under linear maps", "[vectorfields]") {
    Rng rng(13);
    std::vector<Expr> ident{Expr::variable(0), Expr::variable(1)};
    auto V = random_field(rng, 2, 2);
    auto x = random_vector(Q, rng, 2);
    CHECK(vec_eq(Q, pullback(Q, std::span<const Expr>(ident), V, x), vf_eval(Q, V, x)));

    std::vector<Expr> lin{Expr::constant(2) * Expr::variable(0) + Expr::variable(1),
                          Expr::variable(0) + Expr::variable(1)};
    Matrix<Rational> A(Q, 2, 2);
    A.at(0, 0) = 2;
    A.at(0, 1) = 1;
    A.at(1, 0) = 1;
    A.at(1, 1) = 1;
    auto expected = mat_vec(mat_inverse(Q, A), vf_eval(Q, V, mat_vec(A, x)));
    CHECK(vec_eq(Q, pullback(Q, std::span<const Expr>(lin), V, x), expected));
}

TEST_CASE("pullback chain rule, exact over rationals", "[vectorfields]") {
    Rng rng(15);
    for (int i = 0; i < 10; ++i) {
        std::vector<Expr> f, g;
        for (int c = 0; c < 2; ++c) {
            f.push_back(Expr::variable(c) +
                        Expr::constant(random_rational(rng, 2, 5)) * Expr::variable(0) * Expr::variable(1));
            g.push_back(Expr::variable(c) +
                        Expr::constant(random_rational(rng, 2, 5)) * Expr::variable(1 - c) * Expr::variable(1 - c));
        }
        auto V = random_field(rng, 2, 2);
        Vector<Rational> x{Rational(1) / 8, Rational(-1) / 8};
        std::vector<Expr> fog;
        for (int c = 0; c < 2; ++c)
            fog.push_back(substitute(f[static_cast<std::size_t>(c)], std::span<const Expr>(g)));
        auto lhs = pullback(Q, std::span<const Expr>(fog), V, x);
        Vector<Rational> gx;
        for (const auto& e : g)
            gx.push_back(expr_eval(Q, e, x));
        auto inner = pullback(Q, std::span<const Expr>(f), V, gx);
        auto rhs = mat_vec(mat_inverse(Q, jacobian(Q, std::span<const Expr>(g), x)), inner);
        CHECK(vec_eq(Q, lhs, rhs));
    }
}

TEST_CASE("pullback rejects singular Jacobians", "[vectorfields]") {
    std::vector<Expr> f{parse_expr("x1^2"), parse_expr("x2")};
    VectorField V{{Expr::constant(1), Expr::constant(1)}};
    CHECK_THROWS_AS(pullback(Q, std::span<const Expr>(f), V, Vector<Rational>{Q.zero(), Q.zero()}),
                    SingularMapError);
}

TEST_CASE("pullback commutes with the bracket: linear maps, exactly", "[vectorfields]") {
    Rng rng(17);
    std::vector<Expr> lin{Expr::constant(2) * Expr::variable(0) + Expr::variable(1),
                          Expr::variable(0) - Expr::variable(1)};
    auto V = random_field(rng, 2, 3);
    auto W = random_field(rng, 2, 3);
    auto x = random_vector(Q, rng, 2);
    auto rep = check_pullback_bracket(Q, std::span<const Expr>(lin), V, W, x);
    CHECK(rep.error_norm == 0.0);
    CHECK(rep.cancel_symm_residual == 0.0); // D^2 of a linear map is zero
}

TEST_CASE("pullback commutes with the bracket: polynomial diffeos, exactly", "[vectorfields]") {
    Rng rng(19);
    for (int i = 0; i < 20; ++i) {
        std::vector<Expr> f;
        for (int c = 0; c < 2; ++c)
            f.push_back(Expr::variable(c) +
                        Expr::constant(random_rational(rng, 2, 3)) * Expr::variable(0) * Expr::variable(1) +
                        Expr::constant(random_rational(rng, 2, 3)) * Expr::variable(c) * Expr::variable(c));
        auto V = random_field(rng, 2, 3);
        auto W = random_field(rng, 2, 3);
        auto rep = check_pullback_bracket(Q, std::span<const Expr>(f), V, W, vec_of_zeros(Q, 2));
        CHECK(rep.error_norm == 0.0);
        CHECK(rep.cancel_symm_residual == 0.0);
    }
}

TEST_CASE("pullback commutes with the bracket over the reals", "[vectorfields]") {
    std::vector<Expr> f{parse_expr("x1 + x2^2"), parse_expr("x2")};
    VectorField V{{parse_expr("x1*x2"), parse_expr("x1 - x2")}};
    VectorField W{{parse_expr("x2*x2"), parse_expr("x1")}};
    auto rep = check_pullback_bracket(R, std::span<const Expr>(f), V, W, Vector<double>{0.7, -0.4});
    CHECK(rep.error_norm <= 1e-8);
    CHECK(rep.cancel_symm_residual <= 1e-12);
}

TEST_CASE("smoothness policy gates non-archimedean inputs", "[vectorfields]") {
    PAdicField K(5, 24);
    VectorField V{{parse_expr("x1*x2"), parse_expr("x1")}};
    VectorField W{{parse_expr("x2"), parse_expr("x1+x2")}};

    std::vector<Expr> with_exp{parse_expr("x1 + exp(x2)"), parse_expr("x2")};
    CHECK_THROWS_AS(check_pullback_bracket(K, std::span<const Expr>(with_exp), V, W, vec_of_zeros(K, 2)),
                    MinSmoothnessError);

    std::vector<Expr> rational_ops{parse_expr("x1 + x1*x2"), parse_expr("x2 + x1*x1")};
    auto rep = check_pullback_bracket(K, std::span<const Expr>(rational_ops), V, W, vec_of_zeros(K, 2));
    CHECK(rep.error_norm == 0.0);
    CHECK(rep.cancel_symm_residual == 0.0);

    SmoothnessPolicy real_policy{FieldKind::real, 2};
    CHECK(real_policy.admits(parse_expr("exp(x1)")));
    SmoothnessPolicy padic_policy{FieldKind::padic, 2};
    CHECK_FALSE(padic_policy.admits(parse_expr("exp(x1)")));
    CHECK(padic_policy.admits(parse_expr("x1*x2 + 1/3")));
}
