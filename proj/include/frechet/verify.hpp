#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "frechet/calculus.hpp"
#include "frechet/expr.hpp"
#include "frechet/fields.hpp"
#include "frechet/generators.hpp"
#include "frechet/padic.hpp"
#include "frechet/parser.hpp"
#include "frechet/partitions.hpp"
#include "frechet/taylor.hpp"
#include "frechet/vectorfields.hpp"

namespace frechet {

struct CaseResult {
    std::string name;
    bool pass = false;
    std::string detail;
    std::vector<LadderEntry> ladder; // populated by ladder-style cases
};

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CaseResult> cases;

    bool pass() const {
        for (const auto& c : cases)
            if (!c.pass)
                return false;
        return true;
    }
};

struct VerifyOptions {
    std::vector<double> steps = default_step_ladder();
};

namespace detail {

struct SuiteBuilder {
    SuiteResult result;

    void add(std::string name, bool pass, std::string detail = {},
             std::vector<LadderEntry> ladder = {}) {
        result.cases.push_back({std::move(name), pass, std::move(detail), std::move(ladder)});
    }
};

inline std::string partition_key(const SetPartition& P) {
    std::string s;
    for (const auto& part : P.parts) {
        s += '|';
        for (int x : part) {
            s += std::to_string(x);
            s += ',';
        }
    }
    return s;
}

// --------------------------------------------------------------------------
// partitions
// --------------------------------------------------------------------------

inline SuiteResult suite_partitions() {
    SuiteBuilder b;
    b.result.suite = "partitions";

    // Bell numbers by the Bell-triangle recurrence, independent of the
    // enumeration under test.
    std::vector<long> bell{1};
    {
        std::vector<long> row{1};
        for (int n = 1; n <= 7; ++n) {
            std::vector<long> next{row.back()};
            for (long v : row)
                next.push_back(next.back() + v);
            bell.push_back(next.front());
            row = std::move(next);
        }
    }
    bool counts_ok = true;
    std::string counts;
    for (int n = 0; n <= 7; ++n) {
        auto parts = enumerate_partitions(n);
        counts_ok = counts_ok && static_cast<long>(parts.size()) == bell[static_cast<std::size_t>(n)];
        counts += std::to_string(parts.size()) + (n < 7 ? "," : "");
    }
    b.add("bell-counts-0-7", counts_ok, counts);

    bool canon_ok = true;
    for (int n = 0; n <= 7 && canon_ok; ++n)
        for (const auto& P : enumerate_partitions(n))
            canon_ok = canon_ok && is_canonical(P);
    b.add("canonical-order", canon_ok);

    bool bij_ok = true;
    for (int n = 0; n <= 6 && bij_ok; ++n) {
        std::map<std::string, int> extended;
        for (const auto& P : enumerate_partitions(n))
            for (const auto& Q : extend_partition(P)) {
                bij_ok = bij_ok && is_canonical(Q);
                ++extended[partition_key(Q)];
            }
        std::map<std::string, int> direct;
        for (const auto& Q : enumerate_partitions(n + 1))
            ++direct[partition_key(Q)];
        bij_ok = bij_ok && extended == direct;
        for (const auto& [key, count] : extended)
            bij_ok = bij_ok && count == 1;
    }
    b.add("extension-bijection", bij_ok, "each (n+1)-partition produced exactly once, n <= 6");

    return b.result;
}

// --------------------------------------------------------------------------
// compose
// --------------------------------------------------------------------------

inline SuiteResult suite_compose(std::uint64_t seed) {
    SuiteBuilder b;
    b.result.suite = "compose";
    b.result.seed = seed;
    RationalField Q;
    Rng rng(seed);

    int id_ok = 0;
    const int id_total = 20;
    for (int i = 0; i < id_total; ++i) {
        const int d = static_cast<int>(rng.uniform(1, 3));
        auto base = random_vector(Q, rng, d);
        auto t = random_polynomial_series(Q, rng, base, d, 3, 3);
        auto s = random_polynomial_series(Q, rng, base, 1, 3, 3);
        bool left = ts_eq(Q, ts_compose(Q, ts_identity(Q, t.value(), 3), t), t);
        bool right = ts_eq(Q, ts_compose(Q, s, ts_identity(Q, base, 3)), s);
        if (left && right)
            ++id_ok;
    }
    b.add("identity-laws", id_ok == id_total,
          std::to_string(id_ok) + "/" + std::to_string(id_total) + " exact matches");

    int eval_ok = 0;
    const int eval_total = 100;
    for (int i = 0; i < eval_total; ++i) {
        const int d = static_cast<int>(rng.uniform(1, 3));
        const int mid = static_cast<int>(rng.uniform(1, 2));
        const int df = static_cast<int>(rng.uniform(1, 2));
        const int dg = static_cast<int>(rng.uniform(1, 2));
        const int N = df * dg;
        auto x = random_vector(Q, rng, d);
        auto f = random_polynomial_series(Q, rng, x, mid, df, N);
        auto g = random_polynomial_series(Q, rng, f.value(), 1, dg, N);
        auto gf = ts_compose(Q, g, f);
        bool ok = true;
        for (int pt = 0; pt < 3 && ok; ++pt) {
            auto y = random_vector(Q, rng, d);
            ok = vec_eq(Q, ts_eval(Q, gf, y), ts_eval(Q, g, ts_eval(Q, f, y)));
        }
        if (ok)
            ++eval_ok;
    }
    b.add("eval-agreement", eval_ok == eval_total,
          std::to_string(eval_ok) + "/" + std::to_string(eval_total) + " exact matches");

    int assoc_ok = 0;
    const int assoc_total = 20;
    for (int i = 0; i < assoc_total; ++i) {
        const int d = static_cast<int>(rng.uniform(1, 2));
        const int m1 = static_cast<int>(rng.uniform(1, 2));
        const int m2 = static_cast<int>(rng.uniform(1, 2));
        auto x = random_vector(Q, rng, d);
        auto f = random_polynomial_series(Q, rng, x, m1, 2, 4);
        auto g = random_polynomial_series(Q, rng, f.value(), m2, 2, 4);
        auto h = random_polynomial_series(Q, rng, g.value(), 1, 2, 4);
        if (ts_eq(Q, ts_compose(Q, h, ts_compose(Q, g, f)), ts_compose(Q, ts_compose(Q, h, g), f)))
            ++assoc_ok;
    }
    b.add("associativity", assoc_ok == assoc_total,
          std::to_string(assoc_ok) + "/" + std::to_string(assoc_total) + " exact matches");

    return b.result;
}

// --------------------------------------------------------------------------
// reversion
// --------------------------------------------------------------------------

inline SuiteResult suite_reversion(std::uint64_t seed) {
    SuiteBuilder b;
    b.result.suite = "reversion";
    b.result.seed = seed;
    RationalField Q;
    Rng rng(seed);

    {
        auto p = ts_zero(Q, {Q.zero()}, 4, 1);
        p.terms[1].coeffs[0] = Q.one();
        p.terms[2].coeffs[0] = Q.one();
        auto q = ts_reversion(Q, p, 4);
        const Rational expected[] = {Rational(0), Rational(1), Rational(-1), Rational(2), Rational(-5)};
        bool ok = true;
        for (int n = 0; n <= 4; ++n)
            ok = ok && q.terms[static_cast<std::size_t>(n)].coeffs[0] == expected[n];
        b.add("witness-x-plus-x2", ok, "q = x - x^2 + 2x^3 - 5x^4");
    }

    int rev_ok = 0;
    const int rev_total = 50;
    for (int i = 0; i < rev_total; ++i) {
        const int d = static_cast<int>(rng.uniform(1, 2));
        const int N = static_cast<int>(rng.uniform(2, 4));
        auto x = random_vector(Q, rng, d);
        TaylorSeries<Rational> p;
        for (;;) {
            p = random_polynomial_series(Q, rng, x, d, N, N);
            Matrix<Rational> A(Q, d, d);
            for (int o = 0; o < d; ++o)
                for (int j = 0; j < d; ++j)
                    A.at(o, j) = p.terms[1].coeffs[static_cast<std::size_t>(o) * d + j];
            try {
                mat_inverse(Q, A);
                break;
            } catch (const SingularMapError&) {
            }
        }
        auto q = ts_reversion(Q, p, N);
        bool ok = ts_eq(Q, ts_compose(Q, q, p), ts_identity(Q, p.base_point, N)) &&
                  ts_eq(Q, ts_compose(Q, p, q), ts_identity(Q, q.base_point, N));
        if (ok)
            ++rev_ok;
    }
    b.add("two-sided-identity", rev_ok == rev_total,
          std::to_string(rev_ok) + "/" + std::to_string(rev_total) + " exact matches");

    {
        auto p = ts_zero(Q, {Q.zero()}, 2, 1);
        p.terms[2].coeffs[0] = Q.one(); // p = x^2, singular linear term
        bool threw = false;
        try {
            ts_reversion(Q, p, 2);
        } catch (const SingularMapError&) {
            threw = true;
        }
        b.add("singular-linear-term", threw, "SingularMapError raised");
    }

    return b.result;
}

// --------------------------------------------------------------------------
// rebase
// --------------------------------------------------------------------------

inline SuiteResult suite_rebase(std::uint64_t seed) {
    SuiteBuilder b;
    b.result.suite = "rebase";
    b.result.seed = seed;
    RationalField Q;
    Rng rng(seed);

    {
        auto s = taylor_at(Q, parse_expr("x^2"), Vector<Rational>{Q.zero()}, 2);
        auto r = ts_rebase(Q, s, {Q.one()});
        bool ok = r.terms[0].coeffs[0] == 1 && r.terms[1].coeffs[0] == 2 && r.terms[2].coeffs[0] == 1;
        b.add("witness-square-at-1", ok, "series 1 + 2(x-1) + (x-1)^2");
    }

    {
        const int d = 2;
        auto x = random_vector(Q, rng, d);
        auto s = random_polynomial_series(Q, rng, x, 1, 3, 3);
        auto r = ts_rebase(Q, s, vec_of_zeros(Q, d));
        bool ok = ts_eq(Q, r, s);
        b.add("zero-offset", ok, "rebase by 0 returns the same terms");
    }

    int ok_count = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        const int d = static_cast<int>(rng.uniform(1, 3));
        const int N = static_cast<int>(rng.uniform(1, 5));
        auto x = random_vector(Q, rng, d);
        auto s = random_polynomial_series(Q, rng, x, 1, N, N);
        auto y = random_vector(Q, rng, d);
        auto r = ts_rebase(Q, s, y);
        bool ok = true;
        for (int pt = 0; pt < 10 && ok; ++pt) {
            auto z = random_vector(Q, rng, d);
            ok = vec_eq(Q, ts_eval(Q, r, z), ts_eval(Q, s, z));
        }
        if (ok)
            ++ok_count;
    }
    b.add("eval-agreement", ok_count == total,
          std::to_string(ok_count) + "/" + std::to_string(total) + " exact matches");

    return b.result;
}

// --------------------------------------------------------------------------
// symmetry
// --------------------------------------------------------------------------

inline SuiteResult suite_symmetry(std::uint64_t seed) {
    SuiteBuilder b;
    b.result.suite = "symmetry";
    b.result.seed = seed;
    RationalField Q;
    RealField R;
    Rng rng(seed);

    {
        bool ok = true;
        for (int i = 0; i < 10 && ok; ++i) {
            auto e = random_polynomial_expr(rng, 2, 3);
            auto seq = to_derivatives(Q, taylor_at(Q, e, random_vector(Q, rng, 2), 3));
            ok = symmetry_check(Q, seq).max_asymmetry == 0.0;
        }
        b.add("ad-symmetric-rational", ok, "asymmetry exactly 0 for to_derivatives output");
    }

    {
        auto e = parse_expr("exp(x1*x2) + x1^3*x2");
        auto seq = to_derivatives(R, taylor_at(R, e, Vector<double>{0.3, 0.2}, 3));
        double a = symmetry_check(R, seq).max_asymmetry;
        b.add("ad-symmetric-real", a == 0.0, "asymmetry " + std::to_string(a));
    }

    {
        PAdicField K(5, 16);
        auto f = padic_counterexample(K);
        auto t = PAdic::from_integer(5, 16, PAdic::pow_int(5, 1));
        auto s = PAdic::from_integer(5, 16, PAdic::pow_int(5, 3));
        auto seq = fd_assembled_second_derivative(K, f, {K.zero(), K.zero()}, t, s);
        auto rep = symmetry_check(K, seq);
        b.add("padic-counterexample-gap", rep.max_asymmetry == 1.0,
              "assembled mixed quotients differ with p-adic norm " + std::to_string(rep.max_asymmetry));
    }

    {
        auto f = black_box_from_exprs(R, {parse_expr("exp(x1*x2)")}, 2);
        auto seq = fd_assembled_second_derivative(R, f, Vector<double>{0.3, 0.2}, 1e-4, 5e-5);
        auto rep = symmetry_check(R, seq);
        b.add("real-fd-asymmetry", rep.max_asymmetry <= 1e-5,
              "asymmetry " + std::to_string(rep.max_asymmetry) + " at t = 1e-4");
    }

    {
        auto f = black_box_from_exprs(R, {parse_expr("exp(x1)*x2 + x1^2*x2^2")}, 2);
        Vector<double> x{0.4, -0.3}, v{1.0, 0.5}, w{-0.25, 1.0};
        auto a = second_quotient(R, f, x, v, w, 1e-3);
        auto bq = second_quotient(R, f, x, w, v, 1e-3);
        b.add("second-quotient-swap-invariance", a == bq, "identical values under (v,w) swap");
    }

    return b.result;
}

// --------------------------------------------------------------------------
// lie
// --------------------------------------------------------------------------

inline VectorField random_vector_field(Rng& rng, int d, int degree) {
    VectorField V;
    for (int c = 0; c < d; ++c)
        V.components.push_back(random_polynomial_expr(rng, d, degree));
    return V;
}

inline SuiteResult suite_lie(std::uint64_t seed) {
    SuiteBuilder b;
    b.result.suite = "lie";
    b.result.seed = seed;
    RationalField Q;
    RealField R;
    Rng rng(seed);
    const int d = 2;

    int anti_ok = 0, jacobi_ok = 0;
    const int triples = 50;
    for (int i = 0; i < triples; ++i) {
        auto U = random_vector_field(rng, d, 3);
        auto V = random_vector_field(rng, d, 3);
        auto W = random_vector_field(rng, d, 3);
        auto x = random_vector(Q, rng, d);
        auto vw = lie_bracket(Q, V, W, x);
        auto wv = lie_bracket(Q, W, V, x);
        if (vec_eq(Q, vw, vec_scale(Q.neg(Q.one()), wv)))
            ++anti_ok;
        auto sum = vec_add(nested_bracket(Q, U, V, W, x),
                           vec_add(nested_bracket(Q, V, W, U, x), nested_bracket(Q, W, U, V, x)));
        if (sup_norm(Q, sum) == 0.0)
            ++jacobi_ok;
    }
    b.add("antisymmetry", anti_ok == triples,
          std::to_string(anti_ok) + "/" + std::to_string(triples) + " exact matches");
    b.add("jacobi-identity", jacobi_ok == triples,
          std::to_string(jacobi_ok) + "/" + std::to_string(triples) + " exact matches");

    {
        bool ok = true;
        for (int i = 0; i < 10 && ok; ++i) {
            auto V1 = random_vector_field(rng, d, 2);
            auto V2 = random_vector_field(rng, d, 2);
            auto W = random_vector_field(rng, d, 2);
            auto a = random_rational(rng), c = random_rational(rng);
            VectorField combo;
            for (int k = 0; k < d; ++k)
                combo.components.push_back(Expr::constant(a) * V1.components[static_cast<std::size_t>(k)] +
                                           Expr::constant(c) * V2.components[static_cast<std::size_t>(k)]);
            auto x = random_vector(Q, rng, d);
            auto lhs = lie_bracket(Q, combo, W, x);
            auto rhs = vec_add(vec_scale(Q.from_rational(a), lie_bracket(Q, V1, W, x)),
                               vec_scale(Q.from_rational(c), lie_bracket(Q, V2, W, x)));
            ok = vec_eq(Q, lhs, rhs);
        }
        b.add("bilinearity", ok, "exact over rationals");
    }

    {
        std::vector<Expr> ident{Expr::variable(0), Expr::variable(1)};
        auto V = random_vector_field(rng, d, 2);
        auto x = random_vector(Q, rng, d);
        bool ok = vec_eq(Q, pullback(Q, ident, V, x), vf_eval(Q, V, x));
        b.add("pullback-identity", ok, "pullback under the identity is V");
    }

    {
        // f = A x with A = [[2,1],[1,1]]: pullback V (x) = A^{-1} V(Ax).
        std::vector<Expr> lin{Expr::constant(2) * Expr::variable(0) + Expr::variable(1),
                              Expr::variable(0) + Expr::variable(1)};
        auto V = random_vector_field(rng, d, 2);
        auto x = random_vector(Q, rng, d);
        Matrix<Rational> A(Q, 2, 2);
        A.at(0, 0) = 2;
        A.at(0, 1) = 1;
        A.at(1, 0) = 1;
        A.at(1, 1) = 1;
        auto expected = mat_vec(mat_inverse(Q, A), vf_eval(Q, V, mat_vec(A, x)));
        bool ok = vec_eq(Q, pullback(Q, lin, V, x), expected);
        b.add("pullback-linear", ok, "A^{-1} V(Ax) reproduced");
    }

    {
        // chain rule over the reals: pb_{f.g} V = pb_g (pb_f V)
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            std::vector<Expr> f, g;
            for (int c = 0; c < d; ++c) {
                auto qf = random_rational(rng, 2, 10);
                auto qg = random_rational(rng, 2, 10);
                f.push_back(Expr::variable(c) + Expr::constant(qf) * Expr::variable(0) * Expr::variable(1));
                g.push_back(Expr::variable(c) + Expr::constant(qg) * Expr::variable(1 - c) * Expr::variable(1 - c));
            }
            auto V = random_vector_field(rng, d, 2);
            Vector<double> x{0.2, -0.1};
            std::vector<Expr> fog;
            for (int c = 0; c < d; ++c)
                fog.push_back(substitute(f[static_cast<std::size_t>(c)], std::span<const Expr>(g)));
            auto lhs = pullback(R, fog, V, x);
            Vector<double> gx;
            for (const auto& e : g)
                gx.push_back(expr_eval(R, e, x));
            auto inner = pullback(R, f, V, gx);
            auto rhs = mat_vec(mat_inverse(R, jacobian(R, std::span<const Expr>(g), x)), inner);
            double err = sup_norm(R, vec_sub(lhs, rhs));
            worst = std::max(worst, err);
            ok = ok && err <= 1e-8;
        }
        b.add("pullback-chain-rule", ok, "max error " + std::to_string(worst));
    }

    {
        int ok_count = 0;
        const int total = 20;
        for (int i = 0; i < total; ++i) {
            std::vector<Expr> f;
            for (int c = 0; c < d; ++c)
                f.push_back(Expr::variable(c) +
                            Expr::constant(random_rational(rng, 2, 3)) * Expr::variable(0) * Expr::variable(1) +
                            Expr::constant(random_rational(rng, 2, 3)) * Expr::variable(c) * Expr::variable(c));
            auto V = random_vector_field(rng, d, 3);
            auto W = random_vector_field(rng, d, 3);
            auto rep = check_pullback_bracket(Q, std::span<const Expr>(f), V, W, vec_of_zeros(Q, d));
            if (rep.error_norm == 0.0 && rep.cancel_symm_residual == 0.0)
                ++ok_count;
        }
        b.add("pullback-bracket-rational", ok_count == total,
              std::to_string(ok_count) + "/" + std::to_string(total) + " exact matches");
    }

    {
        std::vector<Expr> f{parse_expr("x1 + x2^2"), parse_expr("x2")};
        VectorField V{{parse_expr("x1*x2"), parse_expr("x1 - x2")}};
        VectorField W{{parse_expr("x2*x2"), parse_expr("x1")}};
        auto rep = check_pullback_bracket(R, std::span<const Expr>(f), V, W, Vector<double>{0.7, -0.4});
        bool ok = rep.error_norm <= 1e-8 && rep.cancel_symm_residual <= 1e-12;
        b.add("pullback-bracket-real", ok,
              "error " + std::to_string(rep.error_norm) + ", residual " +
                  std::to_string(rep.cancel_symm_residual));
    }

    {
        PAdicField K(5, 24);
        VectorField V{{parse_expr("x1*x2"), parse_expr("x1")}};
        VectorField W{{parse_expr("x2"), parse_expr("x1+x2")}};
        std::vector<Expr> bad{parse_expr("x1 + exp(x2)"), parse_expr("x2")};
        bool gated = false;
        try {
            check_pullback_bracket(K, std::span<const Expr>(bad), V, W, vec_of_zeros(K, 2));
        } catch (const MinSmoothnessError&) {
            gated = true;
        }
        std::vector<Expr> good{parse_expr("x1 + x1*x2"), parse_expr("x2 + x1*x1")};
        auto rep = check_pullback_bracket(K, std::span<const Expr>(good), V, W, vec_of_zeros(K, 2));
        b.add("min-smoothness-gate", gated && rep.error_norm == 0.0,
              "non-analytic rejected; rational ops exact");
    }

    return b.result;
}

// --------------------------------------------------------------------------
// oracle
// --------------------------------------------------------------------------

struct OracleCase {
    const char* expr;
    Vector<double> point;
    int direction;
};

// Points and coefficients keep the pure-direction third derivative large
// (so the central-difference ladder stays truncation-dominated) while the
// mixed third derivatives stay small enough for the 1e-4 second-quotient
// budget at t = 1e-4.
inline const std::vector<OracleCase>& oracle_cases() {
    static const std::vector<OracleCase> cases{
        {"x1^3 + exp(x1)*x2/2", {0.5, 0.7}, 0},
        {"x2^3 + x1*x2^2/2 + exp(x2)", {0.8, 0.4}, 1},
        {"exp(x1*x2) + x1^3", {0.3, 0.2}, 0},
        {"log(2 + x1)*x2 + x1^3", {0.3, 1.1}, 0},
        {"recip1m(x1/2)*x2/2 + x2^3", {0.4, 0.9}, 1},
    };
    return cases;
}

inline SuiteResult suite_oracle(std::uint64_t seed, const VerifyOptions& opt) {
    SuiteBuilder b;
    b.result.suite = "oracle";
    b.result.seed = seed;
    RationalField Q;
    RealField R;
    Rng rng(seed);

    {
        bool ok = true;
        for (int i = 0; i < 10 && ok; ++i) {
            const int dim = static_cast<int>(rng.uniform(1, 3));
            std::vector<Expr> rows;
            for (int r = 0; r < dim; ++r) {
                Expr row = Expr::constant(0);
                for (int c = 0; c < dim; ++c)
                    row = row + Expr::constant(random_rational(rng)) * Expr::variable(c);
                rows.push_back(row);
            }
            auto f = black_box_from_exprs(Q, rows, dim);
            auto x = random_vector(Q, rng, dim);
            auto v = random_vector(Q, rng, dim);
            auto t = random_nonzero_rational(rng);
            auto quotient = fd_directional(Q, f, x, v, Q.from_rational(t));
            auto reference = mat_vec(jacobian(Q, std::span<const Expr>(rows), x), v);
            ok = vec_eq(Q, quotient, reference);
        }
        b.add("linear-exact-rational", ok, "quotient equals L(v) for any step");
    }

    {
        PAdicField K(7, 24);
        std::vector<Expr> rows{Expr::constant(3) * Expr::variable(0) + Expr::variable(1),
                               Expr::variable(0) - Expr::constant(2) * Expr::variable(1)};
        auto f = black_box_from_exprs(K, rows, 2);
        Vector<PAdic> x{K.from_int(12), K.from_int(-5)};
        Vector<PAdic> v{K.from_int(2), K.from_int(3)};
        auto quotient = fd_directional(K, f, x, v, K.from_int(49));
        auto reference = mat_vec(jacobian(K, std::span<const Expr>(rows), x), v);
        b.add("linear-exact-padic", vec_eq(K, quotient, reference), "forward quotient exact");
    }

    {
        bool all_ok = true;
        std::vector<LadderEntry> last_ladder;
        double worst_final = 0.0, worst_dev = 0.0;
        // Error budget at the finest configured rung: 100 * t_min^2 (the
        // second-order truncation budget; 1e-8 on the default ladder).
        double t_min = opt.steps.empty() ? 1e-5 : opt.steps[0];
        for (double t : opt.steps)
            t_min = std::min(t_min, t);
        const double final_budget = 100.0 * t_min * t_min;
        for (const auto& oc : oracle_cases()) {
            auto e = parse_expr(oc.expr);
            auto f = black_box_from_exprs(R, {e}, 2);
            auto seq = to_derivatives(R, taylor_at(R, e, oc.point, 1));
            auto v = basis_vector(R, 2, oc.direction);
            std::vector<Vector<double>> arg{v};
            double ref = ml_eval(R, seq.tensors[1], std::span<const Vector<double>>(arg))[0];
            std::vector<LadderEntry> ladder;
            for (double t : opt.steps) {
                double q = fd_directional(R, f, oc.point, v, t)[0];
                ladder.push_back({t, std::abs(q - ref)});
            }
            double order = convergence_order(ladder);
            double final_err = 0.0;
            for (const auto& entry : ladder)
                if (entry.step == t_min)
                    final_err = entry.error;
            worst_final = std::max(worst_final, final_err);
            worst_dev = std::max(worst_dev, std::abs(order - 2.0));
            all_ok = all_ok && std::abs(order - 2.0) <= 0.3 && final_err <= final_budget;
            last_ladder = std::move(ladder);
        }
        std::ostringstream os;
        os << "max |order-2| = " << worst_dev << ", max error at t_min = " << worst_final;
        b.add("central-difference-order-2", all_ok, os.str(), last_ladder);
    }

    {
        bool ok = true;
        double worst = 0.0;
        for (const auto& oc : oracle_cases()) {
            auto e = parse_expr(oc.expr);
            auto f = black_box_from_exprs(R, {e}, 2);
            auto seq = to_derivatives(R, taylor_at(R, e, oc.point, 2));
            auto v = basis_vector(R, 2, 0);
            auto w = basis_vector(R, 2, 1);
            std::vector<Vector<double>> args{v, w};
            double ref = ml_eval(R, seq.tensors[2], std::span<const Vector<double>>(args))[0];
            double q = second_quotient(R, f, oc.point, v, w, 1e-4)[0];
            double err = std::abs(q - ref);
            worst = std::max(worst, err);
            ok = ok && err <= 1e-4;
        }
        b.add("second-quotient-vs-d2", ok, "max error " + std::to_string(worst) + " at t = 1e-4");
    }

    {
        // quadratic form: the second quotient is exactly the polar form, any t
        auto e = parse_expr("x1^2 + 3*x1*x2 - x2^2");
        auto f = black_box_from_exprs(Q, {e}, 2);
        auto x = random_vector(Q, rng, 2);
        auto v = random_vector(Q, rng, 2);
        auto w = random_vector(Q, rng, 2);
        auto t = random_nonzero_rational(rng);
        auto seq = to_derivatives(Q, taylor_at(Q, e, x, 2));
        std::vector<Vector<Rational>> args{v, w};
        auto ref = ml_eval(Q, seq.tensors[2], std::span<const Vector<Rational>>(args))[0];
        auto quot = second_quotient(Q, f, x, v, w, Q.from_rational(t))[0];
        b.add("quadratic-polar-form-exact", quot == ref, "2B(v,w) for arbitrary rational t");
    }

    {
        PAdicField K(5, 16);
        auto f = padic_counterexample(K);
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 20 && ok; ++i) {
            const int a = static_cast<int>(rng.uniform(1, 4));
            Vector<PAdic> probe_pt{random_padic_center(K, rng, a), random_padic_center(K, rng, a)};
            const PAdic t = PAdic::from_integer(K.p, K.precision, PAdic::pow_int(K.p, a));
            const double bound = std::pow(K.p, -(K.precision - a - 1));
            auto d1 = fd_directional(K, f, probe_pt, basis_vector(K, 2, 0), t)[0];
            auto d2 = fd_directional(K, f, probe_pt, basis_vector(K, 2, 1), t)[0];
            double e1 = d1.norm();
            double e2 = (d2 - probe_pt[0]).norm();
            worst = std::max(worst, std::max(e1, e2));
            ok = e1 <= bound && e2 <= bound;
        }
        b.add("padic-derivative-matches-M", ok,
              "max error norm " + std::to_string(worst) + " vs bound p^-(N-a-1)");
    }

    {
        // Taylor coherence: (D^1 f(x+tv) - D^1 f(x))/t approaches the curry
        // of D^2 f(x)(v, .) at first order in t.
        auto e = parse_expr("exp(x1)*x2 + x1^2*x2");
        Vector<double> x{0.3, 0.8}, v{1.0, -0.5};
        auto d2 = to_derivatives(R, taylor_at(R, e, x, 2)).tensors[2];
        auto expected_row = ml_contract_slot(R, d2, 0, v); // D^2 f(x)(v, .)
        std::vector<LadderEntry> ladder;
        double t = 1e-3;
        for (int rung = 0; rung < 4; ++rung, t /= 2) {
            auto xt = vec_add(x, vec_scale(t, v));
            auto d1t = to_derivatives(R, taylor_at(R, e, xt, 1)).tensors[1];
            auto d1 = to_derivatives(R, taylor_at(R, e, x, 1)).tensors[1];
            double err = 0.0;
            for (std::size_t i = 0; i < d1.coeffs.size(); ++i)
                err = std::max(err,
                               std::abs((d1t.coeffs[i] - d1.coeffs[i]) / t - expected_row.coeffs[i]));
            ladder.push_back({t, err});
        }
        double order = convergence_order(ladder);
        bool ok = order >= 0.5 && order <= 2.0;
        b.add("taylor-coherence-order-1", ok, "measured order " + std::to_string(order), ladder);
    }

    return b.result;
}

} // namespace detail

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"partitions", "compose", "reversion", "rebase",
                                                "symmetry",   "lie",     "oracle"};
    return names;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                             const VerifyOptions& options = {}) {
    if (name == "partitions")
        return detail::suite_partitions();
    if (name == "compose")
        return detail::suite_compose(seed);
    if (name == "reversion")
        return detail::suite_reversion(seed);
    if (name == "rebase")
        return detail::suite_rebase(seed);
    if (name == "symmetry")
        return detail::suite_symmetry(seed);
    if (name == "lie")
        return detail::suite_lie(seed);
    if (name == "oracle")
        return detail::suite_oracle(seed, options);
    throw UsageError("unknown verification suite '" + name + "'");
}

} // namespace frechet
