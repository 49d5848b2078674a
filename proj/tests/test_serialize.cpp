#include <catch2/catch_amalgamated.hpp>

#include "frechet/generators.hpp"
#include "frechet/parser.hpp"
#include "frechet/serialize.hpp"

using namespace frechet;

namespace {
RationalField Q;
RealField R;
} // namespace

TEST_CASE("scalar encoding per field", "[serialize]") {
    CHECK(scalar_to_json(Q, Rational(-3) / 2) == Json("-3/2"));
    CHECK(scalar_from_json(Q, Json("7/4")) == Rational(7) / 4);
    CHECK(scalar_from_json(Q, Json(5)) == Rational(5));

    CHECK(scalar_to_json(R, 0.1).is_number());
    CHECK(scalar_from_json(R, scalar_to_json(R, 0.1)) == 0.1);

    PAdicField K(5, 8);
    auto x = K.from_int(37);
    CHECK(K.eq(scalar_from_json(K, scalar_to_json(K, x)), x));
    CHECK_THROWS_AS(scalar_from_json(Q, Json(Json::object())), UsageError);
}

TEST_CASE("multilinear map JSON round-trip", "[serialize]") {
    Rng rng(3);
    auto T = ml_zero(Q, 2, 2, 2);
    for (auto& c : T.coeffs)
        c = random_rational(rng);
    auto j = to_json(Q, T);
    CHECK(j["order"] == 2);
    CHECK(j["in_dim"] == 2);
    CHECK(j["out_dim"] == 2);
    CHECK(j["coeffs"].size() == 8);
    auto back = ml_from_json(Q, j);
    CHECK(ml_eq(Q, back, T));

    j["coeffs"].erase(0);
    CHECK_THROWS_AS(ml_from_json(Q, j), UsageError); // inconsistent shape
}

TEST_CASE("series JSON round-trip across fields", "[serialize]") {
    Rng rng(5);
    auto sq = random_polynomial_series(Q, rng, random_vector(Q, rng, 2), 1, 3, 3);
    auto jq = to_json(Q, sq);
    CHECK(jq["field"] == "rational");
    CHECK(ts_eq(Q, ts_from_json(Q, jq), sq));
    CHECK_THROWS_AS(ts_from_json(R, jq), UsageError); // field tag mismatch

    auto sr = taylor_at(R, parse_expr("exp(x1)*x2"), Vector<double>{0.3, 0.7}, 3);
    auto jr = to_json(R, sr);
    auto back = ts_from_json(R, jr);
    CHECK(ts_eq(R, back, sr));
    for (int n = 0; n <= 3; ++n) // bit-exact doubles, not just tolerance-equal
        CHECK(back.terms[static_cast<std::size_t>(n)].coeffs == sr.terms[static_cast<std::size_t>(n)].coeffs);

    PAdicField K(7, 12);
    auto e = parse_expr("x1*x2 + x1^2");
    auto sp = taylor_at(K, e, Vector<PAdic>{K.from_int(2), K.from_int(3)}, 2);
    auto jp = to_json(K, sp);
    CHECK(jp["field"] == "padic:7");
    CHECK(ts_eq(K, ts_from_json(K, jp), sp));
}

TEST_CASE("serialization is deterministic", "[serialize]") {
    Rng rng1(7), rng2(7);
    auto s1 = random_polynomial_series(Q, rng1, random_vector(Q, rng1, 2), 1, 3, 3);
    auto s2 = random_polynomial_series(Q, rng2, random_vector(Q, rng2, 2), 1, 3, 3);
    CHECK(to_json(Q, s1).dump() == to_json(Q, s2).dump());
    auto j = to_json(Q, s1);
    CHECK(to_json(Q, ts_from_json(Q, j)).dump() == j.dump());
}

TEST_CASE("finite-difference report rows", "[serialize]") {
    Vector<Rational> probe_pt{Rational(1), Rational(2)};
    Vector<Rational> quotient{Rational(3) / 2};
    Vector<Rational> reference{Rational(3) / 2};
    auto j = fd_report_json(Q, probe_pt, quotient, reference, Rational(1) / 100);
    CHECK(j["error_norm"] == 0.0);
    CHECK(j["quotient"][0] == "3/2");
    CHECK(j["step"] == "1/100");
    CHECK(j.contains("probe"));
    CHECK(j.contains("reference"));
}

TEST_CASE("pullback report and ladder CSV", "[serialize]") {
    PullbackBracketReport<Rational> rep;
    rep.lhs = {Rational(1), Rational(0)};
    rep.rhs = {Rational(1), Rational(0)};
    auto j = to_json(Q, rep);
    CHECK(j["error_norm"] == 0.0);
    CHECK(j["cancel_symm_residual"] == 0.0);
    CHECK(j["lhs"][0] == "1");

    std::vector<LadderEntry> ladder{{1e-2, 1e-4}, {1e-3, 1e-6}};
    auto csv = ladder_csv(ladder);
    CHECK(csv.rfind("step,error\n", 0) == 0);
    CHECK(csv.find("0.01,") != std::string::npos);
}
