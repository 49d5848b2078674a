// Command-line driver: series/derivative dumps, the p-adic symmetry
// counterexample demo, and the randomized verification suites.
//
// Exit codes: 0 success, 2 usage/parse error, 3 domain/precision error,
// 4 property-suite failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frechet/frechet.hpp"

namespace {

using namespace frechet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitSuiteFailure = 4;

void emit(const std::string& payload, const std::string& output_file) {
    if (output_file.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(output_file, std::ios::binary);
    if (!out)
        throw UsageError("cannot open output file '" + output_file + "'");
    out << payload;
}

struct FieldChoice {
    std::string selector = "rational";
    int precision = 32;
};

template <class Fn>
int with_field(const FieldChoice& choice, Fn&& fn) {
    if (choice.selector == "rational")
        return fn(RationalField{});
    if (choice.selector == "real")
        return fn(RealField{});
    if (choice.selector.rfind("padic:", 0) == 0) {
        int p = 0;
        try {
            p = std::stoi(choice.selector.substr(6));
        } catch (const std::exception&) {
            throw UsageError("bad p-adic field selector '" + choice.selector + "'");
        }
        return fn(PAdicField(p, choice.precision));
    }
    throw UsageError("unknown field '" + choice.selector + "' (use rational, real, or padic:P)");
}

/// Coordinates are comma-separated, except over p-adic fields whose literal
/// grammar already uses commas for digits; there the separator is ';'.
template <NormedField F>
Vector<ScalarOf<F>> parse_point(const F& K, const std::string& text) {
    const char sep = K.kind() == FieldKind::padic ? ';' : ',';
    Vector<ScalarOf<F>> point;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto cut = text.find(sep, start);
        auto len = cut == std::string::npos ? text.size() - start : cut - start;
        point.push_back(K.parse(std::string_view(text).substr(start, len)));
        if (cut == std::string::npos)
            break;
        start = cut + 1;
    }
    if (point.empty())
        throw UsageError("empty point");
    return point;
}

void enumerate_multi_indices(int d, int budget, std::vector<int>& alpha, int slot,
                             const std::function<void(const std::vector<int>&)>& fn) {
    if (slot == d) {
        fn(alpha);
        return;
    }
    for (int a = 0; a <= budget; ++a) {
        alpha[static_cast<std::size_t>(slot)] = a;
        enumerate_multi_indices(d, budget - a, alpha, slot + 1, fn);
    }
    alpha[static_cast<std::size_t>(slot)] = 0;
}

struct TaylorArgs {
    std::string expr_text;
    std::string point_text = "0";
    int order = 4;
    FieldChoice field;
    std::string format = "json";
    std::string output;
};

template <NormedField F>
int run_taylor(const F& K, const TaylorArgs& args) {
    Expr e = parse_expr(args.expr_text);
    auto x = parse_point(K, args.point_text);
    auto series = taylor_at(K, e, x, args.order);
    auto derivs = to_derivatives(K, series);
    const int d = series.in_dim();

    std::vector<std::pair<std::vector<int>, ScalarOf<F>>> partials;
    std::vector<int> alpha(static_cast<std::size_t>(d), 0);
    enumerate_multi_indices(d, args.order, alpha, 0, [&](const std::vector<int>& a) {
        partials.emplace_back(a, partial_derivative(K, derivs, a));
    });

    if (args.format == "json") {
        Json j;
        j["expr"] = args.expr_text;
        j["field"] = K.name();
        j["order"] = args.order;
        j["series"] = to_json(K, series);
        j["derivatives"] = to_json(K, derivs);
        Json parts = Json::array();
        for (const auto& [a, v] : partials) {
            Json row;
            row["alpha"] = a;
            row["value"] = scalar_to_json(K, v);
            parts.push_back(std::move(row));
        }
        j["partials"] = std::move(parts);
        if (d == 1) {
            Json table = Json::array();
            for (int n = 0; n <= args.order; ++n)
                table.push_back(scalar_to_json(K, deriv1(K, derivs, n)));
            j["deriv1_table"] = std::move(table);
        }
        emit(j.dump(2), args.output);
        return kExitOk;
    }
    if (args.format == "pretty") {
        std::string out;
        out += "field: " + K.name() + "\n";
        out += "expr:  " + args.expr_text + "\n";
        out += "base:  (";
        for (int i = 0; i < d; ++i)
            out += (i ? ", " : "") + K.format(x[static_cast<std::size_t>(i)]);
        out += ")\norder: " + std::to_string(args.order) + "\n";
        for (int n = 0; n <= args.order; ++n) {
            out += "p_" + std::to_string(n) + ": [";
            const auto& t = series.terms[static_cast<std::size_t>(n)];
            for (std::size_t i = 0; i < t.coeffs.size(); ++i)
                out += (i ? ", " : "") + K.format(t.coeffs[i]);
            out += "]\n";
        }
        if (d == 1) {
            out += "deriv1 table:";
            for (int n = 0; n <= args.order; ++n)
                out += " " + K.format(deriv1(K, derivs, n));
            out += "\n";
        }
        out += "partials:\n";
        for (const auto& [a, v] : partials) {
            out += "  alpha=(";
            for (std::size_t i = 0; i < a.size(); ++i)
                out += (i ? "," : "") + std::to_string(a[i]);
            out += "): " + K.format(v) + "\n";
        }
        emit(out, args.output);
        return kExitOk;
    }
    throw UsageError("taylor supports --format json|pretty");
}

struct DemoArgs {
    int prime = 5;
    int a = 1;
    int b = 3;
    int precision = 16;
    std::string format = "json";
    std::string output;
};

int run_padic_demo(const DemoArgs& args) {
    auto r = padic_mixed_demo(args.prime, args.a, args.b, args.precision);
    PAdicField K(args.prime, args.precision);
    if (args.format == "json") {
        Json j;
        j["prime"] = args.prime;
        j["a"] = args.a;
        j["b"] = args.b;
        j["precision"] = args.precision;
        j["quotient_xy"] = r.quotient_xy.to_string();
        j["quotient_yx"] = r.quotient_yx.to_string();
        j["expected_xy"] = r.expected_xy ? 1 : 0;
        j["expected_yx"] = r.expected_yx ? 1 : 0;
        j["ok"] = r.ok;
        emit(j.dump(2), args.output);
    } else {
        std::string out;
        out += "f(x,y) = sum_{k<l} x_k y_l p^(k+l) on Z_" + std::to_string(args.prime) + "^2\n";
        out += "mixed quotient, x-step p^" + std::to_string(args.a) + ", y-step p^" +
               std::to_string(args.b) + ": " + r.quotient_xy.to_string() + " (expect " +
               (r.expected_xy ? "1" : "0") + ")\n";
        out += "mixed quotient, y-step p^" + std::to_string(args.a) + ", x-step p^" +
               std::to_string(args.b) + ": " + r.quotient_yx.to_string() + " (expect " +
               (r.expected_yx ? "1" : "0") + ")\n";
        out += std::string("result: ") + (r.ok ? "ok" : "MISMATCH") + "\n";
        emit(out, args.output);
    }
    return r.ok ? kExitOk : kExitSuiteFailure;
}

struct VerifyArgs {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<double> steps;
    std::string format = "pretty";
    bool cases = false;
    std::string output;
};

int run_verify(const VerifyArgs& args) {
    VerifyOptions options;
    if (!args.steps.empty())
        options.steps = args.steps;
    auto result = run_suite(args.suite, args.seed, options);

    std::string out;
    if (args.format == "json") {
        auto case_row = [&](const CaseResult& c) {
            Json row;
            row["suite"] = result.suite;
            row["name"] = c.name;
            row["pass"] = c.pass;
            row["detail"] = c.detail;
            if (!c.ladder.empty()) {
                Json ladder = Json::array();
                for (const auto& l : c.ladder)
                    ladder.push_back({{"step", l.step}, {"error", l.error}});
                row["ladder"] = std::move(ladder);
            }
            return row;
        };
        if (args.cases) {
            // one JSON line per case
            for (const auto& c : result.cases)
                out += case_row(c).dump() + "\n";
            Json tail;
            tail["suite"] = result.suite;
            tail["seed"] = result.seed;
            tail["pass"] = result.pass();
            out += tail.dump() + "\n";
        } else {
            Json j;
            j["suite"] = result.suite;
            j["seed"] = result.seed;
            j["pass"] = result.pass();
            Json cases = Json::array();
            for (const auto& c : result.cases)
                cases.push_back(case_row(c));
            j["cases"] = std::move(cases);
            out = j.dump(2);
        }
    } else if (args.format == "csv") {
        out = "suite,case,pass,step,error\n";
        for (const auto& c : result.cases) {
            if (c.ladder.empty()) {
                out += result.suite + "," + c.name + "," + (c.pass ? "1" : "0") + ",,\n";
            } else {
                for (const auto& l : c.ladder) {
                    char buf[128];
                    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.17g,%.17g\n", result.suite.c_str(),
                                  c.name.c_str(), c.pass ? 1 : 0, l.step, l.error);
                    out += buf;
                }
            }
        }
    } else if (args.format == "pretty") {
        for (const auto& c : result.cases) {
            out += std::string(c.pass ? "[PASS] " : "[FAIL] ") + result.suite + "/" + c.name;
            if (args.cases && !c.detail.empty())
                out += " — " + c.detail;
            out += "\n";
        }
        out += std::string(result.pass() ? "suite passed" : "suite FAILED") + " (seed " +
               std::to_string(result.seed) + ")\n";
    } else {
        throw UsageError("verify supports --format json|csv|pretty");
    }
    emit(out, args.output);
    return result.pass() ? kExitOk : kExitSuiteFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated multilinear series calculus over pluggable normed fields"};
    app.require_subcommand(1);

    TaylorArgs targs;
    auto* taylor_cmd = app.add_subcommand("taylor", "expand an expression and dump series + derivatives");
    taylor_cmd->add_option("expr", targs.expr_text, "expression, e.g. \"x1*x2 + exp(x1)\"")->required();
    taylor_cmd->add_option("--point", targs.point_text,
                           "expansion point: comma-separated literals (';'-separated for padic)");
    taylor_cmd->add_option("--order,-n", targs.order, "truncation order")->check(CLI::NonNegativeNumber);
    taylor_cmd->add_option("--field", targs.field.selector, "rational | real | padic:P");
    taylor_cmd->add_option("--precision", targs.field.precision, "p-adic digit precision");
    taylor_cmd->add_option("--format", targs.format, "json | pretty");
    taylor_cmd->add_option("--output", targs.output, "write payload to a file");

    DemoArgs dargs;
    auto* demo_cmd = app.add_subcommand("padic-demo", "non-symmetric second derivative over Q_p");
    demo_cmd->add_option("--prime,-p", dargs.prime, "prime p")->required();
    demo_cmd->add_option("-a", dargs.a, "first step exponent (step p^a)")->required();
    demo_cmd->add_option("-b", dargs.b, "second step exponent (step p^b)")->required();
    demo_cmd->add_option("--precision", dargs.precision, "p-adic digit precision (needs >= a+b+2)");
    demo_cmd->add_option("--format", dargs.format, "json | pretty");
    demo_cmd->add_option("--output", dargs.output, "write payload to a file");

    VerifyArgs vargs;
    auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
    verify_cmd->add_option("suite", vargs.suite, "partitions | compose | reversion | rebase | symmetry | lie | oracle")
        ->required();
    verify_cmd->add_option("--seed", vargs.seed, "random seed");
    verify_cmd->add_option("--steps", vargs.steps, "step ladder for the oracle suite")->delimiter(',');
    verify_cmd->add_option("--format", vargs.format, "json | csv | pretty");
    verify_cmd->add_flag("--cases", vargs.cases, "include per-case details");
    verify_cmd->add_option("--output", vargs.output, "write payload to a file");

    try {
        app.parse(argc, argv);
        if (taylor_cmd->parsed())
            return with_field(targs.field, [&](const auto& K) { return run_taylor(K, targs); });
        if (demo_cmd->parsed())
            return run_padic_demo(dargs);
        return run_verify(vargs);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const frechet::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const frechet::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
