#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/calculus.hpp"
#include "frechet/errors.hpp"
#include "frechet/fields.hpp"
#include "frechet/taylor.hpp"
#include "frechet/vectorfields.hpp"

namespace frechet {

using Json = nlohmann::json;

/// Scalars serialize per field: exact fields as canonical literal strings
/// ("n/d", "p:v:d0,d1,..."), reals as JSON numbers (round-trip exact).
template <NormedField F>
Json scalar_to_json(const F& K, const ScalarOf<F>& s) {
    if constexpr (std::is_same_v<ScalarOf<F>, double>)
        return s;
    else
        return K.format(s);
}

template <NormedField F>
ScalarOf<F> scalar_from_json(const F& K, const Json& j) {
    if (j.is_string())
        return K.parse(j.get<std::string>());
    if constexpr (std::is_same_v<ScalarOf<F>, double>) {
        if (j.is_number())
            return j.get<double>();
    } else {
        if (j.is_number_integer())
            return K.from_int(j.get<std::int64_t>());
    }
    throw UsageError("bad scalar in JSON: " + j.dump());
}

template <NormedField F>
Json vector_to_json(const F& K, const Vector<ScalarOf<F>>& v) {
    Json a = Json::array();
    for (const auto& s : v)
        a.push_back(scalar_to_json(K, s));
    return a;
}

template <NormedField F>
Vector<ScalarOf<F>> vector_from_json(const F& K, const Json& j) {
    if (!j.is_array())
        throw UsageError("expected a JSON array of scalars");
    Vector<ScalarOf<F>> v;
    v.reserve(j.size());
    for (const auto& s : j)
        v.push_back(scalar_from_json(K, s));
    return v;
}

/// {order, in_dim, out_dim, coeffs}: coefficients as the row-major flat list
/// (output index outermost, then the multi-index with slot 0 most
/// significant).
template <NormedField F>
Json to_json(const F& K, const MultilinearMap<ScalarOf<F>>& T) {
    Json j;
    j["order"] = T.order;
    j["in_dim"] = T.in_dim;
    j["out_dim"] = T.out_dim;
    j["coeffs"] = vector_to_json(K, T.coeffs);
    return j;
}

template <NormedField F>
MultilinearMap<ScalarOf<F>> ml_from_json(const F& K, const Json& j) {
    MultilinearMap<ScalarOf<F>> T;
    try {
        T.order = j.at("order").get<int>();
        T.in_dim = j.at("in_dim").get<int>();
        T.out_dim = j.at("out_dim").get<int>();
        T.coeffs = vector_from_json(K, j.at("coeffs"));
    } catch (const Json::exception& e) {
        throw UsageError(std::string("bad multilinear map JSON: ") + e.what());
    }
    if (T.order < 0 || T.in_dim < 1 || T.out_dim < 1 ||
        T.coeffs.size() != static_cast<std::size_t>(T.out_dim) * ml_pow(T.in_dim, T.order))
        throw UsageError("multilinear map JSON has inconsistent shape");
    return T;
}

/// {field, base_point, order, terms}: terms in stable order p_0..p_N.
template <NormedField F>
Json to_json(const F& K, const TaylorSeries<ScalarOf<F>>& s) {
    Json j;
    j["field"] = K.name();
    j["base_point"] = vector_to_json(K, s.base_point);
    j["order"] = s.order();
    Json terms = Json::array();
    for (const auto& t : s.terms)
        terms.push_back(to_json(K, t));
    j["terms"] = std::move(terms);
    return j;
}

template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_from_json(const F& K, const Json& j) {
    TaylorSeries<ScalarOf<F>> s;
    try {
        if (j.at("field").get<std::string>() != K.name())
            throw UsageError("series JSON is for field '" + j.at("field").get<std::string>() +
                             "', expected '" + K.name() + "'");
        s.base_point = vector_from_json(K, j.at("base_point"));
        for (const auto& t : j.at("terms"))
            s.terms.push_back(ml_from_json(K, t));
        if (j.at("order").get<int>() != s.order())
            throw UsageError("series JSON order disagrees with its term count");
    } catch (const Json::exception& e) {
        throw UsageError(std::string("bad series JSON: ") + e.what());
    }
    for (int n = 0; n <= s.order(); ++n) {
        const auto& t = s.terms[static_cast<std::size_t>(n)];
        if (t.order != n || t.in_dim != s.in_dim() || t.out_dim != s.out_dim())
            throw UsageError("series JSON terms have inconsistent shapes");
    }
    return s;
}

/// {field, base_point, order, tensors}: the derivative-convention data.
template <NormedField F>
Json to_json(const F& K, const DerivativeSequence<ScalarOf<F>>& seq) {
    Json j;
    j["field"] = K.name();
    j["base_point"] = vector_to_json(K, seq.base_point);
    j["order"] = seq.order();
    Json tensors = Json::array();
    for (const auto& t : seq.tensors)
        tensors.push_back(to_json(K, t));
    j["tensors"] = std::move(tensors);
    return j;
}

/// {probe, quotient, reference, error_norm, step}: one finite-difference
/// comparison row.
template <NormedField F>
Json fd_report_json(const F& K, const Vector<ScalarOf<F>>& probe_point,
                    const Vector<ScalarOf<F>>& quotient, const Vector<ScalarOf<F>>& reference,
                    const ScalarOf<F>& step) {
    Json j;
    j["probe"] = vector_to_json(K, probe_point);
    j["quotient"] = vector_to_json(K, quotient);
    j["reference"] = vector_to_json(K, reference);
    j["error_norm"] = sup_norm(K, vec_sub(quotient, reference));
    j["step"] = scalar_to_json(K, step);
    return j;
}

template <NormedField F>
Json to_json(const F& K, const PullbackBracketReport<ScalarOf<F>>& rep) {
    Json j;
    j["lhs"] = vector_to_json(K, rep.lhs);
    j["rhs"] = vector_to_json(K, rep.rhs);
    j["error_norm"] = rep.error_norm;
    j["cancel_symm_residual"] = rep.cancel_symm_residual;
    return j;
}

inline std::string ladder_csv(std::span<const LadderEntry> ladder) {
    std::string out = "step,error\n";
    char buf[80];
    for (const auto& e : ladder) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", e.step, e.error);
        out += buf;
    }
    return out;
}

} // namespace frechet
