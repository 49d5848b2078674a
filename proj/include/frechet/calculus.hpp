#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/expr.hpp"
#include "frechet/fields.hpp"
#include "frechet/linalg.hpp"
#include "frechet/padic.hpp"
#include "frechet/taylor.hpp"

namespace frechet {

/// A pure black-box evaluation map k^d -> k^m with a domain predicate.
/// Evaluation must be deterministic; probes may run concurrently.
template <NormedField F>
struct BlackBoxFn {
    int in_dim = 1;
    int out_dim = 1;
    std::function<Vector<ScalarOf<F>>(const Vector<ScalarOf<F>>&)> eval;
    std::function<bool(const Vector<ScalarOf<F>>&)> in_domain; // null = everywhere
    std::string description;
};

template <NormedField F>
Vector<ScalarOf<F>> probe(const F& K, const BlackBoxFn<F>& f, const Vector<ScalarOf<F>>& x) {
    (void)K;
    if (static_cast<int>(x.size()) != f.in_dim)
        throw UsageError("probe point dimension mismatch");
    if (f.in_domain && !f.in_domain(x))
        throw DomainError("probe point outside the declared domain");
    auto y = f.eval(x);
    if (static_cast<int>(y.size()) != f.out_dim)
        throw Error("black-box function returned a vector of the wrong dimension");
    return y;
}

/// Wrap a tuple of expressions as a black box (defined wherever every
/// component evaluates).
template <NormedField F>
BlackBoxFn<F> black_box_from_exprs(const F& K, std::vector<Expr> components, int in_dim,
                                   std::string description = {}) {
    BlackBoxFn<F> f;
    f.in_dim = in_dim;
    f.out_dim = static_cast<int>(components.size());
    f.description = std::move(description);
    f.eval = [&K, comps = std::move(components)](const Vector<ScalarOf<F>>& x) {
        Vector<ScalarOf<F>> out;
        out.reserve(comps.size());
        for (const auto& e : comps)
            out.push_back(expr_eval(K, e, x));
        return out;
    };
    return f;
}

/// Directional difference quotient. Over archimedean fields the central
/// difference (f(x+tv) - f(x-tv)) / 2t; over ultrametric fields the forward
/// quotient (f(x+tv) - f(x)) / t (steps there are exact powers p^a).
template <NormedField F>
Vector<ScalarOf<F>> fd_directional(const F& K, const BlackBoxFn<F>& f, const Vector<ScalarOf<F>>& x,
                                   const Vector<ScalarOf<F>>& v, const ScalarOf<F>& t) {
    if (K.is_zero(t))
        throw UsageError("finite-difference step must be nonzero");
    const auto tv = vec_scale(t, v);
    if (K.ultrametric()) {
        auto hi = probe(K, f, vec_add(x, tv));
        auto lo = probe(K, f, x);
        auto d = vec_sub(hi, lo);
        for (auto& c : d)
            c = K.div(c, t);
        return d;
    }
    auto hi = probe(K, f, vec_add(x, tv));
    auto lo = probe(K, f, vec_sub(x, tv));
    auto d = vec_sub(hi, lo);
    const auto two_t = t + t;
    for (auto& c : d)
        c = K.div(c, two_t);
    return d;
}

/// (f(x+tv+tw) - f(x+tv) - f(x+tw) + f(x)) / t^2: the symmetric probe for
/// D^2 f(x)(v, w) - literally invariant under swapping v and w.
template <NormedField F>
Vector<ScalarOf<F>> second_quotient(const F& K, const BlackBoxFn<F>& f, const Vector<ScalarOf<F>>& x,
                                    const Vector<ScalarOf<F>>& v, const Vector<ScalarOf<F>>& w,
                                    const ScalarOf<F>& t) {
    if (K.is_zero(t))
        throw UsageError("finite-difference step must be nonzero");
    const auto tv = vec_scale(t, v);
    const auto tw = vec_scale(t, w);
    auto acc = probe(K, f, vec_add(x, vec_add(tv, tw)));
    acc = vec_sub(acc, probe(K, f, vec_add(x, tv)));
    acc = vec_sub(acc, probe(K, f, vec_add(x, tw)));
    acc = vec_add(acc, probe(K, f, x));
    const auto t2 = t * t;
    for (auto& c : acc)
        c = K.div(c, t2);
    return acc;
}

/// (f(x+tv+sw) - f(x+tv) - f(x+sw) + f(x)) / (t*s): two independent step
/// scales, so the quotient probes order-dependence of mixed derivatives.
template <NormedField F>
Vector<ScalarOf<F>> mixed_quotient(const F& K, const BlackBoxFn<F>& f, const Vector<ScalarOf<F>>& x,
                                   const Vector<ScalarOf<F>>& v, const Vector<ScalarOf<F>>& w,
                                   const ScalarOf<F>& t, const ScalarOf<F>& s) {
    if (K.is_zero(t) || K.is_zero(s))
        throw UsageError("finite-difference step must be nonzero");
    const auto tv = vec_scale(t, v);
    const auto sw = vec_scale(s, w);
    auto acc = probe(K, f, vec_add(x, vec_add(tv, sw)));
    acc = vec_sub(acc, probe(K, f, vec_add(x, tv)));
    acc = vec_sub(acc, probe(K, f, vec_add(x, sw)));
    acc = vec_add(acc, probe(K, f, x));
    const auto ts = t * s;
    for (auto& c : acc)
        c = K.div(c, ts);
    return acc;
}

/// Largest norm of D^2(e_i, e_j) - D^2(e_j, e_i) over basis pairs. Zero by
/// construction for to_derivatives output; informative on tensors assembled
/// from raw finite differences.
struct SymmetryReport {
    double max_asymmetry = 0.0;
    int slot_i = 0;
    int slot_j = 0;
};

template <NormedField F>
SymmetryReport symmetry_check(const F& K, const DerivativeSequence<ScalarOf<F>>& seq) {
    if (seq.order() < 2)
        throw UsageError("symmetry check needs derivatives up to order 2");
    const auto& D2 = seq.tensors[2];
    const int d = seq.in_dim();
    SymmetryReport rep;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            std::vector<Vector<ScalarOf<F>>> ij{basis_vector(K, d, i), basis_vector(K, d, j)};
            std::vector<Vector<ScalarOf<F>>> ji{basis_vector(K, d, j), basis_vector(K, d, i)};
            auto diff = vec_sub(ml_eval(K, D2, std::span<const Vector<ScalarOf<F>>>(ij)),
                                ml_eval(K, D2, std::span<const Vector<ScalarOf<F>>>(ji)));
            double a = sup_norm(K, diff);
            if (a > rep.max_asymmetry) {
                rep.max_asymmetry = a;
                rep.slot_i = i;
                rep.slot_j = j;
            }
        }
    return rep;
}

/// Second-derivative tensor assembled from raw mixed difference quotients
/// with distinct step scales (t for the first slot, s for the second). With
/// t != s the assembly is order-sensitive, which is what makes symmetry
/// checks on it informative.
template <NormedField F>
DerivativeSequence<ScalarOf<F>> fd_assembled_second_derivative(const F& K, const BlackBoxFn<F>& f,
                                                               const Vector<ScalarOf<F>>& x,
                                                               const ScalarOf<F>& t,
                                                               const ScalarOf<F>& s) {
    if (f.out_dim != 1)
        throw UsageError("fd-assembled derivatives expect a scalar-valued function");
    const int d = f.in_dim;
    DerivativeSequence<ScalarOf<F>> seq;
    seq.base_point = x;
    seq.tensors.push_back(ml_constant(probe(K, f, x), d));
    auto D1 = ml_zero(K, 1, d, 1);
    for (int i = 0; i < d; ++i)
        D1.coeffs[static_cast<std::size_t>(i)] = fd_directional(K, f, x, basis_vector(K, d, i), t)[0];
    seq.tensors.push_back(std::move(D1));
    auto D2 = ml_zero(K, 2, d, 1);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            D2.coeffs[static_cast<std::size_t>(i) * d + j] =
                mixed_quotient(K, f, x, basis_vector(K, d, i), basis_vector(K, d, j), t, s)[0];
    seq.tensors.push_back(std::move(D2));
    return seq;
}

// ---------------------------------------------------------------------------
// Step ladders and convergence-order estimation
// ---------------------------------------------------------------------------

struct LadderEntry {
    double step = 0.0;
    double error = 0.0;
};

inline std::vector<double> default_step_ladder() { return {1e-2, 1e-3, 1e-4, 1e-5}; }

/// Least-squares slope of log(error) against log(step). Entries with zero
/// error are exact and excluded; if fewer than two inexact rungs remain the
/// quotients converged outright and the order is reported as infinite.
inline double convergence_order(std::span<const LadderEntry> ladder) {
    std::vector<double> lx, ly;
    for (const auto& e : ladder) {
        if (e.error > 0.0 && e.step > 0.0) {
            lx.push_back(std::log(e.step));
            ly.push_back(std::log(e.error));
        }
    }
    if (lx.size() < 2)
        return std::numeric_limits<double>::infinity();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

// ---------------------------------------------------------------------------
// Smoothness policy
// ---------------------------------------------------------------------------

/// Precondition policy for operations that rely on symmetry of the second
/// derivative: over the reals the requested order suffices; over every other
/// field only expressions certified analytic (rational operations) are
/// admitted.
struct SmoothnessPolicy {
    FieldKind field = FieldKind::real;
    int requested_order = 2;

    bool analytic_only() const { return field != FieldKind::real; }

    bool admits(const Expr& e) const { return !analytic_only() || e.rational_ops_only(); }

    void require(std::span<const Expr> exprs) const {
        for (const auto& e : exprs)
            if (!admits(e))
                throw MinSmoothnessError(
                    "smoothness policy violation: non-archimedean field requires "
                    "rational-operation (analytic) expressions");
    }
};

// ---------------------------------------------------------------------------
// The p-adic counterexample to symmetry of second derivatives
// ---------------------------------------------------------------------------

namespace detail {

inline void require_padic_unit_ball(const Vector<PAdic>& x) {
    for (const auto& c : x)
        if (c.norm() > 1.0)
            throw DomainError("counterexample domain is the unit ball Z_p^2");
}

} // namespace detail

/// The explicit C^1 function f : Z_p^2 -> Q_p with derivative M(x,y) = (0,x):
///   f(sum x_k p^k, sum y_l p^l) = sum_{k<l} x_k y_l p^{k+l},
/// the digit double sum truncated at k+l < precision. Its mixed difference
/// quotients witness non-symmetry: with steps p^a, p^b the quotient is 1
/// exactly when a < b and 0 otherwise.
///
/// At digit-aligned probes (both coordinates supported on digits below the
/// step exponent a) the forward quotient matches M within p-adic norm
/// p^-(N-a-1); that bound is the truncation budget of this digit sum.
inline BlackBoxFn<PAdicField> padic_counterexample(const PAdicField& K) {
    BlackBoxFn<PAdicField> f;
    f.in_dim = 2;
    f.out_dim = 1;
    f.description = "f(x,y) = sum_{k<l} x_k y_l p^{k+l} on Z_p^2";
    f.in_domain = [](const Vector<PAdic>& x) {
        return x[0].norm() <= 1.0 && x[1].norm() <= 1.0;
    };
    const int p = K.p;
    const int N = K.precision;
    f.eval = [p, N](const Vector<PAdic>& pt) {
        detail::require_padic_unit_ball(pt);
        const PAdic& x = pt[0];
        const PAdic& y = pt[1];
        BigInt acc = 0;
        for (int l = 1; l < N; ++l) {
            const int yl = y.digit_at(l);
            if (yl == 0)
                continue;
            BigInt xpart = 0;
            for (int k = 0; k < l && k + l < N; ++k) {
                const int xk = x.digit_at(k);
                if (xk != 0)
                    xpart += BigInt(xk) * PAdic::pow_int(p, k);
            }
            acc += xpart * BigInt(yl) * PAdic::pow_int(p, l);
        }
        return Vector<PAdic>{PAdic::from_integer(p, N, acc)};
    };
    return f;
}

/// A matrix field on Z_p^2 that is locally constant at digit depth k:
/// M(x, y) = table(x mod p^k, y mod p^k), returned as the pair (M1, M2) of
/// the 1x2 matrix entries.
using PAdicMatrixTable = std::function<std::pair<PAdic, PAdic>(const BigInt&, const BigInt&)>;

/// General construction of counterexample data for a locally
/// constant derivative field M given as a digit-depth-k lookup: f is built by
/// walking the ball-center tree,
///   f(x) = sum_{n < N} M(c_n) . (c_{n+1} - c_n),
/// where c_n is the probe truncated to its first n digits. The caller
/// supplies the depth k explicitly (the continuity modulus of M is not
/// quantified here).
inline BlackBoxFn<PAdicField> padic_from_matrix_table(const PAdicField& K, int depth,
                                                      PAdicMatrixTable table) {
    if (depth < 0)
        throw UsageError("lookup depth must be nonnegative");
    BlackBoxFn<PAdicField> f;
    f.in_dim = 2;
    f.out_dim = 1;
    f.description = "recursive ball-center construction from a depth-" + std::to_string(depth) +
                    " matrix table";
    const int p = K.p;
    const int N = K.precision;
    f.eval = [p, N, depth, table = std::move(table)](const Vector<PAdic>& pt) {
        detail::require_padic_unit_ball(pt);
        const PAdic& x = pt[0];
        const PAdic& y = pt[1];
        PAdic acc = PAdic::zero(p);
        BigInt xk = 0, yk = 0; // x, y mod p^min(n, depth)
        for (int n = 0; n < N; ++n) {
            const int xn = x.digit_at(n);
            const int yn = y.digit_at(n);
            if (xn != 0 || yn != 0) {
                auto [m1, m2] = table(xk, yk);
                const BigInt pn = PAdic::pow_int(p, n);
                PAdic step = PAdic::from_integer(p, N, BigInt(xn) * pn) * m1 +
                             PAdic::from_integer(p, N, BigInt(yn) * pn) * m2;
                acc = acc + step;
            }
            if (n < depth) {
                const BigInt pn = PAdic::pow_int(p, n);
                xk += BigInt(xn) * pn;
                yk += BigInt(yn) * pn;
            }
        }
        return Vector<PAdic>{acc};
    };
    return f;
}

/// The counterexample demo: mixed quotients of f at the origin with steps
/// (t, s) = (p^a, p^b), in both orders of the differentiation roles.
/// Expected values: (1, 0) when a < b, (0, 0) when a = b, (0, 1) when a > b.
struct PAdicDemoResult {
    PAdic quotient_xy; // x-step p^a, y-step p^b
    PAdic quotient_yx; // y-step p^a, x-step p^b
    bool expected_xy = false;
    bool expected_yx = false;
    bool ok = false;
};

inline PAdicDemoResult padic_mixed_demo(int p, int a, int b, int precision) {
    if (a < 0 || b < 0)
        throw UsageError("step exponents must be nonnegative");
    if (precision < a + b + 2)
        throw DomainError("insufficient p-adic precision: need at least a+b+2 digits");
    PAdicField K(p, precision);
    auto f = padic_counterexample(K);
    const Vector<PAdic> origin{K.zero(), K.zero()};
    const auto e1 = basis_vector(K, 2, 0);
    const auto e2 = basis_vector(K, 2, 1);
    const PAdic pa = PAdic::from_integer(p, precision, PAdic::pow_int(p, a));
    const PAdic pb = PAdic::from_integer(p, precision, PAdic::pow_int(p, b));

    PAdicDemoResult r;
    r.quotient_xy = mixed_quotient(K, f, origin, e1, e2, pa, pb)[0];
    r.quotient_yx = mixed_quotient(K, f, origin, e2, e1, pa, pb)[0];
    r.expected_xy = a < b;
    r.expected_yx = b < a;
    auto matches = [&](const PAdic& q, bool expect_one) {
        return expect_one ? K.eq(q, K.one()) : q.is_zero();
    };
    r.ok = matches(r.quotient_xy, r.expected_xy) && matches(r.quotient_yx, r.expected_yx);
    return r;
}

} // namespace frechet
