#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/fields.hpp"
#include "frechet/linalg.hpp"
#include "frechet/multilinear.hpp"
#include "frechet/partitions.hpp"

namespace frechet {

/// Truncated formal multilinear series in the series convention:
/// f(x + y) ~ sum_{n<=N} p_n(y, ..., y), with p_n an order-n multilinear map
/// (k^d)^n -> k^m and p_0 the value of f at the base point.
///
/// This is the single internal convention. The derivative convention lives
/// only in DerivativeSequence, bridged by to_derivatives and faa_di_bruno;
/// the two differ by an n! and a symmetrization, and keeping one canonical
/// convention avoids silent factorial bugs.
template <class S>
struct TaylorSeries {
    Vector<S> base_point;
    std::vector<MultilinearMap<S>> terms; // p_0 .. p_N

    int order() const { return static_cast<int>(terms.size()) - 1; }
    int in_dim() const { return static_cast<int>(base_point.size()); }
    int out_dim() const { return terms.empty() ? 0 : terms[0].out_dim; }

    const std::vector<S>& value() const { return terms[0].coeffs; }
};

/// Iterated-derivative data: D^0 f, ..., D^N f at a base point, each tensor
/// symmetric under slot permutations.
template <class S>
struct DerivativeSequence {
    Vector<S> base_point;
    std::vector<MultilinearMap<S>> tensors; // D^0 .. D^N

    int order() const { return static_cast<int>(tensors.size()) - 1; }
    int in_dim() const { return static_cast<int>(base_point.size()); }
    int out_dim() const { return tensors.empty() ? 0 : tensors[0].out_dim; }

    const std::vector<S>& value() const { return tensors[0].coeffs; }
};

template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_zero(const F& K, Vector<ScalarOf<F>> base, int order, int out_dim) {
    if (order < 0)
        throw UsageError("series order must be nonnegative");
    TaylorSeries<ScalarOf<F>> s;
    const int d = static_cast<int>(base.size());
    s.base_point = std::move(base);
    s.terms.reserve(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n)
        s.terms.push_back(ml_zero(K, n, d, out_dim));
    return s;
}

template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_constant(const F& K, Vector<ScalarOf<F>> base, int order,
                                      const Vector<ScalarOf<F>>& value) {
    auto s = ts_zero(K, std::move(base), order, static_cast<int>(value.size()));
    s.terms[0].coeffs = value;
    return s;
}

/// Series of the identity function at a base point: p_0 = x, p_1 = Id.
template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_identity(const F& K, Vector<ScalarOf<F>> base, int order) {
    if (order < 1)
        throw UsageError("identity series needs order >= 1");
    const int d = static_cast<int>(base.size());
    Vector<ScalarOf<F>> value = base;
    auto s = ts_zero(K, std::move(base), order, d);
    s.terms[0].coeffs = std::move(value);
    for (int i = 0; i < d; ++i)
        s.terms[1].coeffs[static_cast<std::size_t>(i) * d + i] = K.one();
    return s;
}

namespace detail {

/// Ordered compositions of n into parts >= 1, by recursive descent over the
/// first block length (deterministic enumeration order).
inline std::vector<std::vector<int>> compositions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int first = 1; first <= rest; ++first) {
            cur.push_back(first);
            self(self, rest - first);
            cur.pop_back();
        }
    };
    rec(rec, n);
    return out;
}

/// Outer map q (order k, in_dim mid) applied to inner maps feeding disjoint
/// slot groups of the result:
///   R(v*) = q(inner_0(v-group_0), ..., inner_{k-1}(v-group_{k-1})).
/// `groups[i]` lists the result slots consumed by inner_i, in the order the
/// inner map reads them. Ordered-composition callers pass consecutive
/// blocks; the set-partition caller passes parts with increasing indices.
template <NormedField F>
MultilinearMap<ScalarOf<F>> apply_to_groups(const F& K, const MultilinearMap<ScalarOf<F>>& q,
                                            std::span<const MultilinearMap<ScalarOf<F>>* const> inners,
                                            std::span<const std::vector<int>> groups) {
    const int k = q.order;
    if (k < 1)
        throw UsageError("composition needs at least one block");
    if (static_cast<int>(inners.size()) != k || static_cast<int>(groups.size()) != k)
        throw UsageError("composition block count mismatch");
    const int mid = q.in_dim;
    int n = 0;
    int d = 1;
    for (int i = 0; i < k; ++i) {
        const auto& inner = *inners[static_cast<std::size_t>(i)];
        if (inner.out_dim != mid)
            throw UsageError("composition middle dimension mismatch");
        if (static_cast<int>(groups[static_cast<std::size_t>(i)].size()) != inner.order)
            throw UsageError("composition block size mismatch");
        n += inner.order;
        d = inner.in_dim;
    }
    auto R = ml_zero(K, n, d, q.out_dim);
    const std::size_t rtab = R.table_size();
    const std::size_t qtab = q.table_size();
    const std::size_t mid_tuples = ml_pow(mid, k);
    std::vector<int> j;
    std::vector<std::size_t> block_flat(static_cast<std::size_t>(k));
    std::vector<int> t(static_cast<std::size_t>(k));
    for (std::size_t flat = 0; flat < rtab; ++flat) {
        ml_decode(flat, d, n, j);
        for (int i = 0; i < k; ++i) {
            std::size_t bf = 0;
            for (int slot : groups[static_cast<std::size_t>(i)])
                bf = bf * static_cast<std::size_t>(d) + static_cast<std::size_t>(j[static_cast<std::size_t>(slot)]);
            block_flat[static_cast<std::size_t>(i)] = bf;
        }
        for (std::size_t tf = 0; tf < mid_tuples; ++tf) {
            ml_decode(tf, mid, k, t);
            ScalarOf<F> prod = K.one();
            bool live = true;
            for (int i = 0; i < k && live; ++i) {
                const auto& inner = *inners[static_cast<std::size_t>(i)];
                const ScalarOf<F>& c =
                    inner.coeffs[static_cast<std::size_t>(t[static_cast<std::size_t>(i)]) * inner.table_size() +
                                 block_flat[static_cast<std::size_t>(i)]];
                if (K.norm(c) == 0.0)
                    live = false;
                else
                    prod = prod * c;
            }
            if (!live)
                continue;
            for (int o = 0; o < q.out_dim; ++o) {
                const ScalarOf<F>& qc = q.coeffs[static_cast<std::size_t>(o) * qtab + tf];
                if (K.norm(qc) == 0.0)
                    continue;
                R.coeffs[static_cast<std::size_t>(o) * rtab + flat] =
                    R.coeffs[static_cast<std::size_t>(o) * rtab + flat] + qc * prod;
            }
        }
    }
    return R;
}

} // namespace detail

/// f(y): sum_{n<=N} p_n(y - x, ..., y - x). Exact for polynomial series over
/// exact fields.
template <NormedField F>
Vector<ScalarOf<F>> ts_eval(const F& K, const TaylorSeries<ScalarOf<F>>& s,
                            const Vector<ScalarOf<F>>& y) {
    if (static_cast<int>(y.size()) != s.in_dim())
        throw UsageError("evaluation point dimension mismatch");
    const auto offset = vec_sub(y, s.base_point);
    auto acc = vec_of_zeros(K, s.out_dim());
    std::vector<Vector<ScalarOf<F>>> args;
    for (int n = 0; n <= s.order(); ++n) {
        acc = vec_add(acc, ml_eval(K, s.terms[static_cast<std::size_t>(n)],
                                   std::span<const Vector<ScalarOf<F>>>(args)));
        args.push_back(offset);
    }
    return acc;
}

/// Termwise sum; result order = min of the input orders.
template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_add(const F& K, const TaylorSeries<ScalarOf<F>>& a,
                                 const TaylorSeries<ScalarOf<F>>& b) {
    if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim())
        throw UsageError("series dimension mismatch");
    if (!vec_eq(K, a.base_point, b.base_point))
        throw UsageError("series base-point mismatch");
    const int N = std::min(a.order(), b.order());
    TaylorSeries<ScalarOf<F>> r;
    r.base_point = a.base_point;
    for (int n = 0; n <= N; ++n)
        r.terms.push_back(ml_add(K, a.terms[static_cast<std::size_t>(n)], b.terms[static_cast<std::size_t>(n)]));
    return r;
}

template <class S>
TaylorSeries<S> ts_scale(const S& c, const TaylorSeries<S>& a) {
    TaylorSeries<S> r = a;
    for (auto& t : r.terms)
        t = ml_scale(c, t);
    return r;
}

template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_neg(const F& K, const TaylorSeries<ScalarOf<F>>& a) {
    return ts_scale(K.neg(K.one()), a);
}

template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_sub(const F& K, const TaylorSeries<ScalarOf<F>>& a,
                                 const TaylorSeries<ScalarOf<F>>& b) {
    return ts_add(K, a, ts_neg(K, b));
}

template <NormedField F>
bool ts_eq(const F& K, const TaylorSeries<ScalarOf<F>>& a, const TaylorSeries<ScalarOf<F>>& b) {
    if (a.order() != b.order() || !vec_eq(K, a.base_point, b.base_point))
        return false;
    for (int n = 0; n <= a.order(); ++n)
        if (!ml_eq(K, a.terms[static_cast<std::size_t>(n)], b.terms[static_cast<std::size_t>(n)]))
            return false;
    return true;
}

/// Product of scalar-valued series at the same base point:
///   r_n(v_1..v_n) = sum_{a+b=n} p_a(v_1..v_a) * q_b(v_{a+1}..v_n),
/// the consecutive-split representative, so on the diagonal
/// r_n(y..y) = sum_{a+b=n} p_a(y..y) q_b(y..y) with no multiplicity.
template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_mul(const F& K, const TaylorSeries<ScalarOf<F>>& a,
                                 const TaylorSeries<ScalarOf<F>>& b) {
    if (a.out_dim() != 1 || b.out_dim() != 1)
        throw UsageError("ts_mul is defined for scalar-valued series");
    if (a.in_dim() != b.in_dim())
        throw UsageError("series dimension mismatch");
    if (!vec_eq(K, a.base_point, b.base_point))
        throw UsageError("series base-point mismatch");
    const int N = std::min(a.order(), b.order());
    const int d = a.in_dim();
    auto r = ts_zero(K, a.base_point, N, 1);
    std::vector<int> j;
    for (int n = 0; n <= N; ++n) {
        auto& rn = r.terms[static_cast<std::size_t>(n)];
        const std::size_t tab = rn.table_size();
        for (std::size_t flat = 0; flat < tab; ++flat) {
            ml_decode(flat, d, n, j);
            ScalarOf<F> acc = K.zero();
            for (int ao = 0; ao <= n; ++ao) {
                const int bo = n - ao;
                std::size_t pf = ml_encode(std::span<const int>(j.data(), static_cast<std::size_t>(ao)), d);
                std::size_t qf = ml_encode(std::span<const int>(j.data() + ao, static_cast<std::size_t>(bo)), d);
                acc = acc + a.terms[static_cast<std::size_t>(ao)].coeffs[pf] *
                                b.terms[static_cast<std::size_t>(bo)].coeffs[qf];
            }
            rn.coeffs[flat] = acc;
        }
    }
    return r;
}

/// Composition in the series convention. Requires g to be based at the value
/// of f (its constant term); the order-n result term sums, over ordered
/// compositions (n_1, ..., n_k) of n with n_i >= 1, the maps
///   q_k(p_{n_1}(v-block_1), ..., p_{n_k}(v-block_k))
/// with consecutive blocks. The constant term is q_0.
template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_compose(const F& K, const TaylorSeries<ScalarOf<F>>& g,
                                     const TaylorSeries<ScalarOf<F>>& f) {
    if (g.in_dim() != f.out_dim())
        throw UsageError("compose dimension mismatch: g.in_dim != f.out_dim");
    if (!vec_eq(K, g.base_point, f.value()))
        throw UsageError("compose base mismatch: g must be based at the value of f");
    const int N = std::min(g.order(), f.order());
    auto r = ts_zero(K, f.base_point, N, g.out_dim());
    r.terms[0].coeffs = g.value();
    for (int n = 1; n <= N; ++n) {
        auto& rn = r.terms[static_cast<std::size_t>(n)];
        for (const auto& comp : detail::compositions(n)) {
            const int k = static_cast<int>(comp.size());
            std::vector<const MultilinearMap<ScalarOf<F>>*> inners;
            std::vector<std::vector<int>> groups;
            int pos = 0;
            for (int ni : comp) {
                inners.push_back(&f.terms[static_cast<std::size_t>(ni)]);
                std::vector<int> grp(static_cast<std::size_t>(ni));
                for (int t = 0; t < ni; ++t)
                    grp[static_cast<std::size_t>(t)] = pos + t;
                groups.push_back(std::move(grp));
                pos += ni;
            }
            rn = ml_add(K, rn,
                        detail::apply_to_groups(K, g.terms[static_cast<std::size_t>(k)],
                                                std::span<const MultilinearMap<ScalarOf<F>>* const>(inners),
                                                std::span<const std::vector<int>>(groups)));
        }
    }
    return r;
}

/// Series convention -> derivative convention:
///   D^n f(x)(v_1..v_n) = sum_{sigma} p_n(v_sigma(1), ..., v_sigma(n)),
/// i.e. n! * symmetrize(p_n). Output tensors are symmetric by construction.
template <NormedField F>
DerivativeSequence<ScalarOf<F>> to_derivatives(const F& K, const TaylorSeries<ScalarOf<F>>& s) {
    DerivativeSequence<ScalarOf<F>> seq;
    seq.base_point = s.base_point;
    seq.tensors.reserve(s.terms.size());
    for (const auto& p : s.terms)
        seq.tensors.push_back(ml_permutation_sum(K, p));
    return seq;
}

/// Faa di Bruno in the derivative convention:
///   D^n (g.f)(x)(v_0..v_{n-1}) =
///     sum over partitions {I_0,...,I_{k-1}} of {0..n-1} (canonical order) of
///       D^k g(f(x)) (D^{|I_0|} f(x)(v_{I_0}), ..., D^{|I_{k-1}|} f(x)(v_{I_{k-1}})),
/// vectors fed to inner derivatives in increasing index order within a part.
template <NormedField F>
DerivativeSequence<ScalarOf<F>> faa_di_bruno(const F& K, const DerivativeSequence<ScalarOf<F>>& Dg,
                                             const DerivativeSequence<ScalarOf<F>>& Df) {
    if (Dg.in_dim() != Df.out_dim())
        throw UsageError("faa_di_bruno dimension mismatch");
    if (!vec_eq(K, Dg.base_point, Df.value()))
        throw UsageError("faa_di_bruno base mismatch: Dg must be based at the value of Df");
    const int N = std::min(Dg.order(), Df.order());
    DerivativeSequence<ScalarOf<F>> r;
    r.base_point = Df.base_point;
    auto first = ml_constant(Dg.value(), Df.in_dim());
    r.tensors.push_back(std::move(first));
    for (int n = 1; n <= N; ++n) {
        auto acc = ml_zero(K, n, Df.in_dim(), Dg.out_dim());
        for (const auto& P : enumerate_partitions(n)) {
            const int k = static_cast<int>(P.parts.size());
            std::vector<const MultilinearMap<ScalarOf<F>>*> inners;
            inners.reserve(P.parts.size());
            for (const auto& part : P.parts)
                inners.push_back(&Df.tensors[part.size()]);
            acc = ml_add(K, acc,
                         detail::apply_to_groups(K, Dg.tensors[static_cast<std::size_t>(k)],
                                                 std::span<const MultilinearMap<ScalarOf<F>>* const>(inners),
                                                 std::span<const std::vector<int>>(P.parts)));
        }
        r.tensors.push_back(std::move(acc));
    }
    return r;
}

/// Change of origin: re-expand the series at base + y. The order-k term
/// collects, for every n <= N and every k-element slot subset I of p_n, the
/// map with non-I slots contracted with y:
///   f(x + y + z) = sum_k q_k(z, ..., z).
/// Exact re-expansion for polynomial series of true degree <= N.
template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_rebase(const F& K, const TaylorSeries<ScalarOf<F>>& s,
                                    const Vector<ScalarOf<F>>& y) {
    if (static_cast<int>(y.size()) != s.in_dim())
        throw UsageError("rebase offset dimension mismatch");
    const int N = s.order();
    auto r = ts_zero(K, vec_add(s.base_point, y), N, s.out_dim());
    for (int n = 0; n <= N; ++n) {
        const auto& p = s.terms[static_cast<std::size_t>(n)];
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            auto contracted = p;
            // Contract non-kept slots from the highest index down so the
            // remaining slot positions stay valid.
            for (int slot = n - 1; slot >= 0; --slot)
                if (!(mask & (1u << slot)))
                    contracted = ml_contract_slot(K, contracted, slot, y);
            auto& target = r.terms[static_cast<std::size_t>(contracted.order)];
            target = ml_add(K, target, contracted);
        }
    }
    return r;
}

/// Formal compositional inverse of p through order N (requires N <= order of
/// p: terms of p beyond its stated order are not extrapolated). Built
/// order-by-order: q_1 = p_1^{-1}, and for n >= 2 the degree-n composition
/// equation determines q_n from earlier terms. Throws SingularMapError when
/// the linear term is not invertible.
template <NormedField F>
TaylorSeries<ScalarOf<F>> ts_reversion(const F& K, const TaylorSeries<ScalarOf<F>>& p, int N) {
    if (p.in_dim() != p.out_dim())
        throw UsageError("reversion needs in_dim == out_dim");
    if (N < 1 || N > p.order())
        throw UsageError("reversion order must be within the order of the series");
    const int d = p.in_dim();

    Matrix<ScalarOf<F>> A(K, d, d);
    for (int o = 0; o < d; ++o)
        for (int j = 0; j < d; ++j)
            A.at(o, j) = p.terms[1].coeffs[static_cast<std::size_t>(o) * d + j];
    Matrix<ScalarOf<F>> A_inv;
    try {
        A_inv = mat_inverse(K, A);
    } catch (const SingularMapError&) {
        throw SingularMapError("reversion: linear term p_1 is not invertible");
    }

    auto q = ts_zero(K, p.value(), N, d);
    q.terms[0].coeffs = p.base_point;
    auto& q1 = q.terms[1];
    for (int o = 0; o < d; ++o)
        for (int j = 0; j < d; ++j)
            q1.coeffs[static_cast<std::size_t>(o) * d + j] = A_inv.at(o, j);

    const ScalarOf<F> minus_one = K.neg(K.one());
    for (int n = 2; n <= N; ++n) {
        // sum over compositions with k < n parts (those involve some p_{>=2})
        auto S = ml_zero(K, n, d, d);
        for (const auto& comp : detail::compositions(n)) {
            const int k = static_cast<int>(comp.size());
            if (k == n)
                continue;
            std::vector<const MultilinearMap<ScalarOf<F>>*> inners;
            std::vector<std::vector<int>> groups;
            int pos = 0;
            for (int ni : comp) {
                inners.push_back(&p.terms[static_cast<std::size_t>(ni)]);
                std::vector<int> grp(static_cast<std::size_t>(ni));
                for (int t = 0; t < ni; ++t)
                    grp[static_cast<std::size_t>(t)] = pos + t;
                groups.push_back(std::move(grp));
                pos += ni;
            }
            S = ml_add(K, S,
                       detail::apply_to_groups(K, q.terms[static_cast<std::size_t>(k)],
                                               std::span<const MultilinearMap<ScalarOf<F>>* const>(inners),
                                               std::span<const std::vector<int>>(groups)));
        }
        // q_n(p_1 v_1, ..., p_1 v_n) = -S  =>  q_n = (-S)(A^{-1} each slot)
        q.terms[static_cast<std::size_t>(n)] = ml_substitute_linear(K, ml_scale(minus_one, S), A_inv);
    }
    return q;
}

/// Finite-data proxy for the convergence radius:
///   1 / max_{1<=n<=N} ml_norm_bound(p_n)^{1/n},
/// infinity when every bound vanishes. A heuristic lower-bound style
/// estimate from finitely many terms, not the true radius.
template <NormedField F>
double radius_estimate(const F& K, const TaylorSeries<ScalarOf<F>>& s) {
    if (s.order() < 1)
        throw UsageError("radius estimate needs order >= 1");
    double worst = 0.0;
    for (int n = 1; n <= s.order(); ++n) {
        double b = ml_norm_bound(K, s.terms[static_cast<std::size_t>(n)]);
        if (b > 0.0)
            worst = std::max(worst, std::pow(b, 1.0 / n));
    }
    if (worst == 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / worst;
}

} // namespace frechet
