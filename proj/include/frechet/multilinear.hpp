#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/fields.hpp"
#include "frechet/linalg.hpp"

namespace frechet {

/// Dense continuous n-multilinear map (k^d)^n -> k^m.
///
/// Coefficient layout is row-major with the output index outermost:
/// coeffs[((out*d + j_0)*d + j_1)*d + ... + j_{n-1}], so slot 0 is the most
/// significant index. An order-0 map is a constant vector in k^m.
template <class S>
struct MultilinearMap {
    int order = 0;
    int in_dim = 1;
    int out_dim = 1;
    std::vector<S> coeffs; // size out_dim * in_dim^order

    std::size_t table_size() const { return coeffs.size() / static_cast<std::size_t>(out_dim); }
};

inline std::size_t ml_pow(int d, int n) {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i)
        r *= static_cast<std::size_t>(d);
    return r;
}

template <NormedField F>
MultilinearMap<ScalarOf<F>> ml_zero(const F& K, int order, int in_dim, int out_dim) {
    if (order < 0 || in_dim < 1 || out_dim < 1)
        throw UsageError("bad multilinear map shape");
    MultilinearMap<ScalarOf<F>> T;
    T.order = order;
    T.in_dim = in_dim;
    T.out_dim = out_dim;
    T.coeffs.assign(static_cast<std::size_t>(out_dim) * ml_pow(in_dim, order), K.zero());
    return T;
}

/// Order-0 map from a constant vector.
template <class S>
MultilinearMap<S> ml_constant(const Vector<S>& value, int in_dim) {
    MultilinearMap<S> T;
    T.order = 0;
    T.in_dim = in_dim;
    T.out_dim = static_cast<int>(value.size());
    T.coeffs = value;
    return T;
}

/// Decode a flat table index into the multi-index (j_0, ..., j_{n-1}).
inline void ml_decode(std::size_t flat, int d, int n, std::vector<int>& j) {
    j.resize(static_cast<std::size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        j[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(d));
        flat /= static_cast<std::size_t>(d);
    }
}

inline std::size_t ml_encode(std::span<const int> j, int d) {
    std::size_t flat = 0;
    for (int jk : j)
        flat = flat * static_cast<std::size_t>(d) + static_cast<std::size_t>(jk);
    return flat;
}

/// T(v_1, ..., v_n): sum over multi-indices of coeff * prod v_i[j_i].
template <NormedField F>
Vector<ScalarOf<F>> ml_eval(const F& K, const MultilinearMap<ScalarOf<F>>& T,
                            std::span<const Vector<ScalarOf<F>>> vs) {
    if (static_cast<int>(vs.size()) != T.order)
        throw UsageError("multilinear arity mismatch");
    for (const auto& v : vs)
        if (static_cast<int>(v.size()) != T.in_dim)
            throw UsageError("multilinear argument dimension mismatch");
    auto out = vec_of_zeros(K, T.out_dim);
    const std::size_t tab = T.table_size();
    std::vector<int> j;
    for (std::size_t flat = 0; flat < tab; ++flat) {
        ml_decode(flat, T.in_dim, T.order, j);
        ScalarOf<F> prod = K.one();
        for (int k = 0; k < T.order; ++k)
            prod = prod * vs[static_cast<std::size_t>(k)][static_cast<std::size_t>(j[static_cast<std::size_t>(k)])];
        for (int o = 0; o < T.out_dim; ++o) {
            const ScalarOf<F>& c = T.coeffs[static_cast<std::size_t>(o) * tab + flat];
            out[static_cast<std::size_t>(o)] = out[static_cast<std::size_t>(o)] + c * prod;
        }
    }
    return out;
}

template <NormedField F>
MultilinearMap<ScalarOf<F>> ml_add(const F& K, const MultilinearMap<ScalarOf<F>>& A,
                                   const MultilinearMap<ScalarOf<F>>& B) {
    (void)K;
    if (A.order != B.order || A.in_dim != B.in_dim || A.out_dim != B.out_dim)
        throw UsageError("multilinear map shape mismatch");
    MultilinearMap<ScalarOf<F>> R = A;
    for (std::size_t i = 0; i < R.coeffs.size(); ++i)
        R.coeffs[i] = R.coeffs[i] + B.coeffs[i];
    return R;
}

template <class S>
MultilinearMap<S> ml_scale(const S& c, const MultilinearMap<S>& T) {
    MultilinearMap<S> R = T;
    for (auto& x : R.coeffs)
        x = c * x;
    return R;
}

template <NormedField F>
bool ml_eq(const F& K, const MultilinearMap<ScalarOf<F>>& A, const MultilinearMap<ScalarOf<F>>& B) {
    if (A.order != B.order || A.in_dim != B.in_dim || A.out_dim != B.out_dim)
        return false;
    for (std::size_t i = 0; i < A.coeffs.size(); ++i)
        if (!K.eq(A.coeffs[i], B.coeffs[i]))
            return false;
    return true;
}

/// curry_left of an order-(n+1) map: the linear map k^d -> (order-n maps),
/// represented by the images of the basis vectors.
template <NormedField F>
std::vector<MultilinearMap<ScalarOf<F>>> curry_left(const F& K, const MultilinearMap<ScalarOf<F>>& T) {
    if (T.order < 1)
        throw UsageError("curry_left needs order >= 1");
    std::vector<MultilinearMap<ScalarOf<F>>> images;
    images.reserve(static_cast<std::size_t>(T.in_dim));
    const std::size_t inner = ml_pow(T.in_dim, T.order - 1);
    const std::size_t tab = T.table_size();
    for (int j0 = 0; j0 < T.in_dim; ++j0) {
        auto M = ml_zero(K, T.order - 1, T.in_dim, T.out_dim);
        for (int o = 0; o < T.out_dim; ++o)
            for (std::size_t rest = 0; rest < inner; ++rest)
                M.coeffs[static_cast<std::size_t>(o) * inner + rest] =
                    T.coeffs[static_cast<std::size_t>(o) * tab + static_cast<std::size_t>(j0) * inner + rest];
        images.push_back(std::move(M));
    }
    return images;
}

template <NormedField F>
MultilinearMap<ScalarOf<F>> uncurry_left(const F& K, const std::vector<MultilinearMap<ScalarOf<F>>>& images) {
    if (images.empty())
        throw UsageError("uncurry_left needs at least one basis image");
    const int d = static_cast<int>(images.size());
    const int n = images[0].order;
    const int m = images[0].out_dim;
    for (const auto& M : images)
        if (M.order != n || M.in_dim != d || M.out_dim != m)
            throw UsageError("uncurry_left: inconsistent basis images");
    auto T = ml_zero(K, n + 1, d, m);
    const std::size_t inner = ml_pow(d, n);
    const std::size_t tab = T.table_size();
    for (int j0 = 0; j0 < d; ++j0)
        for (int o = 0; o < m; ++o)
            for (std::size_t rest = 0; rest < inner; ++rest)
                T.coeffs[static_cast<std::size_t>(o) * tab + static_cast<std::size_t>(j0) * inner + rest] =
                    images[static_cast<std::size_t>(j0)].coeffs[static_cast<std::size_t>(o) * inner + rest];
    return T;
}

namespace detail {

/// Visit all permutations of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_permutation(int n, Fn&& fn) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        fn(std::span<const int>(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

} // namespace detail

/// Sum of T over all slot permutations: S(v_1..v_n) = sum_sigma T(v_sigma(1..n)).
/// This is n! * symmetrize(T); kept separate because the derivative bridge
/// wants the un-normalized permutation sum.
template <NormedField F>
MultilinearMap<ScalarOf<F>> ml_permutation_sum(const F& K, const MultilinearMap<ScalarOf<F>>& T) {
    if (T.order <= 1)
        return T;
    auto R = ml_zero(K, T.order, T.in_dim, T.out_dim);
    const std::size_t tab = T.table_size();
    std::vector<int> j, jp(static_cast<std::size_t>(T.order));
    detail::for_each_permutation(T.order, [&](std::span<const int> perm) {
        for (std::size_t flat = 0; flat < tab; ++flat) {
            ml_decode(flat, T.in_dim, T.order, j);
            // R(v_1..v_n) += T(v_perm(1..n)): slot k of T reads index j[perm[k]].
            for (int k = 0; k < T.order; ++k)
                jp[static_cast<std::size_t>(k)] = j[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
            std::size_t src = ml_encode(jp, T.in_dim);
            for (int o = 0; o < T.out_dim; ++o)
                R.coeffs[static_cast<std::size_t>(o) * tab + flat] =
                    R.coeffs[static_cast<std::size_t>(o) * tab + flat] +
                    T.coeffs[static_cast<std::size_t>(o) * tab + src];
        }
    });
    return R;
}

/// Average over all slot permutations: idempotent, linear, agrees with T on
/// the diagonal. Defined only in characteristic 0 (true of every provided
/// field); over a field of characteristic 2 such as F_2((t)) the average
/// does not exist and a bilinear map need not have any symmetric
/// representative at all.
template <NormedField F>
MultilinearMap<ScalarOf<F>> symmetrize(const F& K, const MultilinearMap<ScalarOf<F>>& T) {
    if (T.order <= 1)
        return T;
    std::int64_t fact = 1;
    for (int i = 2; i <= T.order; ++i)
        fact *= i;
    return ml_scale(K.div(K.one(), K.from_int(fact)), ml_permutation_sum(K, T));
}

/// Certified upper bound on sup{ |T(v_1..v_n)| : sup-norm of each v_i <= 1 }:
/// the sum of all coefficient norms. Not the exact operator norm.
template <NormedField F>
double ml_norm_bound(const F& K, const MultilinearMap<ScalarOf<F>>& T) {
    double s = 0.0;
    for (const auto& c : T.coeffs)
        s += K.norm(c);
    return s;
}

/// Contract one slot with a fixed vector: result order n-1.
template <NormedField F>
MultilinearMap<ScalarOf<F>> ml_contract_slot(const F& K, const MultilinearMap<ScalarOf<F>>& T,
                                             int slot, const Vector<ScalarOf<F>>& y) {
    if (slot < 0 || slot >= T.order)
        throw UsageError("contraction slot out of range");
    if (static_cast<int>(y.size()) != T.in_dim)
        throw UsageError("contraction vector dimension mismatch");
    auto R = ml_zero(K, T.order - 1, T.in_dim, T.out_dim);
    const std::size_t rtab = R.table_size();
    const std::size_t ttab = T.table_size();
    std::vector<int> j, full(static_cast<std::size_t>(T.order));
    for (std::size_t flat = 0; flat < rtab; ++flat) {
        ml_decode(flat, T.in_dim, T.order - 1, j);
        for (int jy = 0; jy < T.in_dim; ++jy) {
            int pos = 0;
            for (int k = 0; k < T.order; ++k)
                full[static_cast<std::size_t>(k)] = (k == slot) ? jy : j[static_cast<std::size_t>(pos++)];
            std::size_t src = ml_encode(full, T.in_dim);
            for (int o = 0; o < T.out_dim; ++o)
                R.coeffs[static_cast<std::size_t>(o) * rtab + flat] =
                    R.coeffs[static_cast<std::size_t>(o) * rtab + flat] +
                    T.coeffs[static_cast<std::size_t>(o) * ttab + src] * y[static_cast<std::size_t>(jy)];
        }
    }
    return R;
}

/// Substitute every slot with the same linear map: R(v_1..v_n) = T(A v_1, ..., A v_n).
template <NormedField F>
MultilinearMap<ScalarOf<F>> ml_substitute_linear(const F& K, const MultilinearMap<ScalarOf<F>>& T,
                                                 const Matrix<ScalarOf<F>>& A) {
    if (A.rows != T.in_dim || A.cols != A.rows)
        throw UsageError("slot substitution expects a square matrix matching in_dim");
    auto cur = T;
    // One slot per pass: slot k of the result reads A applied to its vector.
    for (int slot = 0; slot < T.order; ++slot) {
        auto next = ml_zero(K, T.order, T.in_dim, T.out_dim);
        const std::size_t tab = next.table_size();
        std::vector<int> j;
        for (std::size_t flat = 0; flat < tab; ++flat) {
            ml_decode(flat, T.in_dim, T.order, j);
            std::vector<int> src_j = j;
            for (int jj = 0; jj < T.in_dim; ++jj) {
                src_j[static_cast<std::size_t>(slot)] = jj;
                std::size_t src = ml_encode(src_j, T.in_dim);
                const ScalarOf<F>& w = A.at(jj, j[static_cast<std::size_t>(slot)]);
                if (K.norm(w) == 0.0)
                    continue;
                for (int o = 0; o < T.out_dim; ++o)
                    next.coeffs[static_cast<std::size_t>(o) * tab + flat] =
                        next.coeffs[static_cast<std::size_t>(o) * tab + flat] +
                        cur.coeffs[static_cast<std::size_t>(o) * tab + src] * w;
            }
        }
        cur = std::move(next);
    }
    return cur;
}

} // namespace frechet
