#pragma once

// Independent oracles for the test suites. These deliberately avoid the
// library code paths they are used to check: the naive evaluator walks the
// coefficient table with an explicit odometer instead of flat decoding, the
// Bell numbers come from the triangle recurrence, partitions are rebuilt by
// brute force over assignment vectors, and derivatives are taken
// symbolically on the expression tree.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "frechet/expr.hpp"
#include "frechet/fields.hpp"
#include "frechet/multilinear.hpp"
#include "frechet/partitions.hpp"

namespace frechet::testing {

/// Naive multilinear evaluation: odometer over slot indices.
template <NormedField F>
Vector<ScalarOf<F>> eval_naive(const F& K, const MultilinearMap<ScalarOf<F>>& T,
                               const std::vector<Vector<ScalarOf<F>>>& vs) {
    auto out = vec_of_zeros(K, T.out_dim);
    std::vector<int> idx(static_cast<std::size_t>(T.order), 0);
    const std::size_t tab = T.table_size();
    for (;;) {
        std::size_t flat = 0;
        auto term = K.one();
        for (int k = 0; k < T.order; ++k) {
            flat = flat * static_cast<std::size_t>(T.in_dim) + static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
            term = term * vs[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
        }
        for (int o = 0; o < T.out_dim; ++o)
            out[static_cast<std::size_t>(o)] =
                out[static_cast<std::size_t>(o)] + T.coeffs[static_cast<std::size_t>(o) * tab + flat] * term;
        int k = T.order - 1;
        while (k >= 0) {
            if (++idx[static_cast<std::size_t>(k)] < T.in_dim)
                break;
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0)
            break;
    }
    return out;
}

inline std::vector<long> bell_numbers(int n_max) {
    std::vector<long> bell{1};
    std::vector<long> row{1};
    for (int n = 1; n <= n_max; ++n) {
        std::vector<long> next{row.back()};
        for (long v : row)
            next.push_back(next.back() + v);
        bell.push_back(next.front());
        row = std::move(next);
    }
    return bell;
}

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

/// Every partition of {0..n-1}, via brute force over all n^n assignment
/// vectors (labels canonicalized before deduplication).
inline std::set<std::string> partitions_by_assignment(int n) {
    std::set<std::string> keys;
    if (n == 0) {
        keys.insert(partition_key(SetPartition{0, {}}));
        return keys;
    }
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    for (;;) {
        std::map<int, std::vector<int>> blocks;
        for (int i = 0; i < n; ++i)
            blocks[a[static_cast<std::size_t>(i)]].push_back(i);
        std::vector<std::vector<int>> parts;
        for (auto& [label, block] : blocks)
            parts.push_back(block);
        keys.insert(partition_key(canonicalized(n, std::move(parts))));
        int k = n - 1;
        while (k >= 0) {
            if (++a[static_cast<std::size_t>(k)] < n)
                break;
            a[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0)
            break;
    }
    return keys;
}

/// Symbolic partial derivative with respect to variable `var`.
inline Expr diff(const Expr& e, int var) {
    switch (e.kind()) {
    case ExprKind::variable:
        return Expr::constant(e.var_index() == var ? 1 : 0);
    case ExprKind::constant:
        return Expr::constant(0);
    case ExprKind::add:
        return diff(e.lhs(), var) + diff(e.rhs(), var);
    case ExprKind::sub:
        return diff(e.lhs(), var) - diff(e.rhs(), var);
    case ExprKind::mul:
        return diff(e.lhs(), var) * e.rhs() + e.lhs() * diff(e.rhs(), var);
    case ExprKind::div:
        return (diff(e.lhs(), var) * e.rhs() - e.lhs() * diff(e.rhs(), var)) / (e.rhs() * e.rhs());
    case ExprKind::int_pow: {
        const int k = e.exponent();
        if (k == 0)
            return Expr::constant(0);
        return Expr::constant(k) * pow(e.lhs(), k - 1) * diff(e.lhs(), var);
    }
    case ExprKind::exp_fn:
        return exp(e.lhs()) * diff(e.lhs(), var);
    case ExprKind::log_fn:
        return diff(e.lhs(), var) / e.lhs();
    case ExprKind::recip1m:
        return diff(e.lhs(), var) * recip_one_minus(e.lhs()) * recip_one_minus(e.lhs());
    }
    throw Error("unreachable expression kind");
}

} // namespace frechet::testing
