#pragma once

#include <span>
#include <vector>

#include "frechet/calculus.hpp"
#include "frechet/errors.hpp"
#include "frechet/expr.hpp"
#include "frechet/fields.hpp"
#include "frechet/linalg.hpp"
#include "frechet/taylor.hpp"

namespace frechet {

/// Vector field V : k^d -> k^d given componentwise by expressions.
struct VectorField {
    std::vector<Expr> components;

    int dim() const { return static_cast<int>(components.size()); }
};

template <NormedField F>
Vector<ScalarOf<F>> vf_eval(const F& K, const VectorField& V, const Vector<ScalarOf<F>>& x) {
    if (V.dim() != static_cast<int>(x.size()))
        throw UsageError("vector field dimension mismatch");
    Vector<ScalarOf<F>> out;
    out.reserve(V.components.size());
    for (const auto& e : V.components)
        out.push_back(expr_eval(K, e, x));
    return out;
}

/// Jacobian of an expression tuple at a point, rows from the order-1 series
/// terms (p_1 is exactly the gradient row).
template <NormedField F>
Matrix<ScalarOf<F>> jacobian(const F& K, std::span<const Expr> components,
                             const Vector<ScalarOf<F>>& x) {
    const int d = static_cast<int>(x.size());
    Matrix<ScalarOf<F>> J(K, static_cast<int>(components.size()), d);
    for (int c = 0; c < J.rows; ++c) {
        auto s = taylor_at(K, components[static_cast<std::size_t>(c)], x, 1);
        for (int j = 0; j < d; ++j)
            J.at(c, j) = s.terms[1].coeffs[static_cast<std::size_t>(j)];
    }
    return J;
}

template <NormedField F>
Matrix<ScalarOf<F>> jacobian(const F& K, const VectorField& V, const Vector<ScalarOf<F>>& x) {
    return jacobian(K, std::span<const Expr>(V.components), x);
}

/// [V, W](x) = DW(x)(V(x)) - DV(x)(W(x)).
template <NormedField F>
Vector<ScalarOf<F>> lie_bracket(const F& K, const VectorField& V, const VectorField& W,
                                const Vector<ScalarOf<F>>& x) {
    if (V.dim() != W.dim())
        throw UsageError("vector field dimension mismatch");
    return vec_sub(mat_vec(jacobian(K, W, x), vf_eval(K, V, x)),
                   mat_vec(jacobian(K, V, x), vf_eval(K, W, x)));
}

/// Derivative of the bracket field at x, from order-2 jet data:
///   D[V,W](x)(u) = D^2 W(x)(u, V(x)) + JW JV u - D^2 V(x)(u, W(x)) - JV JW u.
/// Lets Lie-algebra identities (Jacobi) be checked exactly without symbolic
/// differentiation.
template <NormedField F>
Matrix<ScalarOf<F>> bracket_jacobian(const F& K, const VectorField& V, const VectorField& W,
                                     const Vector<ScalarOf<F>>& x) {
    if (V.dim() != W.dim() || V.dim() != static_cast<int>(x.size()))
        throw UsageError("vector field dimension mismatch");
    const int d = V.dim();
    const auto Vx = vf_eval(K, V, x);
    const auto Wx = vf_eval(K, W, x);
    const auto JV = jacobian(K, V, x);
    const auto JW = jacobian(K, W, x);

    Matrix<ScalarOf<F>> M(K, d, d);
    for (int c = 0; c < d; ++c) {
        auto DW2 = to_derivatives(K, taylor_at(K, W.components[static_cast<std::size_t>(c)], x, 2)).tensors[2];
        auto DV2 = to_derivatives(K, taylor_at(K, V.components[static_cast<std::size_t>(c)], x, 2)).tensors[2];
        auto roww = ml_contract_slot(K, DW2, 1, Vx); // D^2 W_c(., V(x))
        auto rowv = ml_contract_slot(K, DV2, 1, Wx); // D^2 V_c(., W(x))
        for (int j = 0; j < d; ++j)
            M.at(c, j) = roww.coeffs[static_cast<std::size_t>(j)] - rowv.coeffs[static_cast<std::size_t>(j)];
    }
    const auto JWJV = mat_mul(JW, JV);
    const auto JVJW = mat_mul(JV, JW);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            M.at(i, j) = M.at(i, j) + JWJV.at(i, j) - JVJW.at(i, j);
    return M;
}

/// [U, [V, W]](x), via the bracket-field derivative above.
template <NormedField F>
Vector<ScalarOf<F>> nested_bracket(const F& K, const VectorField& U, const VectorField& V,
                                   const VectorField& W, const Vector<ScalarOf<F>>& x) {
    return vec_sub(mat_vec(bracket_jacobian(K, V, W, x), vf_eval(K, U, x)),
                   mat_vec(jacobian(K, U, x), lie_bracket(K, V, W, x)));
}

namespace detail {

/// Condition-number gate for declaring a real Jacobian invertible.
inline constexpr double kConditionLimit = 1e12;

template <NormedField F>
Matrix<ScalarOf<F>> gated_inverse(const F& K, const Matrix<ScalarOf<F>>& A) {
    auto A_inv = mat_inverse(K, A); // throws SingularMapError on exact singularity
    if (K.kind() == FieldKind::real) {
        double cond = mat_norm_inf(K, A) * mat_norm_inf(K, A_inv);
        if (!(cond < kConditionLimit))
            throw SingularMapError("jacobian numerically singular (condition estimate " +
                                   std::to_string(cond) + ")");
    }
    return A_inv;
}

} // namespace detail

/// Pullback of V under the local diffeomorphism f: Df(x)^{-1} V(f(x)),
/// defined where the Jacobian is invertible.
template <NormedField F>
Vector<ScalarOf<F>> pullback(const F& K, std::span<const Expr> f, const VectorField& V,
                             const Vector<ScalarOf<F>>& x) {
    if (static_cast<int>(f.size()) != static_cast<int>(x.size()) || V.dim() != static_cast<int>(x.size()))
        throw UsageError("pullback dimension mismatch");
    const auto A_inv = detail::gated_inverse(K, jacobian(K, f, x));
    Vector<ScalarOf<F>> fx;
    fx.reserve(f.size());
    for (const auto& e : f)
        fx.push_back(expr_eval(K, e, x));
    return mat_vec(A_inv, vf_eval(K, V, fx));
}

/// Both sides of "pullback commutes with the Lie bracket", plus the order-2
/// residual whose vanishing (symmetry of D^2 f) makes them agree.
template <class S>
struct PullbackBracketReport {
    Vector<S> lhs; // pullback of [V, W]
    Vector<S> rhs; // [pullback V, pullback W]
    double error_norm = 0.0;
    double cancel_symm_residual = 0.0;
};

/// The right-hand bracket is evaluated through the derivative of
/// z -> Df(z)^{-1} V(f(z)) by the product/chain rule, term by term:
///   D(pb V)(x)(u) = -A^{-1} D^2f(x)(u, pbV) + A^{-1} JV(f(x)) A u,
/// with A = Df(x) and D^2 f from order-2 jets (symmetric by construction).
/// The residual reported is D^2f(Vt, Wt) - D^2f(Wt, Vt) evaluated on the
/// transported vectors: the exact term that must cancel for the identity.
template <NormedField F>
PullbackBracketReport<ScalarOf<F>> check_pullback_bracket(const F& K, std::span<const Expr> f,
                                                          const VectorField& V, const VectorField& W,
                                                          const Vector<ScalarOf<F>>& x) {
    const int d = static_cast<int>(x.size());
    if (static_cast<int>(f.size()) != d || V.dim() != d || W.dim() != d)
        throw UsageError("pullback dimension mismatch");

    SmoothnessPolicy policy{K.kind(), 2};
    policy.require(f);
    policy.require(std::span<const Expr>(V.components));
    policy.require(std::span<const Expr>(W.components));

    // Order-2 data of f at x: value, Jacobian, second-derivative tensors.
    Vector<ScalarOf<F>> fx;
    Matrix<ScalarOf<F>> A(K, d, d);
    std::vector<MultilinearMap<ScalarOf<F>>> D2f;
    for (int c = 0; c < d; ++c) {
        auto seq = to_derivatives(K, taylor_at(K, f[static_cast<std::size_t>(c)], x, 2));
        fx.push_back(seq.value()[0]);
        for (int j = 0; j < d; ++j)
            A.at(c, j) = seq.tensors[1].coeffs[static_cast<std::size_t>(j)];
        D2f.push_back(seq.tensors[2]);
    }
    const auto A_inv = detail::gated_inverse(K, A);

    const auto Vy = vf_eval(K, V, fx);
    const auto Wy = vf_eval(K, W, fx);
    const auto JVy = jacobian(K, V, fx);
    const auto JWy = jacobian(K, W, fx);
    const auto Vt = mat_vec(A_inv, Vy); // pullback V at x
    const auto Wt = mat_vec(A_inv, Wy);

    auto d2f_at = [&](const Vector<ScalarOf<F>>& u, const Vector<ScalarOf<F>>& w) {
        std::vector<Vector<ScalarOf<F>>> args{u, w};
        Vector<ScalarOf<F>> out;
        out.reserve(D2f.size());
        for (const auto& T : D2f)
            out.push_back(ml_eval(K, T, std::span<const Vector<ScalarOf<F>>>(args))[0]);
        return out;
    };

    PullbackBracketReport<ScalarOf<F>> rep;
    rep.lhs = mat_vec(A_inv, vec_sub(mat_vec(JWy, Vy), mat_vec(JVy, Wy)));

    // D(pb W)(x)(Vt) - D(pb V)(x)(Wt), each by the product rule.
    auto d_pb = [&](const Matrix<ScalarOf<F>>& Jy, const Vector<ScalarOf<F>>& transported,
                    const Vector<ScalarOf<F>>& direction) {
        auto curvature = mat_vec(A_inv, d2f_at(direction, transported));
        auto transport = mat_vec(A_inv, mat_vec(Jy, mat_vec(A, direction)));
        return vec_sub(transport, curvature);
    };
    rep.rhs = vec_sub(d_pb(JWy, Wt, Vt), d_pb(JVy, Vt, Wt));

    rep.error_norm = sup_norm(K, vec_sub(rep.lhs, rep.rhs));
    rep.cancel_symm_residual = sup_norm(K, vec_sub(d2f_at(Vt, Wt), d2f_at(Wt, Vt)));
    return rep;
}

} // namespace frechet
