#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

#include "impob/descriptor.hpp"
#include "impob/errors.hpp"
#include "impob/matrix.hpp"

namespace impob {

// Canonical decomposition data: T (sE - A) S = diag(sI - A1, sN - I) with N
// nilpotent of index h, and C S = [C1 C2]. Slow subsystem has dimension n1,
// fast subsystem n2.
struct WeierstrassData {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t m = 0;
    RationalMatrix A1;
    RationalMatrix N;
    RationalMatrix C1;
    RationalMatrix C2;
    RationalMatrix T;
    RationalMatrix S;
    std::size_t h = 0;
};

// Smallest h >= 0 with N^h = 0. The 0 x 0 matrix has index 0; a nilpotent
// n x n matrix has index at most n, so anything surviving n steps is not
// nilpotent.
inline std::size_t nilpotency_index(const RationalMatrix& n) {
    if (!n.is_square())
        throw dimension_mismatch("nilpotency_index: matrix not square");
    RationalMatrix acc = RationalMatrix::identity(n.rows());
    for (std::size_t h = 0; h <= n.rows(); ++h) {
        if (acc.is_zero())
            return h;
        acc = acc * n;
    }
    throw not_nilpotent("nilpotency_index: matrix is not nilpotent");
}

namespace detail {

inline void check_weierstrass_shapes(const WeierstrassData& wd) {
    const std::size_t n = wd.n1 + wd.n2;
    if (wd.A1.rows() != wd.n1 || wd.A1.cols() != wd.n1)
        throw dimension_mismatch("weierstrass: A1 must be n1 x n1");
    if (wd.N.rows() != wd.n2 || wd.N.cols() != wd.n2)
        throw dimension_mismatch("weierstrass: N must be n2 x n2");
    if (wd.C1.rows() != wd.m || wd.C1.cols() != wd.n1)
        throw dimension_mismatch("weierstrass: C1 must be m x n1");
    if (wd.C2.rows() != wd.m || wd.C2.cols() != wd.n2)
        throw dimension_mismatch("weierstrass: C2 must be m x n2");
    if (wd.T.rows() != n || wd.T.cols() != n)
        throw dimension_mismatch("weierstrass: T must be n x n");
    if (wd.S.rows() != n || wd.S.cols() != n)
        throw dimension_mismatch("weierstrass: S must be n x n");
}

// Stack [N^{r+2}; C2 N; C2 N^2; ...; C2 N^{r+1}], the fast-subsystem core
// whose rank drives both reduced-form identities.
inline RationalMatrix fast_stack(const WeierstrassData& wd, std::size_t r) {
    RationalMatrix stack(wd.n2 + (r + 1) * wd.m, wd.n2);
    stack.set_block(0, 0, pow(wd.N, r + 2));
    RationalMatrix np = wd.N;
    for (std::size_t j = 0; j < r + 1; ++j) {
        stack.set_block(wd.n2 + j * wd.m, 0, wd.C2 * np);
        np = np * wd.N;
    }
    return stack;
}

} // namespace detail

// Rebuilds original-coordinates data E = T^{-1} diag(I, N) S^{-1},
// A = T^{-1} diag(A1, I) S^{-1}, C = [C1 C2] S^{-1} and validates it. The
// assembled pencil is regular by construction.
inline DescriptorSystem assemble(const WeierstrassData& wd) {
    detail::check_weierstrass_shapes(wd);
    nilpotency_index(wd.N);
    const std::size_t n = wd.n1 + wd.n2;
    RationalMatrix e_inner(n, n), a_inner(n, n), c_inner(wd.m, n);
    e_inner.set_block(0, 0, RationalMatrix::identity(wd.n1));
    e_inner.set_block(wd.n1, wd.n1, wd.N);
    a_inner.set_block(0, 0, wd.A1);
    a_inner.set_block(wd.n1, wd.n1, RationalMatrix::identity(wd.n2));
    c_inner.set_block(0, 0, wd.C1);
    c_inner.set_block(0, wd.n1, wd.C2);
    const RationalMatrix t_inv = inverse(wd.T);
    const RationalMatrix s_inv = inverse(wd.S);
    return DescriptorSystem::validate(t_inv * e_inner * s_inv, t_inv * a_inner * s_inv,
                                      c_inner * s_inv);
}

// Reduced-form rank identity: rank O_{r+2}(N, I, C2) = n2 (r+1) + rank(stack).
inline std::size_t reduced_form_rank(const WeierstrassData& wd, std::size_t r) {
    detail::check_weierstrass_shapes(wd);
    return wd.n2 * (r + 1) + rank(detail::fast_stack(wd, r));
}

// Order-r impulse observability in canonical coordinates without forming any
// big block matrix: the stack rank must reach rank(N).
inline bool fast_rank_condition(const WeierstrassData& wd, std::size_t r) {
    detail::check_weierstrass_shapes(wd);
    return rank(detail::fast_stack(wd, r)) == rank(wd.N);
}

namespace detail {

// Product of elementary row operations with small multipliers: always
// invertible, determinant +-1, bounded entry growth.
inline RationalMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    RationalMatrix t = RationalMatrix::identity(n);
    if (n < 2) {
        if (n == 1 && rng() % 2 == 1)
            t(0, 0) = -1;
        return t;
    }
    for (std::size_t step = 0; step < 3 * n; ++step) {
        const std::size_t op = static_cast<std::size_t>(rng() % 3);
        const std::size_t i = static_cast<std::size_t>(rng() % n);
        const std::size_t j = static_cast<std::size_t>(rng() % n);
        if (op == 0 && i != j) {
            const long k = static_cast<long>(rng() % 5) - 2;
            for (std::size_t c = 0; c < n; ++c)
                t(j, c) += Rational(k) * t(i, c);
        } else if (op == 1 && i != j) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(t(i, c), t(j, c));
        } else if (op == 2) {
            for (std::size_t c = 0; c < n; ++c)
                t(i, c) = -t(i, c);
        }
    }
    return t;
}

inline long bounded_draw(std::mt19937_64& rng, long bound) {
    if (bound <= 0)
        return 0;
    return static_cast<long>(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
}

} // namespace detail

// Deterministic generator: same seed and shape always produce the same data
// (mt19937_64 plus modulo draws, no distribution objects). N is strictly
// upper triangular, so nilpotency holds by construction; T and S are
// unimodular.
inline WeierstrassData random_canonical(std::uint64_t seed, std::size_t n1, std::size_t n2,
                                        std::size_t m, long entry_bound) {
    if (n1 + n2 == 0)
        throw invalid_argument("random_canonical: n1 + n2 must be positive");
    if (entry_bound < 0)
        throw invalid_argument("random_canonical: negative entry bound");
    std::mt19937_64 rng(seed);
    WeierstrassData wd;
    wd.n1 = n1;
    wd.n2 = n2;
    wd.m = m;
    wd.A1 = RationalMatrix(n1, n1);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j)
            wd.A1(i, j) = detail::bounded_draw(rng, entry_bound);
    wd.N = RationalMatrix(n2, n2);
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t j = i + 1; j < n2; ++j)
            wd.N(i, j) = detail::bounded_draw(rng, entry_bound);
    wd.C1 = RationalMatrix(m, n1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n1; ++j)
            wd.C1(i, j) = detail::bounded_draw(rng, entry_bound);
    wd.C2 = RationalMatrix(m, n2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            wd.C2(i, j) = detail::bounded_draw(rng, entry_bound);
    wd.T = detail::random_unimodular(rng, n1 + n2);
    wd.S = detail::random_unimodular(rng, n1 + n2);
    wd.h = nilpotency_index(wd.N);
    return wd;
}

} // namespace impob
