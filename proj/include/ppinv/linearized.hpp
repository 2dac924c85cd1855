#pragma once

#include "ppinv/field.hpp"
#include "ppinv/mapping.hpp"

namespace ppinv {

// The characteristic-2 companion sequence S_{-1} = 0, S_0 = 1,
// S_i = b^(2^{i-1}) S_{i-1} + a^(2^{i-1}) S_{i-2}.
struct SSequence {
    std::vector<FieldElem> values;  // values[i+1] = S_i, so indices -1..M
    FieldElem a, b;
    uint32_t M = 0;

    FieldElem at(int32_t i) const {
        if (i < -1 || i > int32_t(M)) throw std::out_of_range("sequence index");
        return values[size_t(i + 1)];
    }
};

// Additive polynomial sum_i c_i x^(e_i) with prime-power exponents.
struct LinTerm {
    FieldElem c;
    BigInt e;
};
struct LinearizedPoly {
    uint32_t ctx_id = 0;
    std::vector<LinTerm> terms;
};

SSequence s_sequence(const FieldCtx& ctx, FieldElem a, FieldElem b, uint32_t M);

FieldElem eval_linearized(const FieldCtx& ctx, const LinearizedPoly& L, FieldElem x);

// Quartic family L(x) = x^4 + b x^2 + a x on the 2^m-element subfield of ctx
// (ctx degree must be a multiple of m; a, b must lie in that subfield).
// Requires m > 1 and a != 0: at a = 0 the sequence criterion misreports
// (a, b) = (0, 1) on GF(4) and the inverse coefficients divide by a.
bool quartic_is_perm(const FieldCtx& ctx, FieldElem a, FieldElem b, uint32_t m);

// Inverse coefficients sum_{i<m} (S_{m-2-i}^(2^{i+1}) + a^(1-2^{i+1}) S_i) x^(2^i);
// requires quartic_is_perm.
LinearizedPoly quartic_inverse(const FieldCtx& ctx, FieldElem a, FieldElem b, uint32_t m);

// Binomial family L(x) = x^(q^r) - a x on the q^M-element subfield of ctx
// (q a power of the characteristic; the subfield must embed; a nonzero in it;
// 1 <= r <= M).  Permutes iff the norm of a into the q^gcd(M,r)-element field
// differs from 1.
bool binomial_is_perm(const FieldCtx& ctx, FieldElem a, uint64_t q, uint32_t r, uint32_t M);

// Inverse N/(1-N) * sum_{i<M/d} a^(-(q^((i+1)r)-1)/(q^r-1)) x^(q^(ir mod M));
// requires binomial_is_perm.
LinearizedPoly binomial_inverse(const FieldCtx& ctx, FieldElem a, uint64_t q, uint32_t r, uint32_t M);

}  // namespace ppinv
