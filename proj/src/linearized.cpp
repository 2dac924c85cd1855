#include "ppinv/linearized.hpp"

#include <numeric>

namespace ppinv {

namespace {

void check_subfield_param(const FieldCtx& ctx, FieldElem v, uint32_t deg, const char* what) {
    if (v.ctx_id != ctx.id() || v.enc >= ctx.order())
        throw std::invalid_argument(std::string(what) + " does not belong to the context");
    if (!ctx.in_subfield_deg(v, deg))
        throw std::invalid_argument(std::string(what) + " lies outside the working subfield");
}

}  // namespace

SSequence s_sequence(const FieldCtx& ctx, FieldElem a, FieldElem b, uint32_t M) {
    if (ctx.p() != 2) throw std::invalid_argument("companion sequence requires characteristic 2");
    SSequence s;
    s.a = a;
    s.b = b;
    s.M = M;
    s.values.resize(size_t(M) + 2);
    s.values[0] = ctx.zero();  // S_{-1}
    s.values[1] = ctx.one();   // S_0
    FieldElem ap = a, bp = b;
    for (uint32_t i = 1; i <= M; ++i) {
        // at step i the multipliers are b^(2^{i-1}) and a^(2^{i-1})
        s.values[i + 1] = ctx.add(ctx.mul(bp, s.values[i]), ctx.mul(ap, s.values[i - 1]));
        ap = ctx.mul(ap, ap);
        bp = ctx.mul(bp, bp);
    }
    return s;
}

FieldElem eval_linearized(const FieldCtx& ctx, const LinearizedPoly& L, FieldElem x) {
    if (L.ctx_id != ctx.id()) throw std::invalid_argument("polynomial belongs to a different field context");
    FieldElem acc = ctx.zero();
    for (const auto& t : L.terms) acc = ctx.add(acc, ctx.mul(t.c, ctx.pow_big(x, t.e)));
    return acc;
}

bool quartic_is_perm(const FieldCtx& ctx, FieldElem a, FieldElem b, uint32_t m) {
    if (ctx.p() != 2) throw std::invalid_argument("quartic family requires characteristic 2");
    if (m < 2) throw std::invalid_argument("quartic family requires working degree m > 1");
    if (ctx.n() % m != 0) throw std::invalid_argument("working subfield does not embed in the context");
    check_subfield_param(ctx, a, m, "linear coefficient");
    check_subfield_param(ctx, b, m, "quadratic coefficient");
    if (a.enc == 0)
        throw std::invalid_argument("zero linear coefficient is outside the supported family");
    auto s = s_sequence(ctx, a, b, m);
    return ctx.add(s.at(m), ctx.mul(a, ctx.mul(s.at(m - 2), s.at(m - 2)))) == ctx.one();
}

LinearizedPoly quartic_inverse(const FieldCtx& ctx, FieldElem a, FieldElem b, uint32_t m) {
    if (!quartic_is_perm(ctx, a, b, m))
        throw std::domain_error("quartic is not a permutation; no inverse");
    auto s = s_sequence(ctx, a, b, m);
    LinearizedPoly L;
    L.ctx_id = ctx.id();
    BigInt e(1);  // 2^i
    for (uint32_t i = 0; i < m; ++i) {
        BigInt e2 = 2 * e;  // 2^{i+1}
        FieldElem c = ctx.add(ctx.pow_big(s.at(int32_t(m) - 2 - int32_t(i)), e2),
                              ctx.mul(ctx.pow_big(a, 1 - e2), s.at(int32_t(i))));
        L.terms.push_back({c, e});
        e = e2;
    }
    return L;
}

namespace {

// Splits q as p^s inside ctx and validates the q^M working subfield.
uint32_t binomial_subfield_deg(const FieldCtx& ctx, uint64_t q, uint32_t M) {
    uint64_t v = q;
    uint32_t s = 0;
    while (v > 1 && v % ctx.p() == 0) {
        v /= ctx.p();
        ++s;
    }
    if (v != 1 || s == 0)
        throw std::invalid_argument("base order must be a positive power of the characteristic");
    if (M == 0 || uint64_t(s) * M > ctx.n() || ctx.n() % (s * M) != 0)
        throw std::invalid_argument("working subfield does not embed in the context");
    return s * M;
}

}  // namespace

bool binomial_is_perm(const FieldCtx& ctx, FieldElem a, uint64_t q, uint32_t r, uint32_t M) {
    uint32_t deg = binomial_subfield_deg(ctx, q, M);
    check_subfield_param(ctx, a, deg, "coefficient");
    if (a.enc == 0)
        throw std::invalid_argument("zero coefficient is outside the supported family");
    if (r < 1 || r > M) throw std::invalid_argument("shift exponent out of range");
    uint32_t d = std::gcd(M, r);
    // norm of a from the q^M-element field down to the q^d-element field
    BigInt qM = BigInt(q);
    mpz_pow_ui(qM.get_mpz_t(), qM.get_mpz_t(), M);
    BigInt qd = BigInt(q);
    mpz_pow_ui(qd.get_mpz_t(), qd.get_mpz_t(), d);
    BigInt e = (qM - 1) / (qd - 1);
    return ctx.pow_big(a, e) != ctx.one();
}

LinearizedPoly binomial_inverse(const FieldCtx& ctx, FieldElem a, uint64_t q, uint32_t r, uint32_t M) {
    if (!binomial_is_perm(ctx, a, q, r, M))
        throw std::domain_error("binomial is not a permutation; no inverse");
    uint32_t d = std::gcd(M, r);
    BigInt qM = BigInt(q);
    mpz_pow_ui(qM.get_mpz_t(), qM.get_mpz_t(), M);
    BigInt qd = BigInt(q);
    mpz_pow_ui(qd.get_mpz_t(), qd.get_mpz_t(), d);
    FieldElem N = ctx.pow_big(a, (qM - 1) / (qd - 1));
    FieldElem pref = ctx.mul(N, ctx.inv(ctx.sub(ctx.one(), N)));

    BigInt qr = BigInt(q);
    mpz_pow_ui(qr.get_mpz_t(), qr.get_mpz_t(), r);
    LinearizedPoly L;
    L.ctx_id = ctx.id();
    for (uint32_t i = 0; i < M / d; ++i) {
        BigInt num = BigInt(q);
        mpz_pow_ui(num.get_mpz_t(), num.get_mpz_t(), uint64_t(i + 1) * r);
        num -= 1;
        BigInt den = qr - 1;
        BigInt quo, rem;
        mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (rem != 0) throw std::logic_error("geometric-sum exponent failed to divide exactly");
        FieldElem c = ctx.mul(pref, ctx.pow_big(a, -quo));
        // x-exponent q^(ir), reduced by q^M = identity on the working subfield
        BigInt xe = BigInt(q);
        mpz_pow_ui(xe.get_mpz_t(), xe.get_mpz_t(), (uint64_t(i) * r) % M);
        L.terms.push_back({c, xe});
    }
    return L;
}

}  // namespace ppinv
