#pragma once

#include <functional>
#include <vector>

#include "ppinv/field.hpp"

namespace ppinv {

// Exhaustive value table of a function on a (sub)field.  domain holds the
// input encodings in strictly ascending order; image[i] = f(domain[i]).
struct Mapping {
    uint32_t ctx_id = 0;
    std::vector<uint64_t> domain;
    std::vector<uint64_t> image;

    friend bool operator==(const Mapping&, const Mapping&) = default;
};

// Shifted power sum g(x) = sum_i b_i * (x + delta)^{s_i}.  The exponents are
// exact integers, at least 1.
struct GTerm {
    FieldElem b;
    BigInt s;
};
struct GSpec {
    std::vector<GTerm> terms;
    FieldElem delta;
};

void validate_gspec(const FieldCtx& ctx, const GSpec& g);

std::vector<FieldElem> full_domain(const FieldCtx& ctx);

Mapping tabulate(const FieldCtx& ctx, const std::function<FieldElem(FieldElem)>& f,
                 const std::vector<FieldElem>& domain);

// True iff the table is a bijection of its domain set onto itself.
bool is_permutation(const Mapping& M);

// Table inverse; requires is_permutation.
Mapping invert_table(const Mapping& M);

// x -> M1(M2(x)); the mappings must share context and domain.
Mapping compose(const Mapping& M1, const Mapping& M2);

bool is_identity(const Mapping& M);

// Value of the table at one point; the encoding must be in the domain.
uint64_t apply(const Mapping& M, uint64_t enc);

FieldElem eval_g(const FieldCtx& ctx, const GSpec& g, FieldElem x);

// Table of P(x) = sum_i b_i (x^q + x + delta)^{s_i} - x over all of GF(q^2),
// q = p^m; requires context degree 2m.
Mapping build_P(const FieldCtx& ctx, const GSpec& g, uint32_t m);

// Table of the subfield companion tau(x) = Tr_{q^2/q}(g(x)) - x over the
// q-element subfield.  P permutes GF(q^2) exactly when tau permutes the
// subfield.
Mapping build_tau(const FieldCtx& ctx, const GSpec& g, uint32_t m);

// Table of P^{-1}(x) = g(tauinv(Tr_{q^2/q}(x))) - x over GF(q^2), where
// tauinv is the table inverse of build_tau.  Independent of any per-family
// closed form, so it serves as the oracle those are compared against.
// Throws if tau (equivalently P) is not a permutation.
Mapping inverse_via_tau(const FieldCtx& ctx, const GSpec& g, uint32_t m);

std::string mapping_to_json(const FieldCtx& ctx, const Mapping& M);

}  // namespace ppinv
