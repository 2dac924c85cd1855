#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ppinv {

// Exact unbounded integer, used for exponents that outgrow machine words.
using BigInt = mpz_class;

// Element of a finite field: base-p digit vector packed little-endian into an
// integer (enc = c0 + c1*p + ... + c_{n-1}*p^{n-1}), tagged with the id of the
// owning context.  Mixing elements of different contexts is an error.
struct FieldElem {
    uint64_t enc = 0;
    uint32_t ctx_id = 0;

    friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

// Monic irreducible polynomial of degree n over GF(p) whose coefficient vector
// (c0..c_{n-1}), read as a base-p integer, is minimal among all monic
// irreducibles of that degree.  Returned as c0..cn with cn = 1.  Deterministic.
std::vector<uint32_t> find_irreducible(uint64_t p, uint32_t n);

// Upper bound on constructible field orders.  Defaults to 2^20; the
// environment variable PPINV_ORDER_CAP overrides it (clamped to 2^22, the
// point past which the log/antilog tables stop being desk-sized).
uint64_t order_cap();

// Arithmetic context for GF(p^n) on a fixed polynomial basis.  Construction
// finds the canonical modulus and the smallest primitive element, then builds
// log/antilog tables keyed to that primitive; all multiplicative operations
// run on the tables.  Immutable after construction, safe to share across
// threads.
class FieldCtx {
  public:
    // Canonical modulus from find_irreducible.
    FieldCtx(uint64_t p, uint32_t n);
    // Explicit modulus c0..cn; must be monic irreducible of degree n.
    FieldCtx(uint64_t p, uint32_t n, const std::vector<uint32_t>& modulus);

    FieldCtx(const FieldCtx&) = delete;
    FieldCtx& operator=(const FieldCtx&) = delete;

    uint64_t p() const { return p_; }
    uint32_t n() const { return n_; }
    uint64_t order() const { return order_; }
    uint32_t id() const { return id_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }
    FieldElem primitive() const { return {primitive_, id_}; }

    FieldElem elem(uint64_t enc) const {
        if (enc >= order_) throw std::invalid_argument("field element encoding out of range");
        return {enc, id_};
    }
    FieldElem zero() const { return {0, id_}; }
    FieldElem one() const { return {1, id_}; }

    FieldElem add(FieldElem a, FieldElem b) const { check(a); check(b); return {add_enc(a.enc, b.enc), id_}; }
    FieldElem sub(FieldElem a, FieldElem b) const { check(a); check(b); return {sub_enc(a.enc, b.enc), id_}; }
    FieldElem neg(FieldElem a) const { check(a); return {neg_enc(a.enc), id_}; }
    FieldElem mul(FieldElem a, FieldElem b) const { check(a); check(b); return {mul_enc(a.enc, b.enc), id_}; }
    FieldElem inv(FieldElem a) const { check(a); return {inv_enc(a.enc), id_}; }

    // a^e with e reduced mod p^n-1 for nonzero a.  0^0 = 1, 0^e = 0 for e > 0;
    // a negative exponent requires a nonzero base.
    FieldElem pow_big(FieldElem a, const BigInt& e) const;
    FieldElem pow_u64(FieldElem a, uint64_t e) const { check(a); return {pow_enc(a.enc, e), id_}; }

    // a^(p^k), the k-fold characteristic-power map.
    FieldElem frobenius(FieldElem a, uint32_t k) const { check(a); return {frob_enc(a.enc, k), id_}; }

    // a + a^q with q = p^m; requires n = 2m.  The result lies in the
    // q-element subfield.
    FieldElem trace_rel(FieldElem a, uint32_t m) const;

    // Product of the p^d-power conjugates of a; requires d | n.  The result
    // lies in the p^d-element subfield.
    FieldElem norm_rel(FieldElem a, uint32_t d) const;

    // The p^m elements fixed by x -> x^(p^m), ascending by encoding;
    // requires n = 2m.
    const std::vector<FieldElem>& subfield_elements(uint32_t m) const;

    // Membership in the p^d-element subfield (d | n): a^(p^d) = a.
    bool in_subfield_deg(FieldElem a, uint32_t d) const {
        check(a);
        return frob_enc(a.enc, d) == a.enc;
    }

    // {p, n, modulus, primitive} descriptor document.
    std::string descriptor_json() const;

    // Unchecked encoding-level operations; the fast path for table loops.
    uint64_t add_enc(uint64_t a, uint64_t b) const {
        if (p_ == 2) return a ^ b;
        uint64_t r = 0, place = 1;
        while (a | b) {
            uint64_t d = a % p_ + b % p_;
            if (d >= p_) d -= p_;
            r += d * place;
            place *= p_;
            a /= p_;
            b /= p_;
        }
        return r;
    }
    uint64_t neg_enc(uint64_t a) const {
        if (p_ == 2) return a;
        uint64_t r = 0, place = 1;
        while (a) {
            uint64_t d = a % p_;
            if (d) d = p_ - d;
            r += d * place;
            place *= p_;
            a /= p_;
        }
        return r;
    }
    uint64_t sub_enc(uint64_t a, uint64_t b) const { return add_enc(a, neg_enc(b)); }
    uint64_t mul_enc(uint64_t a, uint64_t b) const {
        if (a == 0 || b == 0) return 0;
        return alog_[log_[a] + log_[b]];
    }
    uint64_t inv_enc(uint64_t a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        uint64_t g = order_ - 1;
        return alog_[(g - log_[a]) % g];
    }
    uint64_t pow_enc(uint64_t a, uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        uint64_t g = order_ - 1;
        return alog_[log_[a] * (e % g) % g];
    }
    uint64_t frob_enc(uint64_t a, uint32_t k) const {
        if (a == 0) return 0;
        return alog_[log_[a] * ppow_mod_[k % n_] % (order_ - 1)];
    }

  private:
    void init(const std::vector<uint32_t>* modulus_override);
    void check(FieldElem a) const {
        if (a.ctx_id != id_) throw std::invalid_argument("element belongs to a different field context");
        if (a.enc >= order_) throw std::invalid_argument("corrupt field element encoding");
    }

    uint64_t p_ = 0;
    uint32_t n_ = 0;
    uint64_t order_ = 0;
    uint32_t id_ = 0;
    uint64_t primitive_ = 0;
    std::vector<uint32_t> modulus_;
    std::vector<uint32_t> log_;       // log_[enc], enc >= 1
    std::vector<uint32_t> alog_;      // alog_[i] = enc(eps^i), doubled to skip a reduction in mul
    std::vector<uint64_t> ppow_mod_;  // p^k mod (order-1) for k in [0, n)
    std::vector<FieldElem> subfield_; // fixed points of x -> x^(p^(n/2)), when n is even
};

using FieldRef = std::shared_ptr<const FieldCtx>;

FieldRef mk_field(uint64_t p, uint32_t n);
FieldRef mk_field(uint64_t p, uint32_t n, const std::vector<uint32_t>& modulus);

}  // namespace ppinv
