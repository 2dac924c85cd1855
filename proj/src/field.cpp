#include "ppinv/field.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

#include <json.hpp>

namespace ppinv {

namespace {

// Dense coefficient vectors c0..cdeg over GF(p), trailing zeros stripped.
using Poly = std::vector<uint32_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

uint64_t mod_inverse(uint64_t a, uint64_t p) {
    // p prime; Fermat.
    uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + uint64_t(a[i]) * b[j]) % p;
    }
    return r;
}

// Remainder mod monic f.
Poly poly_mod(Poly a, const Poly& f, uint64_t p) {
    size_t df = f.size() - 1;
    while (a.size() > df) {
        uint64_t c = a.back();
        size_t shift = a.size() - 1 - df;
        if (c)
            for (size_t j = 0; j < df; ++j)
                a[shift + j] = (a[shift + j] + (p - c) * f[j]) % p;
        a.pop_back();
        trim(a);
    }
    return a;
}

Poly poly_powmod(const Poly& base, uint64_t e, const Poly& f, uint64_t p) {
    Poly r = {1};
    Poly b = poly_mod(base, f, p);
    while (e) {
        if (e & 1) r = poly_mod(poly_mul(r, b, p), f, p);
        b = poly_mod(poly_mul(b, b, p), f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        uint64_t lead_inv = mod_inverse(b.back(), p);
        Poly bm = b;
        for (auto& c : bm) c = uint32_t(c * lead_inv % p);
        a = poly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

Poly enc_to_poly(uint64_t enc, uint64_t p) {
    Poly r;
    while (enc) {
        r.push_back(uint32_t(enc % p));
        enc /= p;
    }
    return r;
}

uint64_t poly_to_enc(const Poly& a, uint64_t p) {
    uint64_t r = 0;
    for (size_t i = a.size(); i-- > 0;) r = r * p + a[i];
    return r;
}

bool is_prime_u64(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// f has an irreducible factor of degree d iff gcd(f, x^(p^d) - x) is
// nonconstant; monic f of degree n >= 2 is reducible iff that happens for
// some d <= n/2.
bool is_irreducible(const Poly& f, uint64_t p) {
    size_t n = f.size() - 1;
    if (n == 1) return true;
    Poly x = {0, 1};
    Poly xp = x;
    for (size_t d = 1; d <= n / 2; ++d) {
        xp = poly_powmod(xp, p, f, p);
        Poly t = xp;
        // t - x
        if (t.size() < 2) t.resize(2, 0);
        t[1] = uint32_t((t[1] + p - 1) % p);
        trim(t);
        Poly g = poly_gcd(f, t, p);
        if (g.size() > 1) return false;
    }
    return true;
}

std::vector<uint64_t> prime_factors(uint64_t x) {
    std::vector<uint64_t> r;
    for (uint64_t d = 2; d * d <= x; ++d) {
        if (x % d == 0) {
            r.push_back(d);
            while (x % d == 0) x /= d;
        }
    }
    if (x > 1) r.push_back(x);
    return r;
}

std::atomic<uint32_t> next_ctx_id{1};

}  // namespace

uint64_t order_cap() {
    constexpr uint64_t kDefault = uint64_t(1) << 20;
    constexpr uint64_t kHardMax = uint64_t(1) << 22;
    if (const char* env = std::getenv("PPINV_ORDER_CAP")) {
        char* end = nullptr;
        uint64_t v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v >= 2) return std::min(v, kHardMax);
    }
    return kDefault;
}

std::vector<uint32_t> find_irreducible(uint64_t p, uint32_t n) {
    if (!is_prime_u64(p)) throw std::invalid_argument("characteristic must be prime");
    if (n < 1) throw std::invalid_argument("extension degree must be at least 1");
    const uint64_t scan_limit = uint64_t(1) << 22;  // far beyond any real first hit
    uint64_t count = 1;
    for (uint32_t i = 0; i < n && count < scan_limit; ++i) count *= p;
    count = std::min(count, scan_limit);
    for (uint64_t enc = 0; enc < count; ++enc) {
        Poly f = enc_to_poly(enc, p);
        f.resize(n + 1, 0);
        f[n] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable: they exist for every (p, n)
}

FieldCtx::FieldCtx(uint64_t p, uint32_t n) : p_(p), n_(n) { init(nullptr); }

FieldCtx::FieldCtx(uint64_t p, uint32_t n, const std::vector<uint32_t>& modulus)
    : p_(p), n_(n) {
    init(&modulus);
}

void FieldCtx::init(const std::vector<uint32_t>* modulus_override) {
    if (!is_prime_u64(p_)) throw std::invalid_argument("characteristic must be prime");
    if (n_ < 1) throw std::invalid_argument("extension degree must be at least 1");

    uint64_t cap = order_cap();
    order_ = 1;
    for (uint32_t i = 0; i < n_; ++i) {
        if (order_ > cap / p_) throw std::invalid_argument("field order exceeds the configured cap");
        order_ *= p_;
    }
    if (order_ > cap) throw std::invalid_argument("field order exceeds the configured cap");

    if (modulus_override) {
        const auto& f = *modulus_override;
        if (f.size() != size_t(n_) + 1 || f.back() != 1)
            throw std::invalid_argument("modulus must be monic of the context degree");
        for (uint32_t c : f)
            if (c >= p_) throw std::invalid_argument("modulus coefficient out of range");
        if (!is_irreducible(f, p_))
            throw std::invalid_argument("modulus is reducible");
        modulus_ = f;
    } else {
        modulus_ = find_irreducible(p_, n_);
    }

    id_ = next_ctx_id.fetch_add(1);

    // Smallest encoding of full multiplicative order.
    uint64_t g = order_ - 1;
    auto factors = prime_factors(g);
    primitive_ = 0;
    for (uint64_t cand = 1; cand < order_; ++cand) {
        Poly c = enc_to_poly(cand, p_);
        bool ok = true;
        for (uint64_t f : factors) {
            Poly t = poly_powmod(c, g / f, modulus_, p_);
            if (t.size() == 1 && t[0] == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            primitive_ = cand;
            break;
        }
    }
    if (primitive_ == 0) throw std::logic_error("no primitive element found");

    // Discrete-log tables for the primitive.  alog_ is doubled so that
    // mul can index log sums without reducing.
    alog_.assign(2 * g, 0);
    log_.assign(order_, 0);
    Poly eps = enc_to_poly(primitive_, p_);
    Poly cur = {1};
    for (uint64_t i = 0; i < g; ++i) {
        uint64_t enc = poly_to_enc(cur, p_);
        alog_[i] = uint32_t(enc);
        alog_[i + g] = uint32_t(enc);
        log_[enc] = uint32_t(i);
        cur = poly_mod(poly_mul(cur, eps, p_), modulus_, p_);
    }
    if (!(cur.size() == 1 && cur[0] == 1))
        throw std::logic_error("primitive element order check failed");

    ppow_mod_.assign(n_, 0);
    uint64_t pm = 1 % g;
    for (uint32_t k = 0; k < n_; ++k) {
        ppow_mod_[k] = pm;
        pm = uint64_t((__uint128_t(pm) * p_) % g);
    }

    if (n_ % 2 == 0) {
        uint32_t m = n_ / 2;
        for (uint64_t enc = 0; enc < order_; ++enc)
            if (frob_enc(enc, m) == enc) subfield_.push_back({enc, id_});
    }
}

FieldElem FieldCtx::pow_big(FieldElem a, const BigInt& e) const {
    check(a);
    int sg = sgn(e);
    if (a.enc == 0) {
        if (sg < 0) throw std::domain_error("negative power of zero");
        return sg == 0 ? one() : zero();
    }
    uint64_t g = order_ - 1;
    uint64_t r = mpz_fdiv_ui(e.get_mpz_t(), g);
    return {alog_[log_[a.enc] * r % g], id_};
}

FieldElem FieldCtx::trace_rel(FieldElem a, uint32_t m) const {
    check(a);
    if (m == 0 || n_ != 2 * m)
        throw std::invalid_argument("relative trace requires context degree 2m");
    return {add_enc(a.enc, frob_enc(a.enc, m)), id_};
}

FieldElem FieldCtx::norm_rel(FieldElem a, uint32_t d) const {
    check(a);
    if (d == 0 || n_ % d != 0)
        throw std::invalid_argument("relative norm requires a divisor of the context degree");
    if (a.enc == 0) return zero();
    uint64_t pd = 1;
    for (uint32_t i = 0; i < d; ++i) pd *= p_;
    return pow_u64(a, (order_ - 1) / (pd - 1));
}

const std::vector<FieldElem>& FieldCtx::subfield_elements(uint32_t m) const {
    if (m == 0 || n_ != 2 * m)
        throw std::invalid_argument("subfield enumeration requires context degree 2m");
    return subfield_;
}

std::string FieldCtx::descriptor_json() const {
    nlohmann::ordered_json j;
    j["p"] = p_;
    j["n"] = n_;
    j["modulus"] = modulus_;
    j["primitive"] = primitive_;
    return j.dump();
}

FieldRef mk_field(uint64_t p, uint32_t n) { return std::make_shared<FieldCtx>(p, n); }

FieldRef mk_field(uint64_t p, uint32_t n, const std::vector<uint32_t>& modulus) {
    return std::make_shared<FieldCtx>(p, n, modulus);
}

}  // namespace ppinv
