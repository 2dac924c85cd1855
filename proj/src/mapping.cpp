#include "ppinv/mapping.hpp"

#include <algorithm>

#include <json.hpp>

namespace ppinv {

namespace {

// Index of enc in the sorted domain, or SIZE_MAX if absent.  Contiguous
// full-field domains resolve without searching.
size_t domain_index(const std::vector<uint64_t>& domain, uint64_t enc) {
    if (domain.back() + 1 == domain.size()) {
        // domain is exactly 0..N-1
        return enc < domain.size() ? size_t(enc) : SIZE_MAX;
    }
    auto it = std::lower_bound(domain.begin(), domain.end(), enc);
    if (it == domain.end() || *it != enc) return SIZE_MAX;
    return size_t(it - domain.begin());
}

// Per-term exponents reduced into the log domain.  A base of 0 keeps value 0
// because every exponent is at least 1.
struct ReducedTerm {
    uint64_t b_enc;
    uint64_t s_red;
};

std::vector<ReducedTerm> reduce_terms(const FieldCtx& ctx, const GSpec& g) {
    uint64_t grp = ctx.order() - 1;
    std::vector<ReducedTerm> r;
    r.reserve(g.terms.size());
    for (const auto& t : g.terms)
        r.push_back({t.b.enc, mpz_fdiv_ui(t.s.get_mpz_t(), grp)});
    return r;
}

uint64_t eval_terms(const FieldCtx& ctx, const std::vector<ReducedTerm>& terms, uint64_t u) {
    uint64_t acc = 0;
    for (const auto& t : terms) {
        if (t.b_enc == 0 || u == 0) continue;
        acc = ctx.add_enc(acc, ctx.mul_enc(t.b_enc, ctx.pow_enc(u, t.s_red)));
    }
    return acc;
}

}  // namespace

void validate_gspec(const FieldCtx& ctx, const GSpec& g) {
    if (g.terms.empty()) throw std::invalid_argument("power sum needs at least one term");
    if (g.delta.ctx_id != ctx.id() || g.delta.enc >= ctx.order())
        throw std::invalid_argument("shift does not belong to the context");
    for (const auto& t : g.terms) {
        if (t.b.ctx_id != ctx.id() || t.b.enc >= ctx.order())
            throw std::invalid_argument("coefficient does not belong to the context");
        if (t.s < 1) throw std::invalid_argument("exponents must be at least 1");
    }
}

std::vector<FieldElem> full_domain(const FieldCtx& ctx) {
    std::vector<FieldElem> r;
    r.reserve(ctx.order());
    for (uint64_t e = 0; e < ctx.order(); ++e) r.push_back({e, ctx.id()});
    return r;
}

Mapping tabulate(const FieldCtx& ctx, const std::function<FieldElem(FieldElem)>& f,
                 const std::vector<FieldElem>& domain) {
    Mapping M;
    M.ctx_id = ctx.id();
    M.domain.reserve(domain.size());
    M.image.reserve(domain.size());
    uint64_t prev = 0;
    bool first = true;
    for (const auto& x : domain) {
        if (x.ctx_id != ctx.id() || x.enc >= ctx.order())
            throw std::invalid_argument("domain entry does not belong to the context");
        if (!first && x.enc <= prev)
            throw std::invalid_argument("domain must be strictly ascending");
        first = false;
        prev = x.enc;
        FieldElem y = f(x);
        if (y.ctx_id != ctx.id() || y.enc >= ctx.order())
            throw std::invalid_argument("image entry does not belong to the context");
        M.domain.push_back(x.enc);
        M.image.push_back(y.enc);
    }
    return M;
}

bool is_permutation(const Mapping& M) {
    if (M.domain.empty()) return true;
    std::vector<bool> seen(M.domain.size(), false);
    for (uint64_t y : M.image) {
        size_t idx = domain_index(M.domain, y);
        if (idx == SIZE_MAX || seen[idx]) return false;
        seen[idx] = true;
    }
    return true;
}

Mapping invert_table(const Mapping& M) {
    if (!is_permutation(M)) throw std::domain_error("cannot invert a non-bijective table");
    Mapping inv;
    inv.ctx_id = M.ctx_id;
    inv.domain = M.domain;
    inv.image.assign(M.domain.size(), 0);
    for (size_t i = 0; i < M.domain.size(); ++i)
        inv.image[domain_index(M.domain, M.image[i])] = M.domain[i];
    return inv;
}

Mapping compose(const Mapping& M1, const Mapping& M2) {
    if (M1.ctx_id != M2.ctx_id || M1.domain != M2.domain)
        throw std::invalid_argument("composition needs a shared context and domain");
    Mapping r;
    r.ctx_id = M1.ctx_id;
    r.domain = M1.domain;
    r.image.reserve(M1.domain.size());
    for (uint64_t y : M2.image) {
        size_t idx = domain_index(M1.domain, y);
        if (idx == SIZE_MAX)
            throw std::invalid_argument("inner image leaves the outer domain");
        r.image.push_back(M1.image[idx]);
    }
    return r;
}

bool is_identity(const Mapping& M) { return M.image == M.domain; }

uint64_t apply(const Mapping& M, uint64_t enc) {
    if (M.domain.empty()) throw std::invalid_argument("encoding outside the table domain");
    size_t idx = domain_index(M.domain, enc);
    if (idx == SIZE_MAX) throw std::invalid_argument("encoding outside the table domain");
    return M.image[idx];
}

FieldElem eval_g(const FieldCtx& ctx, const GSpec& g, FieldElem x) {
    validate_gspec(ctx, g);
    if (x.ctx_id != ctx.id()) throw std::invalid_argument("element belongs to a different field context");
    auto terms = reduce_terms(ctx, g);
    uint64_t u = ctx.add_enc(x.enc, g.delta.enc);
    return {eval_terms(ctx, terms, u), ctx.id()};
}

Mapping build_P(const FieldCtx& ctx, const GSpec& g, uint32_t m) {
    if (m == 0 || ctx.n() != 2 * m)
        throw std::invalid_argument("forward map requires context degree 2m");
    validate_gspec(ctx, g);
    auto terms = reduce_terms(ctx, g);
    Mapping M;
    M.ctx_id = ctx.id();
    M.domain.resize(ctx.order());
    M.image.resize(ctx.order());
    for (uint64_t x = 0; x < ctx.order(); ++x) {
        uint64_t u = ctx.add_enc(ctx.add_enc(ctx.frob_enc(x, m), x), g.delta.enc);
        M.domain[x] = x;
        M.image[x] = ctx.sub_enc(eval_terms(ctx, terms, u), x);
    }
    return M;
}

Mapping build_tau(const FieldCtx& ctx, const GSpec& g, uint32_t m) {
    if (m == 0 || ctx.n() != 2 * m)
        throw std::invalid_argument("subfield companion requires context degree 2m");
    validate_gspec(ctx, g);
    auto terms = reduce_terms(ctx, g);
    const auto& sub = ctx.subfield_elements(m);
    Mapping M;
    M.ctx_id = ctx.id();
    M.domain.reserve(sub.size());
    M.image.reserve(sub.size());
    for (const auto& x : sub) {
        uint64_t gx = eval_terms(ctx, terms, ctx.add_enc(x.enc, g.delta.enc));
        uint64_t y = ctx.sub_enc(ctx.add_enc(gx, ctx.frob_enc(gx, m)), x.enc);
        M.domain.push_back(x.enc);
        M.image.push_back(y);
    }
    return M;
}

Mapping inverse_via_tau(const FieldCtx& ctx, const GSpec& g, uint32_t m) {
    Mapping tau = build_tau(ctx, g, m);
    if (!is_permutation(tau))
        throw std::domain_error("subfield companion is not bijective; the forward map does not permute the field");
    Mapping tau_inv = invert_table(tau);
    // dense subfield lookup keyed by encoding
    std::vector<uint64_t> lut(ctx.order(), 0);
    for (size_t i = 0; i < tau_inv.domain.size(); ++i) lut[tau_inv.domain[i]] = tau_inv.image[i];
    auto terms = reduce_terms(ctx, g);
    Mapping M;
    M.ctx_id = ctx.id();
    M.domain.resize(ctx.order());
    M.image.resize(ctx.order());
    for (uint64_t x = 0; x < ctx.order(); ++x) {
        uint64_t tr = ctx.add_enc(x, ctx.frob_enc(x, m));
        uint64_t u = lut[tr];
        uint64_t gx = eval_terms(ctx, terms, ctx.add_enc(u, g.delta.enc));
        M.domain[x] = x;
        M.image[x] = ctx.sub_enc(gx, x);
    }
    return M;
}

std::string mapping_to_json(const FieldCtx& ctx, const Mapping& M) {
    if (M.ctx_id != ctx.id()) throw std::invalid_argument("mapping belongs to a different field context");
    nlohmann::ordered_json j;
    j["ctx"] = nlohmann::ordered_json::parse(ctx.descriptor_json());
    j["domain"] = M.domain;
    j["image"] = M.image;
    return j.dump();
}

}  // namespace ppinv
