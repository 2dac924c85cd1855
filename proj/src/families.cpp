#include "ppinv/families.hpp"

#include <json.hpp>

#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "ppinv/linearized.hpp"

namespace ppinv {

std::string to_string(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    default: return "not_applicable";
  }
}

std::string to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::iff: return "iff";
    case ConditionKind::sufficient: return "sufficient";
    default: return "case_split";
  }
}

namespace {

[[noreturn]] void bad_param(const std::string& msg) {
  throw std::invalid_argument("parameter error: " + msg);
}

// Reads and validates named parameters; any binding left unread when finish()
// runs names a parameter the family does not declare.
class ParamReader {
 public:
  ParamReader(const FieldCtx& F, uint32_t m, const ParamMap& params)
      : F_(F), m_(m), params_(params) {}

  bool has(const std::string& name) const { return params_.count(name) != 0; }

  uint64_t integer(const std::string& name, uint64_t lo, uint64_t hi) {
    uint64_t v = raw(name);
    if (v < lo || v > hi) {
      bad_param(name + "=" + std::to_string(v) + " outside [" + std::to_string(lo) +
                ", " + std::to_string(hi) + "]");
    }
    return v;
  }

  uint64_t odd_integer(const std::string& name, uint64_t lo, uint64_t hi) {
    uint64_t v = integer(name, lo, hi);
    if (v % 2 == 0) bad_param(name + " must be odd");
    return v;
  }

  uint64_t element(const std::string& name) {
    uint64_t v = raw(name);
    if (v >= F_.order()) {
      bad_param(name + "=" + std::to_string(v) + " is not an encoding in the field");
    }
    return v;
  }

  uint64_t element_nonzero(const std::string& name) {
    uint64_t v = element(name);
    if (v == 0) bad_param(name + " must be nonzero");
    return v;
  }

  uint64_t subfield(const std::string& name) {
    uint64_t v = element(name);
    if (F_.frob_enc(v, m_) != v) {
      bad_param(name + "=" + std::to_string(v) + " lies outside the degree-" +
                std::to_string(m_) + " subfield");
    }
    return v;
  }

  uint64_t subfield_nonzero(const std::string& name) {
    uint64_t v = subfield(name);
    if (v == 0) bad_param(name + " must be nonzero");
    return v;
  }

  uint64_t outside_subfield(const std::string& name) {
    uint64_t v = element(name);
    if (F_.frob_enc(v, m_) == v) {
      bad_param(name + "=" + std::to_string(v) + " must lie outside the degree-" +
                std::to_string(m_) + " subfield");
    }
    return v;
  }

  // Number of b1.., b2.. blocks present (contiguous from 1).
  uint32_t block_count() const {
    uint32_t k = 0;
    while (params_.count("b" + std::to_string(k + 1)) != 0) ++k;
    if (k == 0) bad_param("at least one coefficient b1 is required");
    return k;
  }

  void finish() const {
    for (const auto& [name, value] : params_) {
      (void)value;
      if (used_.count(name) == 0) bad_param("unknown parameter '" + name + "'");
    }
  }

 private:
  uint64_t raw(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) bad_param("missing parameter '" + name + "'");
    used_.insert(name);
    return it->second;
  }

  const FieldCtx& F_;
  uint32_t m_;
  const ParamMap& params_;
  std::set<std::string> used_;
};

uint64_t subfield_order(const FieldCtx& F, uint32_t m) {
  uint64_t q = 1;
  for (uint32_t i = 0; i < m; ++i) q *= F.p();
  return q;
}

uint64_t trace_enc(const FieldCtx& F, uint32_t m, uint64_t x) {
  return F.add_enc(F.frob_enc(x, m), x);
}

// tau(x) = A x^{p^j} - B x + C over the degree-m subfield, with j already
// reduced mod m. Decides bijectivity and, when bijective, yields the inverse
// as a point evaluator: linear when j = 0, an affine flip when A = 0, a
// Frobenius shift when B = 0, and the norm-condition linearized sum otherwise.
struct TauBranch {
  TriState condition = TriState::no;
  std::string branch;
  std::function<uint64_t(uint64_t)> tau_inverse;
};

TauBranch affine_tau_branches(const FieldRef& ctx, uint32_t m, uint32_t j, uint64_t A,
                              uint64_t B, uint64_t C) {
  const FieldCtx& F = *ctx;
  TauBranch out;
  if (j == 0) {
    out.branch = "linear";
    uint64_t slope = F.sub_enc(A, B);
    if (slope == 0) return out;
    uint64_t si = F.inv_enc(slope);
    uint64_t c0 = F.mul_enc(si, C);
    out.condition = TriState::yes;
    out.tau_inverse = [ctx, si, c0](uint64_t z) {
      return ctx->sub_enc(ctx->mul_enc(si, z), c0);
    };
    return out;
  }
  if (A == 0 && B == 0) {
    out.branch = "degenerate";
    return out;
  }
  if (A == 0) {
    out.branch = "additive";
    out.condition = TriState::yes;
    uint64_t bi = F.inv_enc(B);
    uint64_t c0 = F.mul_enc(bi, C);
    out.tau_inverse = [ctx, bi, c0](uint64_t z) {
      return ctx->sub_enc(c0, ctx->mul_enc(bi, z));
    };
    return out;
  }
  if (B == 0) {
    out.branch = "frobenius";
    out.condition = TriState::yes;
    uint64_t ai = F.inv_enc(A);
    uint32_t shift = m - j;
    out.tau_inverse = [ctx, ai, C, shift](uint64_t z) {
      return ctx->frob_enc(ctx->mul_enc(ai, ctx->sub_enc(z, C)), shift);
    };
    return out;
  }
  out.branch = "norm";
  uint64_t ratio = F.mul_enc(B, F.inv_enc(A));
  if (!binomial_is_perm(F, F.elem(ratio), F.p(), j, m)) return out;
  out.condition = TriState::yes;
  LinearizedPoly lp = binomial_inverse(F, F.elem(ratio), F.p(), j, m);
  uint64_t ai = F.inv_enc(A);
  out.tau_inverse = [ctx, lp, ai, C](uint64_t z) {
    uint64_t w = ctx->mul_enc(ai, ctx->sub_enc(z, C));
    return eval_linearized(*ctx, lp, ctx->elem(w)).enc;
  };
  return out;
}

// --- per-family preparation -------------------------------------------------

Prepared prep_involution(const FieldRef& ctx, uint32_t m, const ParamMap& params,
                         bool delta_in_subfield) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint32_t k = rd.block_count();
  Prepared pr;
  pr.gspec.delta = F.elem(delta_in_subfield ? rd.subfield_nonzero("delta")
                                            : rd.element("delta"));
  for (uint32_t i = 1; i <= k; ++i) {
    uint64_t b = rd.subfield_nonzero("b" + std::to_string(i));
    uint64_t s = rd.integer("s" + std::to_string(i), 1, 2 * F.order());
    if (!delta_in_subfield && s % (q + 1) != 0) {
      bad_param("s" + std::to_string(i) + " must be a multiple of q+1 = " +
                std::to_string(q + 1));
    }
    pr.gspec.terms.push_back({F.elem(b), BigInt(static_cast<unsigned long>(s))});
  }
  rd.finish();
  pr.condition = TriState::yes;
  pr.involution_claimed = true;
  pr.inverse_is_forward = true;
  return pr;
}

// Shared by the two families whose companion inverse is T^{-1} z^2 + d^{q+1} T^{-1}
// for T = Tr(delta); they differ only in exponent and condition.
std::function<uint64_t(uint64_t)> square_companion(const FieldRef& ctx, uint64_t trd,
                                                   uint64_t dq1) {
  const FieldCtx& F = *ctx;
  uint64_t ti = F.inv_enc(trd);
  uint64_t c0 = F.mul_enc(dq1, ti);
  return [ctx, ti, c0](uint64_t z) {
    return ctx->add_enc(ctx->mul_enc(ti, ctx->mul_enc(z, z)), c0);
  };
}

Prepared prep_F02_F03(const FieldRef& ctx, uint32_t m, const ParamMap& params,
                      bool quarter_exponent) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint64_t b = rd.subfield_nonzero("b");
  uint64_t delta = rd.element("delta");
  rd.finish();
  uint64_t s = quarter_exponent ? q * (2 * q + 3) / 4 : (q * q + q) / 2 + 1;
  Prepared pr;
  pr.gspec.delta = F.elem(delta);
  pr.gspec.terms.push_back({F.elem(b), BigInt(static_cast<unsigned long>(s))});
  uint64_t trd = trace_enc(F, m, delta);
  uint64_t gate = quarter_exponent ? F.mul_enc(F.pow_enc(b, 4), trd) : F.mul_enc(b, trd);
  pr.condition = gate == F.one().enc ? TriState::yes : TriState::no;
  if (pr.condition == TriState::yes) {
    pr.tau_inverse = square_companion(ctx, trd, F.pow_enc(delta, q + 1));
  }
  return pr;
}

Prepared prep_F04(const FieldRef& ctx, uint32_t m, const ParamMap& params) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint64_t b = rd.element_nonzero("b");
  uint64_t delta = rd.element("delta");
  rd.finish();
  uint64_t s = q * (q + 1) / 2;
  Prepared pr;
  pr.gspec.delta = F.elem(delta);
  pr.gspec.terms.push_back({F.elem(b), BigInt(static_cast<unsigned long>(s))});
  uint64_t trb = trace_enc(F, m, b);
  uint64_t trd = trace_enc(F, m, delta);
  if (trb == F.one().enc && trd != 0) {
    // Here the companion squares to Tr(delta) w + delta^{q+1}; with
    // Tr(delta) = 0 it would be constant and the map cannot permute, so that
    // corner carries no formula.
    pr.branch = "trace_one";
    pr.condition = TriState::yes;
    pr.tau_inverse = square_companion(ctx, trd, F.pow_enc(delta, q + 1));
  } else if (trb != F.one().enc &&
             (F.frob_enc(b, m) == b || F.frob_enc(delta, m) == delta)) {
    pr.branch = "subfield";
    pr.condition = TriState::yes;
    // Tr(b) != 1 here, so the denominator Tr(b)+1 cannot vanish in char 2.
    uint64_t den = F.inv_enc(F.add_enc(trb, F.one().enc));
    uint64_t c0 = F.mul_enc(F.mul_enc(F.pow_enc(delta, (q + 1) * q / 2), trb), den);
    auto Fp = ctx;
    pr.tau_inverse = [Fp, den, c0](uint64_t z) {
      return Fp->add_enc(Fp->mul_enc(den, z), c0);
    };
  } else {
    pr.branch = "none";
    pr.condition = TriState::not_applicable;
  }
  return pr;
}

Prepared prep_F05_F06(const FieldRef& ctx, uint32_t m, const ParamMap& params,
                      bool with_shift) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint64_t b = rd.subfield_nonzero("b");
  uint64_t delta = rd.element("delta");
  uint64_t e = with_shift ? rd.integer("e", 0, 2 * m - 1) : 0;
  rd.finish();
  uint64_t pe = 1ull << e;
  uint64_t s = with_shift ? pe + q + 1 : q + 2;
  Prepared pr;
  pr.gspec.delta = F.elem(delta);
  pr.gspec.terms.push_back({F.elem(b), BigInt(static_cast<unsigned long>(s))});
  uint64_t trd = trace_enc(F, m, delta);
  uint64_t gate = F.mul_enc(b, F.pow_enc(trd, with_shift ? pe + 1 : 2));
  pr.condition = gate == F.one().enc ? TriState::yes : TriState::no;
  if (pr.condition == TriState::yes) {
    uint64_t dq1 = F.pow_enc(delta, q + 1);
    uint64_t half = q / 2;
    pr.tau_inverse = [ctx, trd, dq1, half](uint64_t z) {
      return ctx->pow_enc(ctx->add_enc(ctx->mul_enc(trd, z), dq1), half);
    };
  }
  return pr;
}

Prepared prep_F07(const FieldRef& ctx, uint32_t m, const ParamMap& params) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint32_t k = rd.block_count();
  Prepared pr;
  pr.gspec.delta = F.elem(rd.element("delta"));
  uint64_t t = (q + 1) / 2;
  uint64_t eps = F.primitive().enc;
  for (uint32_t i = 1; i <= k; ++i) {
    uint64_t b = rd.subfield("b" + std::to_string(i));
    uint64_t l = rd.odd_integer("l" + std::to_string(i), 1, 4 * q);
    uint64_t s = rd.integer("s" + std::to_string(i), 1, F.order() - 2);
    uint64_t c = F.mul_enc(b, F.pow_enc(eps, t * l));
    pr.gspec.terms.push_back({F.elem(c), BigInt(static_cast<unsigned long>(s))});
    pr.gspec.terms.push_back(
        {F.elem(c), BigInt(static_cast<unsigned long>(q)) * static_cast<unsigned long>(s)});
  }
  rd.finish();
  pr.condition = TriState::yes;
  pr.tau_inverse = [ctx](uint64_t z) { return ctx->neg_enc(z); };
  return pr;
}

Prepared prep_F08(const FieldRef& ctx, uint32_t m, const ParamMap& params) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint32_t k = rd.block_count();
  Prepared pr;
  uint64_t delta = rd.subfield("delta");
  pr.gspec.delta = F.elem(delta);
  uint64_t total = 0;
  for (uint32_t i = 1; i <= k; ++i) {
    uint64_t b = rd.element("b" + std::to_string(i));
    uint64_t s = rd.integer("s" + std::to_string(i), 1, 2 * F.order());
    pr.gspec.terms.push_back(
        {F.elem(b), BigInt(static_cast<unsigned long>(s)) * static_cast<unsigned long>(q - 1) + 1});
    total = F.add_enc(total, trace_enc(F, m, b));
  }
  rd.finish();
  pr.condition = total != F.one().enc ? TriState::yes : TriState::no;
  if (pr.condition == TriState::yes) {
    // The companion is w -> w(T-1) + delta*T, so its inverse subtracts the
    // constant before dividing.
    uint64_t den = F.inv_enc(F.sub_enc(total, F.one().enc));
    uint64_t c0 = F.mul_enc(F.mul_enc(delta, total), den);
    pr.tau_inverse = [ctx, den, c0](uint64_t z) {
      return ctx->sub_enc(ctx->mul_enc(den, z), c0);
    };
  }
  return pr;
}

Prepared prep_F09(const FieldRef& ctx, uint32_t m, const ParamMap& params) {
  const FieldCtx& F = *ctx;
  ParamReader rd(F, m, params);
  uint32_t k = rd.block_count();
  Prepared pr;
  pr.gspec.delta = F.elem(rd.element("delta"));
  for (uint32_t i = 1; i <= k; ++i) {
    uint64_t b = rd.element("b" + std::to_string(i));
    uint64_t s = rd.integer("s" + std::to_string(i), 1, 2 * F.order());
    pr.gspec.terms.push_back({F.elem(b), BigInt(static_cast<unsigned long>(s))});
  }
  rd.finish();
  Mapping tau = build_tau(F, pr.gspec, m);
  pr.condition = is_permutation(tau) ? TriState::yes : TriState::no;
  if (pr.condition == TriState::yes) {
    auto lut = std::make_shared<std::unordered_map<uint64_t, uint64_t>>();
    lut->reserve(tau.domain.size());
    for (size_t i = 0; i < tau.domain.size(); ++i) {
      (*lut)[tau.image[i]] = tau.domain[i];
    }
    pr.tau_inverse = [lut](uint64_t z) { return lut->at(z); };
  }
  return pr;
}

// Families whose companion quartic is x^4 + C x^2 + D x, reached either
// directly (arg = z + B) or through a fourth-power substitution (arg = z^4 + B).
// `scale_by_D` multiplies the i-th inverse coefficient by D^{2^i}, matching the
// affine wrap A x + B with D = 1/A.
struct QuarticShape {
  uint64_t s = 0;       // forward exponent
  uint64_t B = 0;
  uint64_t C = 0;
  uint64_t D = 0;
  bool quartic_arg = false;  // arg of the inverse sum is z^4 + B instead of z + B
  bool scale_by_D = false;
};

Prepared prep_quartic_family(const FieldRef& ctx, uint32_t m, uint64_t b, uint64_t delta,
                             const QuarticShape& sh) {
  const FieldCtx& F = *ctx;
  Prepared pr;
  pr.gspec.delta = F.elem(delta);
  pr.gspec.terms.push_back({F.elem(b), BigInt(static_cast<unsigned long>(sh.s))});
  FieldElem a = F.elem(sh.D);
  FieldElem bb = F.elem(sh.C);
  pr.condition = quartic_is_perm(F, a, bb, m) ? TriState::yes : TriState::no;
  if (pr.condition != TriState::yes) return pr;
  LinearizedPoly lp = quartic_inverse(F, a, bb, m);
  if (sh.scale_by_D) {
    for (uint32_t i = 0; i < lp.terms.size(); ++i) {
      lp.terms[i].c = F.elem(F.mul_enc(lp.terms[i].c.enc, F.pow_enc(sh.D, 1ull << i)));
    }
  }
  uint64_t B = sh.B;
  bool quartic_arg = sh.quartic_arg;
  pr.tau_inverse = [ctx, lp, B, quartic_arg](uint64_t z) {
    uint64_t arg = quartic_arg ? ctx->add_enc(ctx->pow_enc(z, 4), B) : ctx->add_enc(z, B);
    return eval_linearized(*ctx, lp, ctx->elem(arg)).enc;
  };
  return pr;
}

Prepared prep_F10_to_F14(const FieldRef& ctx, uint32_t m, const ParamMap& params,
                         int which) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint64_t b = rd.subfield_nonzero("b");
  uint64_t delta = rd.outside_subfield("delta");
  uint64_t e = which == 13 ? rd.integer("e", 0, 2 * m - 1) : 0;
  rd.finish();
  uint64_t trd = trace_enc(F, m, delta);  // nonzero since delta is outside F_q
  uint64_t b4 = F.pow_enc(b, 4);
  uint64_t dq1 = F.pow_enc(delta, q + 1);
  QuarticShape sh;
  switch (which) {
    case 10:
      sh.s = 1 + (q * q + q) / 4;
      sh.C = F.mul_enc(b4, F.pow_enc(trd, 4));
      sh.D = F.mul_enc(b4, F.pow_enc(trd, 5));
      sh.B = F.mul_enc(sh.C, dq1);
      sh.quartic_arg = true;
      break;
    case 11:
      sh.s = q * (2 * q + 1) / 4;
      sh.C = F.mul_enc(b4, trd);
      sh.D = F.mul_enc(b4, F.mul_enc(trd, trd));
      sh.B = F.mul_enc(F.mul_enc(b4, dq1), trd);
      sh.quartic_arg = true;
      break;
    case 12: {
      sh.s = 2 * q + 3;
      uint64_t A = F.mul_enc(b, trd);
      sh.B = F.mul_enc(A, F.pow_enc(delta, 2 * q + 2));
      sh.C = F.mul_enc(trd, trd);
      sh.D = F.inv_enc(A);
      sh.scale_by_D = true;
      break;
    }
    case 13: {
      sh.s = 2 * q + (1ull << e) + 2;
      uint64_t A = F.mul_enc(b, F.pow_enc(trd, 1ull << e));
      sh.B = F.mul_enc(A, F.pow_enc(delta, 2 * q + 2));
      sh.C = F.mul_enc(trd, trd);
      sh.D = F.inv_enc(A);
      sh.scale_by_D = true;
      break;
    }
    default: {  // 14
      sh.s = 6;
      uint64_t A = F.mul_enc(b, F.mul_enc(trd, trd));
      sh.B = F.mul_enc(b, F.add_enc(F.pow_enc(delta, 6 * q), F.pow_enc(delta, 6)));
      sh.C = F.mul_enc(trd, trd);
      sh.D = F.inv_enc(A);
      sh.scale_by_D = true;
      break;
    }
  }
  return prep_quartic_family(ctx, m, b, delta, sh);
}

Prepared prep_F15(const FieldRef& ctx, uint32_t m, const ParamMap& params) {
  const FieldCtx& F = *ctx;
  uint64_t p = F.p();
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint64_t b1 = rd.subfield("b1");
  uint64_t b2 = rd.subfield("b2");
  uint64_t b3 = rd.subfield("b3");
  uint64_t d1 = rd.odd_integer("d1", 1, 4 * q);
  uint64_t d2 = rd.odd_integer("d2", 1, 4 * q);
  uint64_t d3 = rd.odd_integer("d3", 1, 4 * q);
  uint64_t e = rd.integer("e", 0, 2 * m - 1);
  uint64_t delta = rd.element("delta");
  rd.finish();
  uint64_t t = (q + 1) / 2;
  uint64_t eps = F.primitive().enc;
  uint64_t c1 = F.mul_enc(b1, F.pow_enc(eps, t * d1));
  uint64_t c2 = F.mul_enc(b2, F.pow_enc(eps, t * d2));
  uint64_t c3 = F.mul_enc(b3, F.pow_enc(eps, t * d3));
  uint64_t pe = 1;
  for (uint64_t i = 0; i < e; ++i) pe *= p;

  Prepared pr;
  pr.gspec.delta = F.elem(delta);
  pr.gspec.terms.push_back({F.elem(c1), BigInt(static_cast<unsigned long>(pe + q))});
  pr.gspec.terms.push_back({F.elem(c2), BigInt(static_cast<unsigned long>(pe + 1))});
  pr.gspec.terms.push_back({F.elem(c3), BigInt(static_cast<unsigned long>(2 * pe))});

  uint64_t dq = F.frob_enc(delta, m);
  uint64_t de = F.frob_enc(delta, static_cast<uint32_t>(e));
  uint64_t deq = F.frob_enc(delta, static_cast<uint32_t>(e) + m);
  uint64_t two = F.elem(2 % p).enc;
  uint64_t A = F.add_enc(F.mul_enc(F.sub_enc(dq, delta), F.sub_enc(c1, c2)),
                         F.mul_enc(two, F.mul_enc(c3, F.sub_enc(de, deq))));
  uint64_t B =
      F.sub_enc(F.one().enc, F.mul_enc(F.sub_enc(de, deq), F.add_enc(c1, c2)));
  uint64_t C = F.add_enc(
      F.add_enc(F.mul_enc(F.sub_enc(F.mul_enc(de, dq), F.mul_enc(deq, delta)), c1),
                F.mul_enc(F.sub_enc(F.mul_enc(de, delta), F.mul_enc(deq, dq)), c2)),
      F.mul_enc(F.sub_enc(F.mul_enc(de, de), F.mul_enc(deq, deq)), c3));

  TauBranch br = affine_tau_branches(ctx, m, static_cast<uint32_t>(e % m), A, B, C);
  pr.condition = br.condition;
  pr.branch = br.branch;
  pr.tau_inverse = std::move(br.tau_inverse);
  return pr;
}

Prepared prep_F16(const FieldRef& ctx, uint32_t m, const ParamMap& params) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint64_t b1 = rd.subfield("b1");
  uint64_t b2 = rd.subfield("b2");
  uint64_t b3 = rd.element("b3");
  uint64_t e = rd.integer("e", 0, 2 * m - 1);
  uint64_t delta = rd.element("delta");
  rd.finish();
  uint64_t pe = 1ull << e;

  Prepared pr;
  pr.gspec.delta = F.elem(delta);
  pr.gspec.terms.push_back({F.elem(b1), BigInt(static_cast<unsigned long>(pe + q))});
  pr.gspec.terms.push_back({F.elem(b2), BigInt(static_cast<unsigned long>(pe + 1))});
  pr.gspec.terms.push_back({F.elem(b3), BigInt(static_cast<unsigned long>(pe))});

  uint64_t dq = F.frob_enc(delta, m);
  uint64_t de = F.frob_enc(delta, static_cast<uint32_t>(e));
  uint64_t deq = F.frob_enc(delta, static_cast<uint32_t>(e) + m);
  uint64_t b12 = F.add_enc(b1, b2);
  uint64_t A = F.add_enc(F.mul_enc(F.add_enc(dq, delta), b12), trace_enc(F, m, b3));
  uint64_t B = F.add_enc(F.one().enc, F.mul_enc(F.add_enc(de, deq), b12));
  uint64_t C = F.add_enc(
      F.add_enc(F.mul_enc(b1, F.add_enc(F.mul_enc(deq, delta), F.mul_enc(de, dq))),
                F.mul_enc(b2, F.add_enc(F.mul_enc(deq, dq), F.mul_enc(de, delta)))),
      F.add_enc(F.mul_enc(F.frob_enc(b3, m), deq), F.mul_enc(b3, de)));

  TauBranch br = affine_tau_branches(ctx, m, static_cast<uint32_t>(e % m), A, B, C);
  pr.condition = br.condition;
  pr.branch = br.branch;
  pr.tau_inverse = std::move(br.tau_inverse);
  return pr;
}

Prepared prep_F17(const FieldRef& ctx, uint32_t m, const ParamMap& params) {
  const FieldCtx& F = *ctx;
  uint64_t q = subfield_order(F, m);
  ParamReader rd(F, m, params);
  uint64_t b = rd.subfield_nonzero("b");
  uint64_t delta = rd.element("delta");
  rd.finish();

  Prepared pr;
  pr.gspec.delta = F.elem(delta);
  pr.gspec.terms.push_back({F.elem(b), BigInt(static_cast<unsigned long>(q + 2))});

  uint64_t dq = F.frob_enc(delta, m);
  uint64_t A = F.neg_enc(b);
  uint64_t diff = F.sub_enc(dq, delta);
  uint64_t B = F.mul_enc(F.mul_enc(b, F.pow_enc(delta, q + 1)), F.add_enc(dq, delta));
  uint64_t C = F.sub_enc(F.mul_enc(diff, diff), F.inv_enc(b));

  // tau(x) = A x^3 - (A C) x + B, so the generic branch helper sees the
  // x-coefficient A*C and the constant B.
  TauBranch br = affine_tau_branches(ctx, m, 1 % m, A, F.mul_enc(A, C), B);
  pr.condition = br.condition;
  pr.branch = br.branch;
  pr.tau_inverse = std::move(br.tau_inverse);
  return pr;
}

void check_family_frame(const FamilyDescriptor& desc, const FieldCtx& F, uint32_t m) {
  if (m == 0 || F.n() != 2 * m) {
    bad_param("family " + desc.id + " needs a field of degree 2m, got n=" +
              std::to_string(F.n()) + " with m=" + std::to_string(m));
  }
  if (desc.char_requirement == 1) {
    if (F.p() == 2) bad_param("family " + desc.id + " requires odd characteristic");
  } else if (desc.char_requirement != 0 && F.p() != desc.char_requirement) {
    bad_param("family " + desc.id + " requires characteristic " +
              std::to_string(desc.char_requirement));
  }
  if (m < desc.min_m) {
    bad_param("family " + desc.id + " requires m >= " + std::to_string(desc.min_m));
  }
}

std::string base_id(const std::string& family_id) {
  if (family_id == "F01a" || family_id == "F01b") return "F01";
  return family_id;
}

}  // namespace

const std::vector<FamilyDescriptor>& catalog() {
  static const std::vector<FamilyDescriptor> entries = [] {
    std::vector<FamilyDescriptor> v;
    auto elem = [](const std::string& n, const std::string& d) {
      return ParamField{n, d, false};
    };
    auto block = [](const std::string& n, const std::string& d) {
      return ParamField{n, d, true};
    };
    v.push_back({"F01",
                 {"a", "b"},
                 "self-inverse maps: variant a takes subfield coefficients with "
                 "exponents divisible by q+1, variant b takes all data in the "
                 "subfield",
                 2,
                 1,
                 ConditionKind::sufficient,
                 {block("b<i>", "nonzero element of F_q"),
                  block("s<i>", "positive exponent; variant a: multiple of q+1"),
                  elem("delta", "element of F_{q^2}; variant b: nonzero element of F_q")}});
    v.push_back({"F02",
                 {},
                 "single term, exponent q(2q+3)/4, gate b^4 Tr(delta) = 1, "
                 "companion inverse affine in z^2",
                 2,
                 2,
                 ConditionKind::sufficient,
                 {elem("b", "nonzero element of F_q"), elem("delta", "element of F_{q^2}")}});
    v.push_back({"F03",
                 {},
                 "single term, exponent (q^2+q)/2+1, gate b Tr(delta) = 1",
                 2,
                 1,
                 ConditionKind::sufficient,
                 {elem("b", "nonzero element of F_q"), elem("delta", "element of F_{q^2}")}});
    v.push_back({"F04",
                 {},
                 "single term, exponent q(q+1)/2; inverse formula chosen by "
                 "branch: Tr(b) = 1 with Tr(delta) nonzero, or b or delta in "
                 "the subfield with Tr(b) away from 1",
                 2,
                 1,
                 ConditionKind::case_split,
                 {elem("b", "nonzero element of F_{q^2}"),
                  elem("delta", "element of F_{q^2}")}});
    v.push_back({"F05",
                 {},
                 "single term, exponent q+2, gate b Tr(delta)^2 = 1, companion "
                 "inverse via a half-power",
                 2,
                 1,
                 ConditionKind::sufficient,
                 {elem("b", "nonzero element of F_q"), elem("delta", "element of F_{q^2}")}});
    v.push_back({"F06",
                 {},
                 "single term, exponent 2^e+q+1, gate b Tr(delta)^{2^e+1} = 1",
                 2,
                 1,
                 ConditionKind::sufficient,
                 {elem("b", "nonzero element of F_q"), elem("delta", "element of F_{q^2}"),
                  elem("e", "integer in [0, 2m)")}});
    v.push_back({"F07",
                 {},
                 "odd characteristic, paired exponents s_i and q s_i with "
                 "twisted coefficients b_i eps^{t l_i}; always a permutation, "
                 "inverse mirrors the forward shape",
                 1,
                 1,
                 ConditionKind::sufficient,
                 {block("b<i>", "element of F_q"), block("l<i>", "odd positive integer"),
                  block("s<i>", "positive exponent"), elem("delta", "element of F_{q^2}")}});
    v.push_back({"F08",
                 {},
                 "exponents s_i(q-1)+1 with delta in the subfield; permutation "
                 "iff sum of Tr(b_i) differs from 1",
                 0,
                 1,
                 ConditionKind::iff,
                 {block("b<i>", "element of F_{q^2}"), block("s<i>", "positive integer"),
                  elem("delta", "element of F_q")}});
    v.push_back({"F09",
                 {},
                 "generic sums: permutation decided by the tabulated subfield "
                 "companion, inverse recovered from its table; conjugation "
                 "transport lives here",
                 0,
                 1,
                 ConditionKind::iff,
                 {block("b<i>", "element of F_{q^2}"), block("s<i>", "positive exponent"),
                  elem("delta", "element of F_{q^2}")}});
    auto quartic_schema = [&] {
      return std::vector<ParamField>{elem("b", "nonzero element of F_q"),
                                     elem("delta", "element of F_{q^2} outside F_q")};
    };
    v.push_back({"F10",
                 {},
                 "single term, exponent 1+(q^2+q)/4; companion reduces to a "
                 "quartic additive polynomial, inverse via its recurrence sum",
                 2,
                 2,
                 ConditionKind::iff,
                 quartic_schema()});
    v.push_back({"F11",
                 {},
                 "single term, exponent q(2q+1)/4; quartic companion with "
                 "trace-power constants",
                 2,
                 2,
                 ConditionKind::iff,
                 quartic_schema()});
    v.push_back({"F12",
                 {},
                 "single term, exponent 2q+3; quartic companion wrapped in an "
                 "affine scale, inverse coefficients carry D^{2^i}",
                 2,
                 2,
                 ConditionKind::iff,
                 quartic_schema()});
    {
      auto schema = quartic_schema();
      schema.push_back(elem("e", "integer in [0, 2m)"));
      v.push_back({"F13",
                   {},
                   "single term, exponent 2q+2^e+2; shifted variant of the "
                   "affine-wrapped quartic companion",
                   2,
                   2,
                   ConditionKind::iff,
                   std::move(schema)});
    }
    v.push_back({"F14",
                 {},
                 "single term, exponent 6; affine-wrapped quartic companion",
                 2,
                 2,
                 ConditionKind::iff,
                 quartic_schema()});
    v.push_back({"F15",
                 {},
                 "odd characteristic, three twisted terms with exponents p^e+q, "
                 "p^e+1, 2p^e; companion is A x^{p^j} - B x + C with four "
                 "branches (linear, additive, frobenius, norm)",
                 1,
                 1,
                 ConditionKind::iff,
                 {elem("b1", "element of F_q"), elem("b2", "element of F_q"),
                  elem("b3", "element of F_q"), elem("d1", "odd positive integer"),
                  elem("d2", "odd positive integer"), elem("d3", "odd positive integer"),
                  elem("e", "integer in [0, 2m)"), elem("delta", "element of F_{q^2}")}});
    v.push_back({"F16",
                 {},
                 "even characteristic, three terms with exponents 2^e+q, 2^e+1, "
                 "2^e and a free third coefficient; same four-branch companion",
                 2,
                 1,
                 ConditionKind::iff,
                 {elem("b1", "element of F_q"), elem("b2", "element of F_q"),
                  elem("b3", "element of F_{q^2}"), elem("e", "integer in [0, 2m)"),
                  elem("delta", "element of F_{q^2}")}});
    v.push_back({"F17",
                 {},
                 "characteristic three, single term with exponent q+2; companion "
                 "is a scaled additive cubic, permutation iff its drift constant "
                 "is zero or a non-square",
                 3,
                 1,
                 ConditionKind::iff,
                 {elem("b", "nonzero element of F_q"), elem("delta", "element of F_{q^2}")}});
    return v;
  }();
  return entries;
}

const FamilyDescriptor& lookup(const std::string& family_id) {
  const std::string base = base_id(family_id);
  for (const auto& d : catalog()) {
    if (d.id == base) {
      if (!d.variants.empty() && family_id == d.id) {
        bad_param("family " + d.id + " needs a variant suffix (" + d.id + "a / " +
                  d.id + "b)");
      }
      return d;
    }
  }
  bad_param("unknown family '" + family_id + "'");
}

Prepared prepare(const std::string& family_id, const FieldRef& ctx, uint32_t m,
                 const ParamMap& params) {
  if (!ctx) bad_param("null field context");
  const FamilyDescriptor& desc = lookup(family_id);
  check_family_frame(desc, *ctx, m);
  if (family_id == "F01a") return prep_involution(ctx, m, params, false);
  if (family_id == "F01b") return prep_involution(ctx, m, params, true);
  if (family_id == "F02") return prep_F02_F03(ctx, m, params, true);
  if (family_id == "F03") return prep_F02_F03(ctx, m, params, false);
  if (family_id == "F04") return prep_F04(ctx, m, params);
  if (family_id == "F05") return prep_F05_F06(ctx, m, params, false);
  if (family_id == "F06") return prep_F05_F06(ctx, m, params, true);
  if (family_id == "F07") return prep_F07(ctx, m, params);
  if (family_id == "F08") return prep_F08(ctx, m, params);
  if (family_id == "F09") return prep_F09(ctx, m, params);
  if (family_id == "F10") return prep_F10_to_F14(ctx, m, params, 10);
  if (family_id == "F11") return prep_F10_to_F14(ctx, m, params, 11);
  if (family_id == "F12") return prep_F10_to_F14(ctx, m, params, 12);
  if (family_id == "F13") return prep_F10_to_F14(ctx, m, params, 13);
  if (family_id == "F14") return prep_F10_to_F14(ctx, m, params, 14);
  if (family_id == "F15") return prep_F15(ctx, m, params);
  if (family_id == "F16") return prep_F16(ctx, m, params);
  if (family_id == "F17") return prep_F17(ctx, m, params);
  bad_param("family '" + family_id + "' has no preparation routine");
}

namespace {

Mapping tabulate_closed_inverse(const FieldCtx& F, const GSpec& g, uint32_t m,
                                const std::function<uint64_t(uint64_t)>& tau_inverse) {
  return tabulate(
      F,
      [&](FieldElem y) {
        uint64_t z = trace_enc(F, m, y.enc);
        uint64_t w = tau_inverse(z);
        return F.elem(F.sub_enc(eval_g(F, g, F.elem(w)).enc, y.enc));
      },
      full_domain(F));
}

}  // namespace

PPInstance instantiate(const std::string& family_id, const FieldRef& ctx, uint32_t m,
                       const ParamMap& params) {
  const FamilyDescriptor& desc = lookup(family_id);
  Prepared pr = prepare(family_id, ctx, m, params);
  PPInstance inst;
  inst.family_id = family_id;
  inst.ctx = ctx;
  inst.m = m;
  inst.params = params;
  inst.condition_holds = pr.condition;
  inst.branch = pr.branch;
  inst.gspec = pr.gspec;
  inst.involution_claimed = pr.involution_claimed;
  inst.forward = build_P(*ctx, pr.gspec, m);
  if (pr.inverse_is_forward) {
    inst.inverse_closed = inst.forward;
  } else if (pr.condition == TriState::yes && pr.tau_inverse) {
    bool attach = true;
    if (desc.condition_kind == ConditionKind::case_split) {
      attach = is_permutation(inst.forward);
    }
    if (attach) {
      inst.inverse_closed = tabulate_closed_inverse(*ctx, pr.gspec, m, pr.tau_inverse);
    }
  }
  return inst;
}

Mapping closed_form_inverse(const PPInstance& inst) {
  if (!inst.inverse_closed) {
    throw std::domain_error("instance of " + inst.family_id +
                            " carries no closed-form inverse for these parameters");
  }
  return *inst.inverse_closed;
}

NormalizedSpec normalize_general_a(const FieldRef& ctx, uint32_t m, FieldElem a,
                                   const GSpec& g) {
  const FieldCtx& F = *ctx;
  if (m == 0 || F.n() != 2 * m) bad_param("normalization needs a degree-2m field");
  uint64_t q = subfield_order(F, m);
  F.elem(a.enc);  // bounds check
  if (a.ctx_id != F.id()) bad_param("twist element belongs to another field");
  if (F.pow_enc(a.enc, q + 1) != F.one().enc) {
    bad_param("twist element must satisfy a^{q+1} = 1");
  }
  uint64_t eps = F.primitive().enc;
  uint64_t step = F.pow_enc(eps, q - 1);
  uint64_t t = 0;
  uint64_t cur = F.one().enc;
  while (cur != a.enc) {
    cur = F.mul_enc(cur, step);
    ++t;
    if (t > q) {
      throw std::logic_error("no twist index found for a norm-one element");
    }
  }
  NormalizedSpec out;
  out.epsilon = F.primitive();
  out.t = t;
  uint64_t qt = q * t;
  out.scale = F.elem(F.pow_enc(eps, qt));
  uint64_t scale_inv = F.inv_enc(out.scale.enc);
  out.spec.delta = F.elem(F.mul_enc(scale_inv, g.delta.enc));
  for (const GTerm& term : g.terms) {
    BigInt expo = BigInt(static_cast<unsigned long>(qt)) * (term.s - 1);
    FieldElem factor = F.pow_big(F.primitive(), expo);
    out.spec.terms.push_back({F.mul(term.b, factor), term.s});
  }
  return out;
}

Mapping tabulate_twisted(const FieldRef& ctx, uint32_t m, FieldElem a, const GSpec& g) {
  const FieldCtx& F = *ctx;
  validate_gspec(F, g);
  return tabulate(
      F,
      [&](FieldElem x) {
        uint64_t ax = F.mul_enc(a.enc, x.enc);
        uint64_t w = F.add_enc(F.frob_enc(x.enc, m), ax);
        return F.elem(F.sub_enc(eval_g(F, g, F.elem(w)).enc, ax));
      },
      full_domain(F));
}

PPInstance conjugate_pair(const PPInstance& inst) {
  const FieldCtx& F = *inst.ctx;
  uint64_t q = subfield_order(F, inst.m);
  uint64_t g = F.order() - 1;
  ParamMap params;
  uint32_t i = 0;
  for (const GTerm& term : inst.gspec.terms) {
    ++i;
    BigInt scaled = term.s * static_cast<unsigned long>(q);
    // Reduce to [1, q^2-1] so the exponent fits the parameter map without
    // changing the map (x^s has period q^2-1 on nonzero x and s stays >= 1).
    BigInt red = (scaled - 1) % static_cast<unsigned long>(g) + 1;
    params["b" + std::to_string(i)] = F.frob_enc(term.b.enc, inst.m);
    params["s" + std::to_string(i)] = red.get_ui();
  }
  params["delta"] = inst.gspec.delta.enc;
  return instantiate("F09", inst.ctx, inst.m, params);
}

nlohmann::ordered_json instance_to_json(const PPInstance& inst) {
  nlohmann::ordered_json j;
  j["family"] = inst.family_id;
  j["p"] = inst.ctx->p();
  j["m"] = inst.m;
  nlohmann::ordered_json pj = nlohmann::ordered_json::object();
  for (const auto& [name, value] : inst.params) pj[name] = value;
  j["params"] = pj;
  if (!inst.branch.empty()) j["branch"] = inst.branch;
  switch (inst.condition_holds) {
    case TriState::yes: j["condition"] = true; break;
    case TriState::no: j["condition"] = false; break;
    default: j["condition"] = nullptr; break;
  }
  j["permutation"] = is_permutation(inst.forward);
  return j;
}

uint64_t axes_size(const std::vector<ParamAxis>& axes) {
  uint64_t total = 1;
  for (const auto& ax : axes) total *= ax.values.size();
  return total;
}

ParamMap axes_tuple(const std::vector<ParamAxis>& axes, uint64_t index) {
  if (index >= axes_size(axes)) {
    throw std::out_of_range("tuple index beyond the grid");
  }
  ParamMap out;
  for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
    uint64_t n = it->values.size();
    out[it->name] = it->values[index % n];
    index /= n;
  }
  return out;
}

std::vector<ParamAxis> default_axes(const std::string& family_id, const FieldRef& ctx,
                                    uint32_t m) {
  const FieldCtx& F = *ctx;
  const FamilyDescriptor& desc = lookup(family_id);
  check_family_frame(desc, F, m);
  uint64_t q = subfield_order(F, m);
  auto subfield_all = [&] {
    std::vector<uint64_t> v;
    for (const FieldElem& x : F.subfield_elements(m)) v.push_back(x.enc);
    return v;
  };
  auto subfield_nonzero = [&] {
    std::vector<uint64_t> v = subfield_all();
    v.erase(v.begin());
    return v;
  };
  auto field_all = [&] {
    std::vector<uint64_t> v(F.order());
    std::iota(v.begin(), v.end(), 0);
    return v;
  };
  auto field_nonzero = [&] {
    std::vector<uint64_t> v = field_all();
    v.erase(v.begin());
    return v;
  };
  auto outside = [&] {
    std::vector<uint64_t> v;
    for (uint64_t x = 0; x < F.order(); ++x) {
      if (F.frob_enc(x, m) != x) v.push_back(x);
    }
    return v;
  };
  auto iota_range = [](uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> v;
    for (uint64_t x = lo; x <= hi; ++x) v.push_back(x);
    return v;
  };
  std::vector<ParamAxis> axes;
  if (family_id == "F01a") {
    axes = {{"b1", subfield_nonzero()},
            {"s1", {q + 1, 2 * (q + 1)}},
            {"delta", field_all()}};
  } else if (family_id == "F01b") {
    axes = {{"b1", subfield_nonzero()},
            {"s1", iota_range(1, q + 2)},
            {"delta", subfield_nonzero()}};
  } else if (family_id == "F02" || family_id == "F03" || family_id == "F05") {
    axes = {{"b", subfield_nonzero()}, {"delta", field_all()}};
  } else if (family_id == "F04") {
    axes = {{"b", field_nonzero()}, {"delta", field_all()}};
  } else if (family_id == "F06") {
    axes = {{"b", subfield_nonzero()}, {"delta", field_all()}, {"e", iota_range(0, 2 * m - 1)}};
  } else if (family_id == "F07") {
    axes = {{"b1", subfield_all()},
            {"l1", {1, 3}},
            {"s1", {1, 2, 3}},
            {"delta", field_all()}};
  } else if (family_id == "F08") {
    axes = {{"b1", field_all()}, {"s1", iota_range(1, 4)}, {"delta", subfield_all()}};
  } else if (family_id == "F09") {
    uint64_t smax = std::min<uint64_t>(6, F.order() - 2);
    axes = {{"b1", field_all()}, {"s1", iota_range(1, smax)}, {"delta", field_all()}};
  } else if (family_id == "F10" || family_id == "F11" || family_id == "F12" ||
             family_id == "F14") {
    axes = {{"b", subfield_nonzero()}, {"delta", outside()}};
  } else if (family_id == "F13") {
    axes = {{"b", subfield_nonzero()}, {"delta", outside()}, {"e", iota_range(0, 2 * m - 1)}};
  } else if (family_id == "F15") {
    axes = {{"b1", subfield_all()}, {"b2", subfield_all()}, {"b3", subfield_all()},
            {"d1", {1}},            {"d2", {1}},            {"d3", {1}},
            {"e", iota_range(0, 2 * m - 1)},                {"delta", field_all()}};
  } else if (family_id == "F16") {
    axes = {{"b1", subfield_all()},
            {"b2", subfield_all()},
            {"b3", field_all()},
            {"e", iota_range(0, 2 * m - 1)},
            {"delta", field_all()}};
  } else if (family_id == "F17") {
    axes = {{"b", subfield_nonzero()}, {"delta", field_all()}};
  } else {
    bad_param("family '" + family_id + "' has no default grid");
  }
  return axes;
}

}  // namespace ppinv
