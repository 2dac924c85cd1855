#include "ppinv/verify.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ppinv/mapping.hpp"

namespace ppinv {

namespace {

// Forward map and companion evaluated through the log/antilog tables only:
// exponents are reduced modulo q^2 - 1 once per tuple so sweeps never touch
// big-integer arithmetic in the inner loops.
struct FastEval {
  const FieldCtx* F = nullptr;
  uint32_t m = 0;
  uint64_t delta = 0;
  std::vector<std::pair<uint64_t, uint64_t>> terms;  // (b encoding, reduced s)

  FastEval(const FieldCtx& ctx, uint32_t mm, const GSpec& g) : F(&ctx), m(mm) {
    delta = g.delta.enc;
    uint64_t order_minus_one = ctx.order() - 1;
    terms.reserve(g.terms.size());
    for (const GTerm& t : g.terms) {
      // x^s has period q^2 - 1 on nonzero inputs and keeping s >= 1
      // preserves 0 -> 0, so the reduction is exact on every element.
      BigInt red = (t.s - 1) % static_cast<unsigned long>(order_minus_one);
      terms.emplace_back(t.b.enc, red.get_ui() + 1);
    }
  }

  // g(w) = sum b_i (w + delta)^{s_i}
  uint64_t companion(uint64_t w) const {
    uint64_t u = F->add_enc(w, delta);
    uint64_t acc = 0;
    for (const auto& [b, s] : terms) acc = F->add_enc(acc, F->mul_enc(b, F->pow_enc(u, s)));
    return acc;
  }

  // P(x) = g(x^q + x) - x
  uint64_t forward(uint64_t x) const {
    return F->sub_enc(companion(F->add_enc(F->frob_enc(x, m), x)), x);
  }
};

// Reusable per-field scan buffers.  The epoch stamp makes clearing free
// between tuples, which matters when a sweep visits millions of them.
struct Scratch {
  std::vector<uint64_t> stamp, pre;
  uint64_t epoch = 0;

  void ensure(uint64_t n) {
    if (stamp.size() < n) {
      stamp.assign(n, 0);
      pre.assign(n, 0);
      epoch = 0;
    }
  }
};

bool not_false(const std::optional<bool>& v) { return !v.has_value() || *v; }

// One theorem verdict from the individual check outcomes.  A condition that
// does not hold makes a sufficient (or branch-selected) claim vacuously true;
// an equivalence is additionally falsified by an unexpected permutation.
bool combine_upheld(ConditionKind kind, TriState cond, bool perm,
                    const std::optional<bool>& inv, const std::optional<bool>& invol,
                    const std::optional<bool>& conj) {
  bool pointwise = not_false(inv) && not_false(invol) && not_false(conj);
  if (kind == ConditionKind::iff)
    return ((cond == TriState::yes) == perm) && pointwise;
  if (cond != TriState::yes) return true;
  return perm && pointwise;
}

ParamMap conjugate_params(const FieldCtx& F, uint32_t m, const GSpec& g) {
  uint64_t q = 1;
  for (uint32_t i = 0; i < m; ++i) q *= F.p();
  uint64_t order_minus_one = F.order() - 1;
  ParamMap params;
  uint32_t i = 0;
  for (const GTerm& term : g.terms) {
    ++i;
    BigInt red = (term.s * static_cast<unsigned long>(q) - 1) %
                     static_cast<unsigned long>(order_minus_one) +
                 1;
    params["b" + std::to_string(i)] = F.frob_enc(term.b.enc, m);
    params["s" + std::to_string(i)] = red.get_ui();
  }
  params["delta"] = g.delta.enc;
  return params;
}

VerificationReport verify_core(const std::string& family_id, const FieldRef& ctx,
                               uint32_t m, const ParamMap& params, Scratch& ws) {
  auto t0 = std::chrono::steady_clock::now();
  const FieldCtx& F = *ctx;
  const FamilyDescriptor& desc = lookup(family_id);
  Prepared prep = prepare(family_id, ctx, m, params);

  VerificationReport r;
  r.family_id = family_id;
  r.p = F.p();
  r.m = m;
  r.params = params;
  r.branch = prep.branch;
  r.condition_holds = prep.condition;

  uint64_t q2 = F.order();
  ws.ensure(q2);
  FastEval eval(F, m, prep.gspec);

  // Bijectivity scan with a collision witness.  On success the pre[] buffer
  // holds the full preimage table for this epoch, which the inverse check
  // reuses for its witness.
  uint64_t epoch = ++ws.epoch;
  r.is_permutation = true;
  for (uint64_t x = 0; x < q2; ++x) {
    uint64_t y = eval.forward(x);
    if (ws.stamp[y] == epoch) {
      r.is_permutation = false;
      r.counterexample = Counterexample{"collision", x, ws.pre[y], y};
      break;
    }
    ws.stamp[y] = epoch;
    ws.pre[y] = x;
  }

  bool closed_applies = r.is_permutation && prep.condition == TriState::yes &&
                        (prep.inverse_is_forward || prep.tau_inverse);

  if (closed_applies && prep.inverse_is_forward) {
    // The family claims P is its own inverse, so the closed-form check and
    // the self-composition check are the same scan.
    bool ok = true;
    for (uint64_t x = 0; x < q2; ++x) {
      uint64_t y = eval.forward(eval.forward(x));
      if (y != x) {
        ok = false;
        if (!r.counterexample) r.counterexample = Counterexample{"involution_mismatch", x, x, y};
        break;
      }
    }
    r.involution_holds = ok;
    r.inverse_matches_oracle = ok;
  } else if (closed_applies) {
    // With bijectivity established, P(candidate(y)) = y everywhere pins the
    // candidate to the unique inverse.
    bool ok = true;
    for (uint64_t y = 0; y < q2; ++y) {
      uint64_t w = F.add_enc(F.frob_enc(y, m), y);
      uint64_t x_hat = F.sub_enc(eval.companion(prep.tau_inverse(w)), y);
      if (eval.forward(x_hat) != y) {
        ok = false;
        if (!r.counterexample)
          r.counterexample = Counterexample{"inverse_mismatch", y, ws.pre[y], x_hat};
        break;
      }
    }
    r.inverse_matches_oracle = ok;
  }

  // The table-driven generic family also carries the conjugation claim: the
  // partner with b_i -> b_i^q, s_i -> q s_i shares its permutation verdict,
  // and the inverses differ by the field involution on the non-identity part.
  if (family_id == "F09" && closed_applies && !prep.inverse_is_forward) {
    Prepared conj = prepare("F09", ctx, m, conjugate_params(F, m, prep.gspec));
    FastEval conj_eval(F, m, conj.gspec);
    bool ok = conj.condition == TriState::yes && static_cast<bool>(conj.tau_inverse);
    if (ok) {
      for (const FieldElem& t : F.subfield_elements(m)) {
        uint64_t h1 = eval.companion(prep.tau_inverse(t.enc));
        uint64_t h2 = conj_eval.companion(conj.tau_inverse(t.enc));
        if (h2 != F.frob_enc(h1, m)) {
          ok = false;
          if (!r.counterexample)
            r.counterexample = Counterexample{"conjugate_mismatch", t.enc, F.frob_enc(h1, m), h2};
          break;
        }
      }
    }
    r.conjugate_transport = ok;
  }

  r.theorem_upheld =
      combine_upheld(desc.condition_kind, prep.condition, r.is_permutation,
                     r.inverse_matches_oracle, r.involution_holds, r.conjugate_transport);
  if (!r.theorem_upheld && !r.counterexample)
    r.counterexample = Counterexample{"unexpected_permutation", 0, 0, 0};

  r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
  return r;
}

void check_plan_frame(const FamilyDescriptor& desc, uint64_t p, uint32_t m) {
  if (desc.char_requirement == 1) {
    if (p == 2) throw std::invalid_argument("plan rejected: family requires odd characteristic");
  } else if (desc.char_requirement > 1 && p != desc.char_requirement) {
    throw std::invalid_argument("plan rejected: family requires characteristic " +
                                std::to_string(desc.char_requirement));
  }
  if (m < desc.min_m)
    throw std::invalid_argument("plan rejected: family requires m >= " +
                                std::to_string(desc.min_m));
}

}  // namespace

VerificationReport verify_params(const std::string& family_id, const FieldRef& ctx,
                                 uint32_t m, const ParamMap& params) {
  Scratch ws;
  return verify_core(family_id, ctx, m, params, ws);
}

VerificationReport verify_instance(const PPInstance& inst) {
  auto t0 = std::chrono::steady_clock::now();
  const FieldCtx& F = *inst.ctx;
  const FamilyDescriptor& desc = lookup(inst.family_id);

  VerificationReport r;
  r.family_id = inst.family_id;
  r.p = F.p();
  r.m = inst.m;
  r.params = inst.params;
  r.branch = inst.branch;
  r.condition_holds = inst.condition_holds;

  uint64_t q2 = F.order();
  std::vector<uint64_t> pre(q2, q2);  // q2 marks "unseen"
  r.is_permutation = true;
  for (uint64_t x = 0; x < q2 && r.is_permutation; ++x) {
    uint64_t y = inst.forward.image[x];
    if (pre[y] != q2) {
      r.is_permutation = false;
      r.counterexample = Counterexample{"collision", x, pre[y], y};
    } else {
      pre[y] = x;
    }
  }

  if (r.is_permutation && inst.inverse_closed) {
    const Mapping& closed = *inst.inverse_closed;
    bool ok = true;
    for (uint64_t y = 0; y < q2; ++y) {
      if (closed.image[y] != pre[y]) {
        ok = false;
        if (!r.counterexample)
          r.counterexample = Counterexample{"inverse_mismatch", y, pre[y], closed.image[y]};
        break;
      }
    }
    r.inverse_matches_oracle = ok;

    if (inst.involution_claimed) {
      bool invol = true;
      for (uint64_t x = 0; x < q2; ++x) {
        uint64_t y = inst.forward.image[inst.forward.image[x]];
        if (y != x) {
          invol = false;
          if (!r.counterexample) r.counterexample = Counterexample{"involution_mismatch", x, x, y};
          break;
        }
      }
      r.involution_holds = invol;
    }

    if (inst.family_id == "F09") {
      PPInstance partner = conjugate_pair(inst);
      bool ok2 = partner.inverse_closed.has_value();
      if (ok2) {
        const Mapping& closed2 = *partner.inverse_closed;
        for (uint64_t x = 0; x < q2; ++x) {
          uint64_t h1 = F.add_enc(closed.image[x], x);
          uint64_t h2 = F.add_enc(closed2.image[x], x);
          if (h2 != F.frob_enc(h1, inst.m)) {
            ok2 = false;
            if (!r.counterexample)
              r.counterexample = Counterexample{"conjugate_mismatch", x, F.frob_enc(h1, inst.m), h2};
            break;
          }
        }
      }
      r.conjugate_transport = ok2;
    }
  }

  r.theorem_upheld =
      combine_upheld(desc.condition_kind, inst.condition_holds, r.is_permutation,
                     r.inverse_matches_oracle, r.involution_holds, r.conjugate_transport);
  if (!r.theorem_upheld && !r.counterexample)
    r.counterexample = Counterexample{"unexpected_permutation", 0, 0, 0};

  r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
  return r;
}

IffReport check_iff(const std::string& family_id, const FieldRef& ctx, uint32_t m,
                    const std::vector<ParamMap>& enumeration) {
  const FamilyDescriptor& desc = lookup(family_id);
  IffReport rep;
  rep.family_id = family_id;
  rep.p = ctx->p();
  rep.m = m;

  const FieldCtx& F = *ctx;
  Scratch ws;
  ws.ensure(F.order());
  uint64_t q2 = F.order();

  for (const ParamMap& params : enumeration) {
    Prepared prep = prepare(family_id, ctx, m, params);
    FastEval eval(F, m, prep.gspec);
    uint64_t epoch = ++ws.epoch;
    bool perm = true;
    for (uint64_t x = 0; x < q2; ++x) {
      uint64_t y = eval.forward(x);
      if (ws.stamp[y] == epoch) {
        perm = false;
        break;
      }
      ws.stamp[y] = epoch;
    }
    ++rep.checked;
    bool cond = prep.condition == TriState::yes;
    if (cond) ++rep.condition_true;
    bool violated = desc.condition_kind == ConditionKind::iff ? cond != perm : (cond && !perm);
    if (violated) {
      ++rep.violations;
      if (rep.violating_tuples.size() < 8) rep.violating_tuples.push_back(params);
    }
  }
  return rep;
}

uint64_t sweep_draw(uint64_t seed, const std::string& family_id, uint64_t p, uint32_t m,
                    uint64_t index) {
  auto mix = [](uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  uint64_t h = mix(seed ^ 0x937fad21b2c4e01dull);
  for (unsigned char c : family_id) h = mix(h ^ c);
  h = mix(h ^ p);
  h = mix(h ^ m);
  h = mix(h ^ index);
  return h;
}

std::vector<VerificationReport> run_sweep(const SweepPlan& plan) {
  const FamilyDescriptor& desc = lookup(plan.family_id);
  if (!plan.axes_override.empty() && plan.fields.size() != 1)
    throw std::invalid_argument("plan rejected: an axis override requires exactly one field");

  std::vector<std::pair<uint64_t, uint32_t>> fields = plan.fields;
  std::stable_sort(fields.begin(), fields.end());

  std::vector<VerificationReport> out;
  Scratch ws;
  for (const auto& [p, m] : fields) {
    check_plan_frame(desc, p, m);
    FieldRef ctx = mk_field(p, 2 * m);  // the order cap rejects oversized fields here
    uint64_t q2 = ctx->order();

    std::vector<ParamAxis> axes =
        plan.axes_override.empty() ? default_axes(plan.family_id, ctx, m) : plan.axes_override;
    uint64_t space = axes_size(axes);
    if (space == 0) continue;

    bool fits_budget = space <= kSweepEvalBudget / q2;
    bool exhaustive = false;
    switch (plan.strategy) {
      case SweepStrategy::automatic:
        exhaustive = fits_budget;
        break;
      case SweepStrategy::exhaustive:
        if (!fits_budget)
          throw std::invalid_argument(
              "plan rejected: exhaustive sweep of " + std::to_string(space) +
              " tuples over an order-" + std::to_string(q2) +
              " field exceeds the evaluation budget");
        exhaustive = true;
        break;
      case SweepStrategy::sampled:
        break;
    }

    if (exhaustive) {
      for (uint64_t i = 0; i < space; ++i)
        out.push_back(verify_core(plan.family_id, ctx, m, axes_tuple(axes, i), ws));
    } else {
      uint64_t target = std::min(plan.sample_count, space);
      // Distinct draws from the keyed counter stream, kept in ascending grid
      // order so sampled reports line up with their exhaustive positions.
      std::set<uint64_t> picked;
      uint64_t limit = 64 * std::max<uint64_t>(target, 1) + 1024;
      for (uint64_t draw = 0; picked.size() < target && draw < limit; ++draw)
        picked.insert(sweep_draw(plan.sample_seed, plan.family_id, p, m, draw) % space);
      for (uint64_t i : picked)
        out.push_back(verify_core(plan.family_id, ctx, m, axes_tuple(axes, i), ws));
    }
  }
  return out;
}

bool all_upheld(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const VerificationReport& r) { return r.theorem_upheld; });
}

namespace {

nlohmann::ordered_json tri_to_json(TriState t) {
  switch (t) {
    case TriState::yes: return true;
    case TriState::no: return false;
    default: return nullptr;
  }
}

nlohmann::ordered_json opt_to_json(const std::optional<bool>& v) {
  if (!v.has_value()) return nullptr;
  return *v;
}

}  // namespace

nlohmann::ordered_json report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["family"] = r.family_id;
  j["p"] = r.p;
  j["m"] = r.m;
  nlohmann::ordered_json pj = nlohmann::ordered_json::object();
  for (const auto& [name, value] : r.params) pj[name] = value;
  j["params"] = pj;
  j["branch"] = r.branch;
  j["condition"] = tri_to_json(r.condition_holds);
  j["permutation"] = r.is_permutation;
  j["inverse_matches_oracle"] = opt_to_json(r.inverse_matches_oracle);
  j["involution_holds"] = opt_to_json(r.involution_holds);
  j["conjugate_transport"] = opt_to_json(r.conjugate_transport);
  j["theorem_upheld"] = r.theorem_upheld;
  if (r.counterexample) {
    nlohmann::ordered_json c;
    c["kind"] = r.counterexample->kind;
    c["x"] = r.counterexample->x;
    c["expected"] = r.counterexample->expected;
    c["actual"] = r.counterexample->actual;
    j["counterexample"] = c;
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const VerificationReport& r : reports) arr.push_back(report_to_json(r));
  return arr.dump(2) + "\n";
}

namespace {

std::string tri_to_csv(TriState t) {
  switch (t) {
    case TriState::yes: return "true";
    case TriState::no: return "false";
    default: return "";
  }
}

std::string opt_to_csv(const std::optional<bool>& v) {
  if (!v.has_value()) return "";
  return *v ? "true" : "false";
}

}  // namespace

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::string out =
      "family,p,m,params,branch,condition,permutation,inverse_matches_oracle,"
      "involution_holds,conjugate_transport,theorem_upheld,counterexample_kind,"
      "counterexample_x,counterexample_expected,counterexample_actual\n";
  for (const VerificationReport& r : reports) {
    std::string params;
    for (const auto& [name, value] : r.params) {
      if (!params.empty()) params += ';';
      params += name + "=" + std::to_string(value);
    }
    out += r.family_id + ',' + std::to_string(r.p) + ',' + std::to_string(r.m) + ',' + params +
           ',' + r.branch + ',' + tri_to_csv(r.condition_holds) + ',' +
           (r.is_permutation ? "true" : "false") + ',' + opt_to_csv(r.inverse_matches_oracle) +
           ',' + opt_to_csv(r.involution_holds) + ',' + opt_to_csv(r.conjugate_transport) + ',' +
           (r.theorem_upheld ? "true" : "false") + ',';
    if (r.counterexample) {
      out += r.counterexample->kind + ',' + std::to_string(r.counterexample->x) + ',' +
             std::to_string(r.counterexample->expected) + ',' +
             std::to_string(r.counterexample->actual);
    } else {
      out += ",,,";
    }
    out += '\n';
  }
  return out;
}

}  // namespace ppinv
