// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Every equality is exact; there are no tolerances anywhere.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ppinv/families.hpp"
#include "ppinv/field.hpp"
#include "ppinv/linearized.hpp"
#include "ppinv/mapping.hpp"
#include "ppinv/verify.hpp"

using namespace ppinv;

namespace {

struct Result {
  bool pass = true;
  std::string note;
};

// Shared bookkeeping for exhaustive parameter-grid runs.
struct GridStats {
  uint64_t total = 0;
  uint64_t cond_yes = 0;
  uint64_t not_upheld = 0;
  std::map<std::string, uint64_t> yes_branches;
  std::string first_fail;

  void absorb(const VerificationReport& r) {
    ++total;
    if (r.condition_holds == TriState::yes) {
      ++cond_yes;
      ++yes_branches[r.branch];
    }
    if (!r.theorem_upheld) {
      ++not_upheld;
      if (first_fail.empty()) first_fail = report_to_json(r).dump();
    }
  }

  void merge(const GridStats& o) {
    total += o.total;
    cond_yes += o.cond_yes;
    not_upheld += o.not_upheld;
    for (const auto& [k, v] : o.yes_branches) yes_branches[k] += v;
    if (first_fail.empty()) first_fail = o.first_fail;
  }
};

// Verifies every tuple of an explicit axes grid (bypassing sweep budgeting,
// which exists to keep *plans* tractable -- here the enumerations are chosen
// by hand to fit the stated runtime bounds).
GridStats run_grid(const std::string& family, uint64_t p, uint32_t m,
                   const std::vector<ParamAxis>& axes) {
  FieldRef ctx = mk_field(p, 2 * m);
  GridStats st;
  uint64_t n = axes_size(axes);
  for (uint64_t i = 0; i < n; ++i) st.absorb(verify_params(family, ctx, m, axes_tuple(axes, i)));
  return st;
}

GridStats run_default_grid(const std::string& family, uint64_t p, uint32_t m) {
  FieldRef ctx = mk_field(p, 2 * m);
  return run_grid(family, p, m, default_axes(family, ctx, m));
}

GridStats run_sampled(const std::string& family, uint64_t p, uint32_t m, uint64_t count,
                      uint64_t seed) {
  SweepPlan plan;
  plan.family_id = family;
  plan.fields = {{p, m}};
  plan.strategy = SweepStrategy::sampled;
  plan.sample_count = count;
  plan.sample_seed = seed;
  GridStats st;
  for (const VerificationReport& r : run_sweep(plan)) st.absorb(r);
  return st;
}

std::vector<uint64_t> range_vec(uint64_t lo, uint64_t hi) {
  std::vector<uint64_t> v;
  for (uint64_t x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string count_note(const GridStats& st) {
  return std::to_string(st.total) + " tuples, " + std::to_string(st.cond_yes) +
         " condition-true";
}

// --- criterion 1: quartic additive criterion and inverse --------------------

Result criterion1() {
  Result res;
  uint64_t tuples = 0, perms = 0;
  for (uint32_t m : {2u, 3u, 4u, 5u, 6u}) {
    FieldRef F = mk_field(2, m);
    auto dom = full_domain(*F);
    for (uint64_t ae = 1; ae < F->order(); ++ae) {
      for (uint64_t be = 0; be < F->order(); ++be) {
        FieldElem a = F->elem(ae), b = F->elem(be);
        ++tuples;
        Mapping L = tabulate(
            *F,
            [&](FieldElem x) {
              uint64_t x2 = F->mul_enc(x.enc, x.enc);
              return F->elem(F->add_enc(F->mul_enc(x2, x2),
                                        F->add_enc(F->mul_enc(be, x2), F->mul_enc(ae, x.enc))));
            },
            dom);
        bool brute = is_permutation(L);
        if (quartic_is_perm(*F, a, b, m) != brute) {
          res.pass = false;
          res.note = "criterion/brute mismatch at m=" + std::to_string(m) +
                     " a=" + std::to_string(ae) + " b=" + std::to_string(be);
          return res;
        }
        if (!brute) continue;
        ++perms;
        LinearizedPoly inv_poly = quartic_inverse(*F, a, b, m);
        Mapping inv = tabulate(
            *F, [&](FieldElem x) { return eval_linearized(*F, inv_poly, x); }, dom);
        if (!(inv == invert_table(L))) {
          res.pass = false;
          res.note = "inverse mismatch at m=" + std::to_string(m) + " a=" + std::to_string(ae) +
                     " b=" + std::to_string(be);
          return res;
        }
      }
    }
  }
  res.note = std::to_string(tuples) + " tuples, " + std::to_string(perms) + " permutations";
  return res;
}

// --- criterion 2: binomial additive criterion and inverse -------------------

Result criterion2() {
  Result res;
  struct Case {
    uint64_t q;
    uint64_t p;
    uint32_t n;
    uint32_t M;
  };
  const std::vector<Case> cases = {{2, 2, 2, 2}, {2, 2, 3, 3}, {3, 3, 2, 2},
                                   {3, 3, 3, 3}, {4, 2, 4, 2}, {5, 5, 2, 2}};
  uint64_t tuples = 0, perms = 0;
  for (const Case& c : cases) {
    FieldRef F = mk_field(c.p, c.n);
    auto dom = full_domain(*F);
    for (uint32_t r = 1; r + 1 <= c.M; ++r) {
      uint64_t qr = 1;
      for (uint32_t i = 0; i < r; ++i) qr *= c.q;
      for (uint64_t ae = 1; ae < F->order(); ++ae) {
        FieldElem a = F->elem(ae);
        ++tuples;
        Mapping L = tabulate(
            *F,
            [&](FieldElem x) {
              return F->elem(F->sub_enc(F->pow_enc(x.enc, qr), F->mul_enc(ae, x.enc)));
            },
            dom);
        bool brute = is_permutation(L);
        if (binomial_is_perm(*F, a, c.q, r, c.M) != brute) {
          res.pass = false;
          res.note = "criterion/brute mismatch at q=" + std::to_string(c.q) +
                     " M=" + std::to_string(c.M) + " r=" + std::to_string(r) +
                     " a=" + std::to_string(ae);
          return res;
        }
        if (!brute) continue;
        ++perms;
        LinearizedPoly inv_poly = binomial_inverse(*F, a, c.q, r, c.M);
        Mapping inv = tabulate(
            *F, [&](FieldElem x) { return eval_linearized(*F, inv_poly, x); }, dom);
        if (!(inv == invert_table(L))) {
          res.pass = false;
          res.note = "inverse mismatch at q=" + std::to_string(c.q) + " M=" + std::to_string(c.M) +
                     " r=" + std::to_string(r) + " a=" + std::to_string(ae);
          return res;
        }
      }
    }
  }
  res.note = std::to_string(tuples) + " tuples, " + std::to_string(perms) + " permutations";
  return res;
}

// --- criterion 3: subfield-companion equivalence on random sums -------------

Result criterion3() {
  Result res;
  struct Case {
    uint64_t p;
    uint32_t n;
    uint32_t m;
  };
  uint64_t checked = 0, perms = 0;
  for (const Case& c : {Case{2, 4, 2}, Case{2, 6, 3}, Case{3, 4, 2}}) {
    FieldRef F = mk_field(c.p, c.n);
    uint64_t q2 = F->order();
    uint64_t counter = 0;
    auto draw = [&] { return sweep_draw(1001, "companion-equivalence", c.p, c.m, counter++); };
    for (int trial = 0; trial < 500; ++trial) {
      GSpec g;
      uint32_t k = 1 + static_cast<uint32_t>(draw() % 3);
      for (uint32_t i = 0; i < k; ++i)
        g.terms.push_back({F->elem(draw() % q2),
                           BigInt(static_cast<unsigned long>(1 + draw() % (q2 - 2)))});
      g.delta = F->elem(draw() % q2);

      Mapping P = build_P(*F, g, c.m);
      Mapping tau = build_tau(*F, g, c.m);
      bool perm = is_permutation(P);
      ++checked;
      if (perm != is_permutation(tau)) {
        res.pass = false;
        res.note = "companion verdict diverged at trial " + std::to_string(trial) + " over GF(" +
                   std::to_string(q2) + ")";
        return res;
      }
      if (!perm) continue;
      ++perms;
      Mapping inv = inverse_via_tau(*F, g, c.m);
      if (!is_identity(compose(inv, P)) || !is_identity(compose(P, inv))) {
        res.pass = false;
        res.note = "closed inverse failed to compose at trial " + std::to_string(trial) +
                   " over GF(" + std::to_string(q2) + ")";
        return res;
      }
    }
  }
  res.note = std::to_string(checked) + " random sums, " + std::to_string(perms) + " permutations";
  return res;
}

// --- criterion 4: equivalence families, exhaustive at small fields ----------

Result criterion4() {
  Result res;
  GridStats all;

  // Trace-sum family, default grids plus a two-term enumeration.
  for (auto [p, m] : std::vector<std::pair<uint64_t, uint32_t>>{{3, 1}, {2, 2}, {5, 1}})
    all.merge(run_default_grid("F08", p, m));
  all.merge(run_grid("F08", 3, 1,
                     {{"b1", range_vec(0, 8)},
                      {"s1", range_vec(1, 4)},
                      {"b2", range_vec(0, 8)},
                      {"s2", range_vec(1, 4)},
                      {"delta", {0, 1, 2}}}));

  // Four-branch odd-characteristic family; the largest field is sampled with
  // per-branch coverage recorded below.
  GridStats f15;
  for (auto [p, m] : std::vector<std::pair<uint64_t, uint32_t>>{{3, 1}, {5, 1}, {3, 2}})
    f15.merge(run_default_grid("F15", p, m));
  f15.merge(run_sampled("F15", 5, 2, 4000, 42));
  all.merge(f15);

  // Four-branch even-characteristic family.  The norm branch cannot be
  // condition-true below a degree-four subfield, so a targeted slice of
  // GF(2^8) witnesses it.
  GridStats f16;
  for (uint32_t m : {1u, 2u, 3u})
    f16.merge(run_default_grid("F16", 2, m));
  GridStats f16_norm = run_grid("F16", 2, 4,
                                {{"b1", {0}}, {"b2", {0}}, {"b3", range_vec(0, 31)},
                                 {"e", {2}},  {"delta", {0}}});
  f16.merge(f16_norm);
  all.merge(f16);

  // Cubic-companion family in characteristic three.
  GridStats f17;
  for (auto [p, m] : std::vector<std::pair<uint64_t, uint32_t>>{{3, 1}, {3, 2}})
    f17.merge(run_default_grid("F17", p, m));
  all.merge(f17);

  if (all.not_upheld) {
    res.pass = false;
    res.note = std::to_string(all.not_upheld) + " violations; first: " + all.first_fail;
    return res;
  }
  for (const char* branch : {"linear", "additive", "frobenius", "norm"}) {
    if (f15.yes_branches[branch] == 0) {
      res.pass = false;
      res.note = std::string("odd-characteristic ") + branch + " branch never condition-true";
      return res;
    }
  }
  for (const char* branch : {"linear", "additive", "frobenius"}) {
    if (f16.yes_branches[branch] == 0) {
      res.pass = false;
      res.note = std::string("even-characteristic ") + branch + " branch never condition-true";
      return res;
    }
  }
  if (f16_norm.yes_branches["norm"] == 0) {
    res.pass = false;
    res.note = "even-characteristic norm branch never condition-true on GF(2^8)";
    return res;
  }
  if (f17.yes_branches.empty()) {
    res.pass = false;
    res.note = "cubic-companion family never condition-true";
    return res;
  }
  res.note = count_note(all);
  return res;
}

// --- criterion 5: sufficient-condition families -----------------------------

Result criterion5() {
  Result res;
  GridStats all;
  for (uint32_t m : {2u, 3u, 4u}) all.merge(run_default_grid("F02", 2, m));
  for (uint32_t m : {1u, 2u, 3u}) {
    all.merge(run_default_grid("F03", 2, m));
    all.merge(run_default_grid("F05", 2, m));
    all.merge(run_default_grid("F06", 2, m));
  }
  // Odd-characteristic paired-exponent family, single- and two-term forms.
  for (auto [p, m] : std::vector<std::pair<uint64_t, uint32_t>>{{3, 1}, {5, 1}, {3, 2}})
    all.merge(run_default_grid("F07", p, m));
  auto k2_axes = [](uint64_t p, uint32_t m) {
    FieldRef F = mk_field(p, 2 * m);
    std::vector<uint64_t> sub;
    for (const FieldElem& x : F->subfield_elements(m)) sub.push_back(x.enc);
    return std::vector<ParamAxis>{{"b1", sub},           {"l1", {1, 3}},
                                  {"s1", {1, 2}},        {"b2", sub},
                                  {"l2", {1, 3}},        {"s2", {1, 2}},
                                  {"delta", range_vec(0, F->order() - 1)}};
  };
  all.merge(run_grid("F07", 3, 1, k2_axes(3, 1)));
  all.merge(run_grid("F07", 5, 1, k2_axes(5, 1)));
  {
    // Two-term grid over GF(81) is beyond the evaluation budget; sample it.
    SweepPlan plan;
    plan.family_id = "F07";
    plan.fields = {{3, 2}};
    plan.strategy = SweepStrategy::sampled;
    plan.sample_count = 500;
    plan.sample_seed = 42;
    plan.axes_override = k2_axes(3, 2);
    GridStats st;
    for (const VerificationReport& r : run_sweep(plan)) st.absorb(r);
    all.merge(st);
  }
  if (all.not_upheld) {
    res.pass = false;
    res.note = std::to_string(all.not_upheld) + " violations; first: " + all.first_fail;
    return res;
  }
  if (all.cond_yes == 0) {
    res.pass = false;
    res.note = "no condition-true instances reached";
    return res;
  }
  res.note = count_note(all);
  return res;
}

// --- criterion 6: branch-selected families ----------------------------------

Result criterion6() {
  Result res;
  GridStats all;
  for (uint32_t m : {2u, 3u, 4u}) all.merge(run_default_grid("F04", 2, m));
  for (const char* fam : {"F10", "F11", "F12", "F13", "F14"})
    for (uint32_t m : {2u, 3u, 4u}) all.merge(run_default_grid(fam, 2, m));
  if (all.not_upheld) {
    res.pass = false;
    res.note = std::to_string(all.not_upheld) + " violations; first: " + all.first_fail;
    return res;
  }
  if (all.cond_yes == 0) {
    res.pass = false;
    res.note = "no branch guard ever held";
    return res;
  }
  res.note = count_note(all);
  return res;
}

// --- criterion 7: involution families ---------------------------------------

Result criterion7() {
  Result res;
  GridStats all;
  for (const char* fam : {"F01a", "F01b"})
    for (uint32_t m : {1u, 2u, 3u}) all.merge(run_default_grid(fam, 2, m));
  if (all.not_upheld) {
    res.pass = false;
    res.note = std::to_string(all.not_upheld) + " violations; first: " + all.first_fail;
    return res;
  }
  if (all.cond_yes != all.total) {
    res.pass = false;
    res.note = "an involution tuple lost its condition";
    return res;
  }
  res.note = count_note(all);
  return res;
}

// --- criterion 8: conjugate transport on random permutation instances -------

Result criterion8() {
  Result res;
  uint64_t perms_total = 0, draws_total = 0;
  for (auto [p, m] : std::vector<std::pair<uint64_t, uint32_t>>{{2, 2}, {3, 2}}) {
    FieldRef F = mk_field(p, 2 * m);
    uint64_t q2 = F->order();
    uint64_t counter = 0;
    auto draw = [&] { return sweep_draw(2024, "conjugate-transport", p, m, counter++); };
    uint64_t found = 0, draws = 0;
    while (found < 200) {
      if (++draws > 100000) {
        res.pass = false;
        res.note = "could not reach 200 permutation instances over GF(" + std::to_string(q2) + ")";
        return res;
      }
      ParamMap params;
      uint32_t k = 1 + static_cast<uint32_t>(draw() % 3);
      for (uint32_t i = 1; i <= k; ++i) {
        params["b" + std::to_string(i)] = draw() % q2;
        params["s" + std::to_string(i)] = 1 + draw() % (q2 - 2);
      }
      params["delta"] = draw() % q2;
      PPInstance inst = instantiate("F09", F, m, params);
      PPInstance partner = conjugate_pair(inst);
      bool perm1 = is_permutation(inst.forward);
      if (perm1 != is_permutation(partner.forward)) {
        res.pass = false;
        res.note = "partner permutation verdict diverged over GF(" + std::to_string(q2) + ")";
        return res;
      }
      if (!perm1) continue;
      ++found;
      VerificationReport r = verify_instance(inst);
      if (!r.theorem_upheld || !r.conjugate_transport.has_value() || !*r.conjugate_transport) {
        res.pass = false;
        res.note = "transport identity failed over GF(" + std::to_string(q2) + "): " +
                   report_to_json(r).dump();
        return res;
      }
    }
    perms_total += found;
    draws_total += draws;
  }
  res.note = std::to_string(perms_total) + " permutation instances from " +
             std::to_string(draws_total) + " draws";
  return res;
}

// --- criterion 9: twisted-coefficient normalization -------------------------

Result criterion9() {
  Result res;
  struct Case {
    uint64_t p;
    uint32_t n;
    uint32_t m;
  };
  uint64_t identities = 0;
  for (const Case& c : {Case{3, 2, 1}, Case{5, 2, 1}, Case{3, 4, 2}}) {
    FieldRef F = mk_field(c.p, c.n);
    uint64_t q2 = F->order();
    uint64_t q = 1;
    for (uint32_t i = 0; i < c.m; ++i) q *= c.p;
    std::vector<uint64_t> norm_one;
    for (uint64_t a = 1; a < q2; ++a)
      if (F->pow_enc(a, q + 1) == 1) norm_one.push_back(a);
    if (norm_one.size() != q + 1) {
      res.pass = false;
      res.note = "norm-one census wrong over GF(" + std::to_string(q2) + ")";
      return res;
    }
    uint64_t counter = 0;
    auto draw = [&] { return sweep_draw(777, "twist-normalization", c.p, c.m, counter++); };
    for (uint64_t ae : norm_one) {
      for (int trial = 0; trial < 50; ++trial) {
        GSpec g;
        uint32_t k = 1 + static_cast<uint32_t>(draw() % 3);
        for (uint32_t i = 0; i < k; ++i)
          g.terms.push_back({F->elem(draw() % q2),
                             BigInt(static_cast<unsigned long>(1 + draw() % (q2 - 2)))});
        g.delta = F->elem(draw() % q2);

        NormalizedSpec ns = normalize_general_a(F, c.m, F->elem(ae), g);
        Mapping twisted = tabulate_twisted(F, c.m, F->elem(ae), g);
        Mapping straight = build_P(*F, ns.spec, c.m);
        uint64_t shrink = F->inv_enc(F->pow_enc(ns.epsilon.enc, ns.t));
        for (uint64_t x = 0; x < q2; ++x) {
          uint64_t expected = F->mul_enc(ns.scale.enc, straight.image[F->mul_enc(shrink, x)]);
          if (twisted.image[x] != expected) {
            res.pass = false;
            res.note = "normalized mapping diverged at a=" + std::to_string(ae) +
                       " x=" + std::to_string(x) + " over GF(" + std::to_string(q2) + ")";
            return res;
          }
        }
        ++identities;
      }
    }
  }
  res.note = std::to_string(identities) + " pointwise identities";
  return res;
}

// --- criterion 10: sweep determinism ----------------------------------------

Result criterion10() {
  Result res;
  SweepPlan sampled;
  sampled.family_id = "F15";
  sampled.fields = {{3, 2}};
  sampled.strategy = SweepStrategy::sampled;
  sampled.sample_count = 100;
  sampled.sample_seed = 123;
  std::string a1 = reports_to_json(run_sweep(sampled));
  std::string a2 = reports_to_json(run_sweep(sampled));

  SweepPlan exhaustive;
  exhaustive.family_id = "F02";
  exhaustive.fields = {{2, 2}};
  std::string b1 = reports_to_json(run_sweep(exhaustive));
  std::string b2 = reports_to_json(run_sweep(exhaustive));
  std::string c1 = reports_to_csv(run_sweep(exhaustive));
  std::string c2 = reports_to_csv(run_sweep(exhaustive));

  if (fnv1a(a1) != fnv1a(a2) || a1 != a2) {
    res.pass = false;
    res.note = "sampled sweep reruns disagree";
    return res;
  }
  if (fnv1a(b1) != fnv1a(b2) || b1 != b2 || fnv1a(c1) != fnv1a(c2)) {
    res.pass = false;
    res.note = "exhaustive sweep reruns disagree";
    return res;
  }
  res.note = "digests " + std::to_string(fnv1a(a1)) + " / " + std::to_string(fnv1a(b1)) +
             " reproduced";
  return res;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    Result (*fn)();
  };
  const std::vector<Criterion> criteria = {
      {"quartic additive criterion and closed inverse", criterion1},
      {"binomial additive criterion and closed inverse", criterion2},
      {"subfield-companion equivalence on random sums", criterion3},
      {"equivalence families exhaustive at small fields", criterion4},
      {"sufficient-condition families verified", criterion5},
      {"branch-selected families verified", criterion6},
      {"involution families verified", criterion7},
      {"conjugate transport on random permutation instances", criterion8},
      {"twisted-coefficient normalization", criterion9},
      {"sweep determinism by digest", criterion10},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << (i + 1) << ": " << criteria[i].label << " ... "
              << (r.pass ? "PASS" : "FAIL") << " [" << r.note << ", "
              << static_cast<int>(secs * 10) / 10.0 << "s]" << std::endl;
    if (!r.pass) ++failures;
  }
  if (failures) std::cout << failures << " criteria failed" << std::endl;
  return failures;
}
