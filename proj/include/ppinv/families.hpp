#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppinv/field.hpp"
#include "ppinv/mapping.hpp"

namespace ppinv {

// Verdict of a family's side condition. `not_applicable` is used by case-split
// families when no branch guard matches the bound parameters.
enum class TriState { yes, no, not_applicable };

std::string to_string(TriState t);

enum class ConditionKind { iff, sufficient, case_split };

std::string to_string(ConditionKind k);

// One named parameter slot in a family schema, e.g. {"b1", "nonzero element of F_q"}.
// Repeated slots (b1/s1, b2/s2, ...) describe block families with a free term count.
struct ParamField {
  std::string name;
  std::string domain;
  bool repeated = false;
};

struct FamilyDescriptor {
  std::string id;                     // "F01" .. "F17"
  std::vector<std::string> variants;  // e.g. {"a", "b"} for F01; empty otherwise
  std::string summary;
  uint64_t char_requirement = 0;      // 0 = any, 1 = any odd, otherwise the exact prime
  uint32_t min_m = 1;
  ConditionKind condition_kind = ConditionKind::sufficient;
  std::vector<ParamField> param_schema;
};

// Parameter bindings by name. Element-valued parameters hold field encodings,
// integer-valued ones (s_i, l_i, d_i, e) hold the integer itself.
using ParamMap = std::map<std::string, uint64_t>;

struct PPInstance {
  std::string family_id;  // includes the variant suffix, e.g. "F01a"
  FieldRef ctx;
  uint32_t m = 0;
  ParamMap params;
  TriState condition_holds = TriState::not_applicable;
  std::string branch;  // case label for branching families, empty otherwise
  GSpec gspec;
  Mapping forward;
  std::optional<Mapping> inverse_closed;
  bool involution_claimed = false;
};

// The stable 17-entry catalog (F01 carries its two variants in one entry).
const std::vector<FamilyDescriptor>& catalog();

// Lookup accepts either a bare id ("F08") or a variant-qualified one ("F01a").
const FamilyDescriptor& lookup(const std::string& family_id);

// Condition, branch selection, forward spec, and the subfield companion's
// closed-form inverse as a point evaluator -- everything short of tabulation.
// Cheap enough to run over millions of parameter tuples.
struct Prepared {
  TriState condition = TriState::not_applicable;
  std::string branch;
  GSpec gspec;
  bool involution_claimed = false;
  bool inverse_is_forward = false;  // involution families reuse the forward table
  // Maps an encoding of the degree-m subfield to the companion inverse's value.
  // Empty whenever no closed form applies to the bound parameters.
  std::function<uint64_t(uint64_t)> tau_inverse;
};

Prepared prepare(const std::string& family_id, const FieldRef& ctx, uint32_t m,
                 const ParamMap& params);

// Full instantiation: validates the schema, evaluates the condition, tabulates
// the forward map, and attaches the tabulated closed-form inverse when the
// family provides one for these parameters (for case-split families only after
// the forward table is confirmed bijective).
PPInstance instantiate(const std::string& family_id, const FieldRef& ctx, uint32_t m,
                       const ParamMap& params);

// The tabulated closed-form inverse; throws if the instance carries none.
Mapping closed_form_inverse(const PPInstance& inst);

// Rewrites sum b_i (x^q + a x + delta)^{s_i} - a x, for a of norm 1, into the
// standard a = 1 shape: returns coefficients (b̄_i, δ̄), the primitive element,
// the twist index t with a = ε^{(q-1)t}, and the outer scale ε^{qt} such that
// P_a(x) = scale · P̄(ε^{-t} x).
struct NormalizedSpec {
  GSpec spec;
  FieldElem epsilon;
  uint64_t t = 0;
  FieldElem scale;
};

NormalizedSpec normalize_general_a(const FieldRef& ctx, uint32_t m, FieldElem a,
                                   const GSpec& g);

// Tabulates sum b_i (x^q + a x + delta)^{s_i} - a x directly (the unnormalized
// shape), used to cross-check normalize_general_a pointwise.
Mapping tabulate_twisted(const FieldRef& ctx, uint32_t m, FieldElem a, const GSpec& g);

// The conjugate instance: b_i -> b_i^q, s_i -> q s_i. Permutation verdicts of
// the pair always agree, and for permutations the inverses are related by
// P1^{-1}(x) + x = (P2^{-1}(x) + x)^q at every point.
PPInstance conjugate_pair(const PPInstance& inst);

nlohmann::ordered_json instance_to_json(const PPInstance& inst);

// Deterministic parameter grids for sweeps: a named list of value axes whose
// cartesian product enumerates instances in mixed-radix order (first axis most
// significant).
struct ParamAxis {
  std::string name;
  std::vector<uint64_t> values;
};

std::vector<ParamAxis> default_axes(const std::string& family_id, const FieldRef& ctx,
                                    uint32_t m);
uint64_t axes_size(const std::vector<ParamAxis>& axes);
ParamMap axes_tuple(const std::vector<ParamAxis>& axes, uint64_t index);

}  // namespace ppinv
