#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ppinv/families.hpp"

namespace ppinv {

// Pointwise witness for a failed check.  The meaning of the three encodings
// depends on kind:
//   "collision"              P(x) = P(expected) = actual with x != expected
//   "inverse_mismatch"       closed inverse maps x to actual, oracle to expected
//   "involution_mismatch"    P(P(x)) = actual differs from expected = x
//   "conjugate_mismatch"     transported inverse identity fails at x
//   "unexpected_permutation" the condition ruled bijectivity out, yet no
//                            collision exists; the encodings are zero
struct Counterexample {
  std::string kind;
  uint64_t x = 0;
  uint64_t expected = 0;
  uint64_t actual = 0;
};

struct VerificationReport {
  std::string family_id;
  uint64_t p = 0;
  uint32_t m = 0;
  ParamMap params;
  std::string branch;
  TriState condition_holds = TriState::not_applicable;
  bool is_permutation = false;
  // Unset = not applicable (no closed form attached / nothing claimed).
  std::optional<bool> inverse_matches_oracle;
  std::optional<bool> involution_holds;
  std::optional<bool> conjugate_transport;
  bool theorem_upheld = false;
  std::optional<Counterexample> counterexample;
  // Wall-clock cost of producing this report.  Deliberately excluded from
  // every serialization so emitted documents are byte-stable.
  std::chrono::nanoseconds elapsed{0};
};

enum class SweepStrategy {
  automatic,   // exhaustive when within the evaluation budget, else sampled
  exhaustive,  // every tuple; rejected when the budget would be exceeded
  sampled,     // sample_count distinct tuples drawn from the grid
};

struct SweepPlan {
  std::string family_id;  // one family, with variant suffix where applicable
  std::vector<std::pair<uint64_t, uint32_t>> fields;  // (p, m) pairs
  SweepStrategy strategy = SweepStrategy::automatic;
  uint64_t sample_count = 200;
  uint64_t sample_seed = 0;
  // Replaces the family's default parameter grid; only valid for a
  // single-field plan since the values are field encodings.
  std::vector<ParamAxis> axes_override;
};

// Exhaustive sweeps must fit within this many forward evaluations
// (|parameter grid| x q^2); larger grids fall back to sampling.
inline constexpr uint64_t kSweepEvalBudget = 10'000'000;

// Checks every claim the owning theorem makes about one bound parameter
// tuple: bijectivity against the condition, the closed-form inverse against
// the brute-force table inverse, the self-inverse property where claimed, and
// the conjugate-transport identity for the table-driven generic family.
// Failures land in the report; nothing throws for a mathematical violation.
VerificationReport verify_instance(const PPInstance& inst);

// Same verdicts computed without materializing value tables; used by sweeps.
VerificationReport verify_params(const std::string& family_id, const FieldRef& ctx,
                                 uint32_t m, const ParamMap& params);

struct IffReport {
  std::string family_id;
  uint64_t p = 0;
  uint32_t m = 0;
  uint64_t checked = 0;
  uint64_t condition_true = 0;
  uint64_t violations = 0;
  // At most the first eight violating tuples, for diagnostics.
  std::vector<ParamMap> violating_tuples;

  bool passed() const { return violations == 0; }
};

// Condition <=> bijectivity over an explicit enumeration of parameter tuples.
// An empty enumeration passes vacuously with checked = 0.
IffReport check_iff(const std::string& family_id, const FieldRef& ctx, uint32_t m,
                    const std::vector<ParamMap>& enumeration);

// Deterministic sweep: reports ordered by field (as listed) and ascending
// grid index.  Sampled runs draw distinct tuples from a counter-based
// generator keyed by (seed, family, p, m, draw index), so any tuple's
// inclusion can be recomputed independently.
std::vector<VerificationReport> run_sweep(const SweepPlan& plan);

bool all_upheld(const std::vector<VerificationReport>& reports);

nlohmann::ordered_json report_to_json(const VerificationReport& r);
std::string reports_to_json(const std::vector<VerificationReport>& reports);
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

// The keyed draw behind sampled sweeps, exposed for reproducibility tests.
uint64_t sweep_draw(uint64_t seed, const std::string& family_id, uint64_t p,
                    uint32_t m, uint64_t index);

}  // namespace ppinv
