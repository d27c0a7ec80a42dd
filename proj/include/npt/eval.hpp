#pragma once

#include <optional>
#include <string>
#include <vector>

#include "npt/core_ops.hpp"
#include "npt/signature.hpp"

namespace npt {

// Redex-selection order for full normalization. Both strategies reach the
// same normal form on well-typed terms (spot-checked, not a theorem).
enum class Strategy { LeftOuter, RightInner };
Strategy strategy_of_name(const std::string& s);  // "lo" | "ri"

// One recorded rewrite: the rule fired and the path (kid indices from the
// root) of the contracted redex.
struct TraceStep {
  std::string rule;
  std::vector<int> path;
};
struct ReductionTrace {
  std::vector<TraceStep> steps;
};

// Shared step allowance. Every contraction charges one unit; exhaustion
// raises BudgetExceeded.
struct Budget {
  long long remaining = 1'000'000;
  void charge() {
    if (remaining <= 0) fail(ErrorCode::BudgetExceeded, "reduction step budget exhausted");
    --remaining;
  }
};

// Probe: the rule name if the root of t is a redex in gamma (side conditions
// included), nullopt otherwise. Conditional redexes (ext with an uncapturable
// argument, name induction with an unstable scrutinee) are not redexes.
std::optional<std::string> root_rule(const Signature& sig, const Telescope& gamma,
                                     const TermPtr& t);

// Contract the root redex. `rule` must be what root_rule reported.
TermPtr fire_root(const Signature& sig, const Telescope& gamma, const TermPtr& t,
                  const std::string& rule);

// Weak-head normalization: fires root redexes, unblocking heads recursively
// (function position, pair position, proof of J, body of ung, scrutinees).
// Stuck terms are returned as-is.
TermPtr whnf(const Signature& sig, const Telescope& gamma, TermPtr t, Budget& budget);
TermPtr whnf(const Signature& sig, const Telescope& gamma, TermPtr t);

// Head-expose a type: weak-head first; if the head is a conditional form
// that weak-head reduction cannot unstick (ext waiting on a capturable
// argument, name induction waiting on a stable scrutinee), fall back to a
// full normalization pass, which reduces inside subterms.
TermPtr reveal(const Signature& sig, const Telescope& gamma, const TermPtr& t, Budget& budget);

// Full normalization by repeated single steps under the strategy; records
// into `trace` when given. Idempotent on its own output.
TermPtr normalize(const Signature& sig, const Telescope& gamma, TermPtr t, Strategy strategy,
                  Budget& budget, ReductionTrace* trace = nullptr);
TermPtr normalize(const Signature& sig, const Telescope& gamma, TermPtr t,
                  Strategy strategy = Strategy::LeftOuter);

// Re-applies a recorded trace step by step, checking each recorded rule
// still matches at its path; the result of a faithful replay equals the
// normalization that produced the trace.
TermPtr replay(const Signature& sig, const Telescope& gamma, TermPtr t,
               const ReductionTrace& trace);

// Definitional equality, directed by `type`: eta at Pi / BridgePi / Sigma,
// the capturable Gel rule at Gel types, and normalize-then-alpha-compare
// everywhere else.
bool convertible(const Signature& sig, const Telescope& gamma, const TermPtr& a,
                 const TermPtr& b, const TermPtr& type, Budget& budget);
bool convertible(const Signature& sig, const Telescope& gamma, const TermPtr& a,
                 const TermPtr& b, const TermPtr& type);

}  // namespace npt
