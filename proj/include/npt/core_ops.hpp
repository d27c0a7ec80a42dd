#pragma once

#include <functional>
#include <optional>

#include "npt/term.hpp"

namespace npt {

// ---- index plumbing ---------------------------------------------------------

// Add `by` to every free index >= cutoff (cartesian vars and affine slots alike).
TermPtr shift(const TermPtr& t, int by, int cutoff = 0);

// Remove binder `k` from the ambient context: free index k must not occur
// (returns nullopt otherwise); indices above k are decremented.
std::optional<TermPtr> strengthen(const TermPtr& t, int k);

// Replace the scope's own binders and lower the remaining free indices.
// values[i] corresponds to scope.names[i] (leftmost binder first); each value
// is either a term (cartesian binder) or an affine index (affine binder),
// relative to the target context. Substituting a term into an affine slot is
// a KindMismatch.
struct InstValue {
  TermPtr term;      // set for cartesian substitution
  int affine = -1;   // set (>= 0) for affine renaming
  static InstValue of_term(TermPtr t) { return InstValue{std::move(t), -1}; }
  static InstValue of_affine(int index) { return InstValue{nullptr, index}; }
};
TermPtr instantiate(const Scope& scope, const std::vector<InstValue>& values);
TermPtr instantiate1(const Scope& scope, const TermPtr& value);
TermPtr instantiate1_affine(const Scope& scope, int affine_index);

// ---- the affine discipline --------------------------------------------------

// Occurrence sets of free variables, as indices relative to the ambient context.
VarSet supports(const TermPtr& t);

// Gamma | x: drops position `pos` (which must be affine) together with every
// cartesian entry strictly to the right of it; affine entries survive.
Telescope restrict(const Telescope& gamma, int pos);

// x is fresh in t iff t mentions neither x itself nor any cartesian entry
// strictly to the right of x, i.e. t makes sense in restrict(gamma, pos).
bool is_fresh(const Telescope& gamma, int pos, const TermPtr& t);

// Rebuild t as a bridge abstraction over x: \y. t[y/x], well-scoped in
// restrict(gamma, pos). Fails (CaptureViolation) if t mentions a cartesian
// entry strictly to the right of x.
TermPtr capture(const Telescope& gamma, int pos, const TermPtr& t);

// Weaken a term from restrict(gamma, pos) back into the full gamma: the
// inverse reindexing of the embedding that restriction performs. The input
// must be well-scoped in restrict(gamma, pos).
TermPtr unrestrict(const Telescope& gamma, int pos, const TermPtr& t);

// Capture-avoiding substitution of `s` for the entry at `pos` inside `t`;
// the result lives in the same telescope. For an affine target position `s`
// must itself be (a reference to) an affine entry, otherwise KindMismatch.
TermPtr subst(const Telescope& gamma, const TermPtr& t, int pos, const TermPtr& s);

// Scope hygiene: indices in range, affine slots point at affine entries,
// Var nodes point at cartesian entries.
bool well_scoped(const Telescope& gamma, const TermPtr& t);

// Pretty names for entries, used by diagnostics before surface::pretty exists.
std::string telescope_sketch(const Telescope& gamma);

}  // namespace npt
