#pragma once

#include "npt/eval.hpp"
#include "npt/signature.hpp"

namespace npt {

// Context well-formation: every cartesian entry's type checks as a type in
// its prefix; affine entries are always admissible. Failures are reported as
// IllFormedEntryType.
void check_telescope(const Signature& sig, const Telescope& gamma, Budget& budget);
void check_telescope(const Signature& sig, const Telescope& gamma);

// Bidirectional kernel: infer synthesizes a type, check validates against an
// expected one (Pair and Refl are check-mode only; lambdas carry domain
// annotations so they also infer).
TermPtr infer(const Signature& sig, const Telescope& gamma, const TermPtr& t, Budget& budget);
TermPtr infer(const Signature& sig, const Telescope& gamma, const TermPtr& t);
void check(const Signature& sig, const Telescope& gamma, const TermPtr& t, const TermPtr& type,
           Budget& budget);
void check(const Signature& sig, const Telescope& gamma, const TermPtr& t, const TermPtr& type);

// The bridge-typed unwrapping term `ext (\g'. \y. ung (z. g' z)) x g` used to
// type the step branch of name induction: given the ambient index of the name
// x and a term g of type Gel Nm x, it rebuilds the underlying element of Nm.
// The method is closed, so the result is well-formed in any telescope that
// contains both.
TermPtr nm_step_unwrap(int x_avar, const TermPtr& gel_var);

// One top-level declaration: a definition/postulate or a data declaration
// (constructor argument classes are filled in during checking).
struct Declaration {
  enum class Kind { Def, Data } kind = Kind::Def;
  Def def;
  DataDecl data;

  static Declaration of_def(Def d) {
    Declaration out;
    out.kind = Kind::Def;
    out.def = std::move(d);
    return out;
  }
  static Declaration of_data(DataDecl d) {
    Declaration out;
    out.kind = Kind::Data;
    out.data = std::move(d);
    return out;
  }
};

// Check one declaration against the signature prefix and append it. Each
// declaration gets a fresh reduction budget of `budget_value` steps.
// Diagnostics are annotated with the declaration name.
void check_declaration(Signature& sig, Declaration decl, long long budget_value);

// Check a whole program in order; returns the complete signature or throws
// the first failing declaration's diagnostic.
Signature check_signature(const std::vector<Declaration>& decls,
                          long long budget_value = 1'000'000);

}  // namespace npt
