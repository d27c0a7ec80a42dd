#pragma once

#include <memory>
#include <string>
#include <vector>

#include "npt/diagnostics.hpp"
#include "npt/eval.hpp"
#include "npt/signature.hpp"
#include "npt/term.hpp"
#include "npt/typecheck.hpp"

namespace npt::surface {

// Concrete syntax trees. Variables are named; binder kinds (cartesian vs
// affine) are resolved during elaboration from an explicit `@I` annotation or
// from the expected type. Every node carries the span of its head token.
enum class SKind {
  Ident,     // identifier reference
  Universe,  // U
  NmType,    // Nm
  ReflE,     // refl
  NameOf,    // name x           (name = the identifier)
  Lam,       // \(x : A). e | \(x : @I). e | \x. e
  Pi,        // (x : A) -> B     kids: [A, B]
  Arrow,     // A -> B           kids: [A, B]
  BridgePi,  // (x : @I) -o B | @I -o B   kids: [B]
  App,       // e1 e2            kids: [fn, arg]
  PairE,     // (e1 , e2)
  FstE,      // fst e
  SndE,      // snd e
  SigmaE,    // Sig (x : A). B   kids: [A, B]
  IdE,       // Id A a b
  JE,        // J base proof with motive m    kids: [base, proof, motive]
  GelT,      // Gel A x          kids: [A]
  GelI,      // gel a x          kids: [a]
  UngE,      // ung e
  NuE,       // nu x. e
  ExtE,      // ext m x a        kids: [m, a]
  IndNmE,    // indNm x s b0 b1 with motive m  kids: [s, b0, b1, m]
};

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SExpr {
  SKind kind;
  Span span;
  // Ident text; binder name; or the name argument of name/gel/Gel/ext/
  // indNm/nu.
  std::string name;
  std::vector<SExprPtr> kids;
  // Lam only. An annotated cartesian binder stores its annotation as
  // kids[0] (body last); `@I` annotations set binder_affine instead.
  bool binder_affine = false;
  bool binder_annotated = false;
};

struct SurfaceParam {
  std::string name;
  SExprPtr type;
  Span span;
};

struct SurfaceCtorDecl {
  std::string name;
  SExprPtr type;
  Span span;
};

struct SurfaceDecl {
  enum class Kind { Def, Postulate, Data } kind = Kind::Def;
  Span span;
  std::string name;
  SExprPtr type;  // Def/Postulate annotation (data results are U by grammar)
  SExprPtr body;  // Def only
  bool golden = false;
  std::vector<SurfaceParam> params;     // Data only
  std::vector<SurfaceCtorDecl> ctors;   // Data only
};

struct ParsedFile {
  std::vector<SurfaceDecl> decls;
  long long budget = 0;  // {-# budget N #-}; 0 when the file sets none
};

// ---- parsing ----------------------------------------------------------------

// Parse a whole file. Pragmas are absorbed: `{-# budget N #-}` into
// ParsedFile::budget, `{-# golden #-}` into the following def's flag.
// Throws DiagError{SyntaxError} with a span on malformed input.
ParsedFile parse_file(const std::string& text, const std::string& filename);

// Parse a single expression (the REPL's input form). The whole text must be
// one expression.
SExprPtr parse_expr(const std::string& text, const std::string& filename);

// ---- elaboration --------------------------------------------------------

// Elaborate a surface expression to core syntax against an expected type /
// in inference mode. Elaboration is type-aware: it consults the kernel for
// the types of heads, resolves binder kinds, fills in constructor
// parameters from the expected type, and eta-expands partially applied
// constructors, eliminators, and data formers. Errors carry spans.
TermPtr elab_check(const Signature& sig, const Telescope& gamma, const SExprPtr& e,
                   const TermPtr& expected, Budget& budget);
TermPtr elab_infer(const Signature& sig, const Telescope& gamma, const SExprPtr& e,
                   Budget& budget);

// Elaborate one declaration against the signature checked so far. The result
// is ready for check_declaration (which re-checks it from scratch).
Declaration elab_decl(const Signature& sig, const SurfaceDecl& d, long long budget_value);

// Parse, elaborate, and check a whole source text into `sig`, declaration by
// declaration. A file-level budget pragma overrides `default_budget`. On
// failure the signature keeps every declaration before the failing one.
void check_source(Signature& sig, const std::string& text, const std::string& filename,
                  long long default_budget);

// ---- pretty-printing ------------------------------------------------------

// Deterministic printer; output re-parses and re-elaborates to an
// alpha-identical term. Binders lacking display names print as x0, x1, ...;
// display names colliding with an enclosing binder, a signature-level name,
// or a keyword are ticked (n, n', n'', ...). The signature is consulted only
// for that collision set.
std::string pretty(const Signature& sig, const Telescope& gamma, const TermPtr& t);
std::string pretty(const Signature& sig, const TermPtr& t);
std::string pretty_telescope(const Signature& sig, const Telescope& gamma);

// Declaration forms: "def n : T := B" / "postulate n : T" (preceded by a
// golden marker line when set) and "data D (p : P) : U where | c : T ...".
std::string pretty_def(const Signature& sig, const Def& d);
std::string pretty_data(const Signature& sig, const DataDecl& d);

}  // namespace npt::surface
