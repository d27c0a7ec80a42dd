#include "npt/typecheck.hpp"

#include <string>
#include <utility>
#include <vector>

#include "npt/datatypes.hpp"

namespace npt {
namespace {

// ---- diagnostics plumbing ---------------------------------------------------

// Compact, depth-capped rendering of core terms for kernel error messages.
// The surface printer is nicer; this one has no dependencies and never fails.
constexpr int kSketchDepth = 5;

std::string sketch(const TermPtr& t, int depth);

std::string sketch_kid(const TermPtr& t, int i, int depth) { return sketch(t->kids[i].body, depth); }

std::string binder_name(const Scope& s, int i) {
  if (i < static_cast<int>(s.names.size()) && !s.names[i].empty()) return s.names[i];
  return "_";
}

std::string sketch(const TermPtr& t, int depth) {
  if (!t) return "<null>";
  if (depth <= 0) return "...";
  const int d = depth - 1;
  switch (t->kind) {
    case TermKind::Var:
      return t->name.empty() ? "#" + std::to_string(t->var) : t->name;
    case TermKind::Universe:
      return "U";
    case TermKind::Pi:
      return "((" + binder_name(t->kids[1], 0) + " : " + sketch_kid(t, 0, d) + ") -> " +
             sketch_kid(t, 1, d) + ")";
    case TermKind::Lam:
      return "(\\(" + binder_name(t->kids[1], 0) + " : " + sketch_kid(t, 0, d) + "). " +
             sketch_kid(t, 1, d) + ")";
    case TermKind::App:
      return "(" + sketch_kid(t, 0, d) + " " + sketch_kid(t, 1, d) + ")";
    case TermKind::BridgePi:
      return "((" + binder_name(t->kids[0], 0) + " : @I) -o " + sketch_kid(t, 0, d) + ")";
    case TermKind::BridgeLam:
      return "(\\(" + binder_name(t->kids[0], 0) + " : @I). " + sketch_kid(t, 0, d) + ")";
    case TermKind::BridgeApp:
      return "(" + sketch_kid(t, 0, d) + " @" + std::to_string(t->avar) + ")";
    case TermKind::Sigma:
      return "(Sig (" + binder_name(t->kids[1], 0) + " : " + sketch_kid(t, 0, d) + "). " +
             sketch_kid(t, 1, d) + ")";
    case TermKind::Pair:
      return "(" + sketch_kid(t, 0, d) + " , " + sketch_kid(t, 1, d) + ")";
    case TermKind::Fst:
      return "(fst " + sketch_kid(t, 0, d) + ")";
    case TermKind::Snd:
      return "(snd " + sketch_kid(t, 0, d) + ")";
    case TermKind::NmType:
      return "Nm";
    case TermKind::CName:
      return "(name @" + std::to_string(t->avar) + ")";
    case TermKind::IndNm:
      return "(indNm @" + std::to_string(t->avar) + " " + sketch_kid(t, 0, d) + " ...)";
    case TermKind::GelType:
      return "(Gel " + sketch_kid(t, 0, d) + " @" + std::to_string(t->avar) + ")";
    case TermKind::GelIntro:
      return "(gel " + sketch_kid(t, 0, d) + " @" + std::to_string(t->avar) + ")";
    case TermKind::Ung:
      return "(ung (" + binder_name(t->kids[0], 0) + ". " + sketch_kid(t, 0, d) + "))";
    case TermKind::Ext:
      return "(ext " + sketch_kid(t, 0, d) + " @" + std::to_string(t->avar) + " " +
             sketch_kid(t, 1, d) + ")";
    case TermKind::Id:
      return "(Id " + sketch_kid(t, 0, d) + " " + sketch_kid(t, 1, d) + " " + sketch_kid(t, 2, d) +
             ")";
    case TermKind::Refl:
      return "refl";
    case TermKind::J:
      return "(J ...)";
    case TermKind::DataRef:
    case TermKind::CtorApp:
    case TermKind::ElimApp: {
      std::string out = "(" + t->name;
      for (const auto& k : t->kids) out += " " + sketch(k.body, d);
      return out + ")";
    }
    case TermKind::Global:
      return t->name;
  }
  return "?";
}

std::string term_sketch(const TermPtr& t) { return sketch(t, kSketchDepth); }

[[noreturn]] void fail_here(ErrorCode code, std::string message, const Telescope& gamma) {
  fail(code, std::move(message), {}, telescope_sketch(gamma));
}

// ---- context guards ---------------------------------------------------------

struct CartGuard {
  Telescope& g;
  CartGuard(Telescope& gamma, std::string name, TermPtr type) : g(gamma) {
    g.push_cartesian(std::move(name), std::move(type));
  }
  ~CartGuard() { g.pop(); }
  CartGuard(const CartGuard&) = delete;
  CartGuard& operator=(const CartGuard&) = delete;
};

struct AffGuard {
  Telescope& g;
  AffGuard(Telescope& gamma, std::string name) : g(gamma) { g.push_affine(std::move(name)); }
  ~AffGuard() { g.pop(); }
  AffGuard(const AffGuard&) = delete;
  AffGuard& operator=(const AffGuard&) = delete;
};

// ---- shared helpers ---------------------------------------------------------

TermPtr infer_in(const Signature& sig, Telescope& g, const TermPtr& t, Budget& budget);
void check_in(const Signature& sig, Telescope& g, const TermPtr& t, const TermPtr& type,
              Budget& budget);

// The affine side conditions accept a term if it is fresh as written or
// becomes fresh after reduction (spurious occurrences may erase).
bool fresh_up_to_reduction(const Signature& sig, const Telescope& g, int pos, const TermPtr& t,
                           Budget& budget) {
  if (is_fresh(g, pos, t)) return true;
  return is_fresh(g, pos, normalize(sig, g, t, Strategy::LeftOuter, budget));
}

// Validate an affine slot and return the entry's telescope position.
int expect_affine(const Telescope& g, int avar, const char* what) {
  if (avar < 0 || avar >= g.size())
    fail_here(ErrorCode::UnboundVariable,
              std::string(what) + ": name index " + std::to_string(avar) + " is out of scope", g);
  const Entry& e = g.by_index(avar);
  if (!e.is_affine())
    fail_here(ErrorCode::KindMismatch,
              std::string(what) + " needs a name, but '" + e.name + "' is a cartesian variable",
              g);
  return g.position_of(avar);
}

// t must be a type: its inferred type must be the universe.
void check_is_type(const Signature& sig, Telescope& g, const TermPtr& t, Budget& budget) {
  TermPtr ty = infer_in(sig, g, t, budget);
  if (!convertible(sig, g, ty, mk::universe(), mk::universe(), budget))
    fail_here(ErrorCode::UniverseExpected,
              "expected a type, but " + term_sketch(t) + " has type " + term_sketch(ty), g);
}

// Same, but motive positions report MotiveMismatch.
void check_motive_is_type(const Signature& sig, Telescope& g, const TermPtr& t, Budget& budget) {
  try {
    check_is_type(sig, g, t, budget);
  } catch (const DiagError& e) {
    if (e.diag.code != ErrorCode::UniverseExpected) throw;
    Diagnostic d = e.diag;
    d.code = ErrorCode::MotiveMismatch;
    d.message = "motive is not a type family: " + d.message;
    throw DiagError(std::move(d));
  }
}

// Check the kids of a saturated node (data former / constructor / eliminator
// application) left to right against a Pi tower, instantiating as we go;
// returns the fully applied result type. `motive_kid` marks the kid whose
// failure is a MotiveMismatch.
TermPtr fold_saturated(const Signature& sig, Telescope& g, const TermPtr& node, TermPtr tower,
                       Budget& budget, const char* what, int motive_kid = -1) {
  for (int i = 0; i < static_cast<int>(node->kids.size()); ++i) {
    TermPtr tw = reveal(sig, g, tower, budget);
    if (tw->kind != TermKind::Pi)
      fail_here(ErrorCode::KindMismatch,
                std::string(what) + " '" + node->name + "' is applied to too many arguments", g);
    const TermPtr& kid = node->kids[i].body;
    if (i == motive_kid) {
      try {
        check_in(sig, g, kid, tw->kids[0].body, budget);
      } catch (const DiagError& e) {
        if (e.diag.code != ErrorCode::TypeMismatch) throw;
        Diagnostic d = e.diag;
        d.code = ErrorCode::MotiveMismatch;
        d.message = "eliminator motive: " + d.message;
        throw DiagError(std::move(d));
      }
    } else {
      check_in(sig, g, kid, tw->kids[0].body, budget);
    }
    tower = instantiate1(tw->kids[1], kid);
  }
  return tower;
}

TermPtr forg_term(int x_avar, const TermPtr& gel_var) {
  return nm_step_unwrap(x_avar, gel_var);
}

// ---- infer ------------------------------------------------------------------

TermPtr infer_in(const Signature& sig, Telescope& g, const TermPtr& t, Budget& budget) {
  switch (t->kind) {
    case TermKind::Var: {
      if (t->var < 0 || t->var >= g.size())
        fail_here(ErrorCode::UnboundVariable,
                  "variable index " + std::to_string(t->var) + " is out of scope", g);
      const Entry& e = g.by_index(t->var);
      if (e.is_affine())
        fail_here(ErrorCode::KindMismatch,
                  "'" + e.name + "' is a name; names are not terms (use it through name/gel/ext)",
                  g);
      return shift(e.type, t->var + 1);
    }

    case TermKind::Universe:
      return mk::universe();

    case TermKind::Pi:
    case TermKind::Sigma: {
      check_is_type(sig, g, t->kids[0].body, budget);
      CartGuard bind(g, binder_name(t->kids[1], 0), t->kids[0].body);
      check_is_type(sig, g, t->kids[1].body, budget);
      return mk::universe();
    }

    case TermKind::Lam: {
      const TermPtr& dom = t->kids[0].body;
      check_is_type(sig, g, dom, budget);
      TermPtr body_ty;
      {
        CartGuard bind(g, binder_name(t->kids[1], 0), dom);
        body_ty = infer_in(sig, g, t->kids[1].body, budget);
      }
      return mk::pi(dom, binder_name(t->kids[1], 0), body_ty);
    }

    case TermKind::App: {
      TermPtr fn_ty = reveal(sig, g, infer_in(sig, g, t->kids[0].body, budget), budget);
      if (fn_ty->kind != TermKind::Pi)
        fail_here(ErrorCode::NotAFunction,
                  "application of a non-function: " + term_sketch(t->kids[0].body) +
                      " has type " + term_sketch(fn_ty),
                  g);
      check_in(sig, g, t->kids[1].body, fn_ty->kids[0].body, budget);
      return instantiate1(fn_ty->kids[1], t->kids[1].body);
    }

    case TermKind::BridgePi: {
      AffGuard bind(g, binder_name(t->kids[0], 0));
      check_is_type(sig, g, t->kids[0].body, budget);
      return mk::universe();
    }

    case TermKind::BridgeLam: {
      TermPtr body_ty;
      {
        AffGuard bind(g, binder_name(t->kids[0], 0));
        body_ty = infer_in(sig, g, t->kids[0].body, budget);
      }
      return mk::bridge_pi(binder_name(t->kids[0], 0), body_ty);
    }

    case TermKind::BridgeApp: {
      int pos = expect_affine(g, t->avar, "bridge application");
      TermPtr fn_ty = infer_in(sig, g, t->kids[0].body, budget);
      if (!fresh_up_to_reduction(sig, g, pos, t->kids[0].body, budget))
        fail_here(ErrorCode::AffinityViolation,
                  "the function of a bridge application must live in the context restricted at '" +
                      g.at(pos).name + "': " + term_sketch(t->kids[0].body) +
                      " mentions the name or a variable introduced after it",
                  g);
      TermPtr fw = reveal(sig, g, fn_ty, budget);
      if (fw->kind != TermKind::BridgePi)
        fail_here(ErrorCode::NotAFunction,
                  "bridge application of a non-bridge: " + term_sketch(t->kids[0].body) +
                      " has type " + term_sketch(fw),
                  g);
      return instantiate1_affine(fw->kids[0], t->avar);
    }

    case TermKind::Pair: {
      TermPtr a = infer_in(sig, g, t->kids[0].body, budget);
      TermPtr b = infer_in(sig, g, t->kids[1].body, budget);
      return mk::sigma(a, "_", shift(b, 1));
    }

    case TermKind::Fst: {
      TermPtr p_ty = reveal(sig, g, infer_in(sig, g, t->kids[0].body, budget), budget);
      if (p_ty->kind != TermKind::Sigma)
        fail_here(ErrorCode::KindMismatch,
                  "first projection of a term whose type is not a pair type: " +
                      term_sketch(p_ty),
                  g);
      return p_ty->kids[0].body;
    }

    case TermKind::Snd: {
      TermPtr p_ty = reveal(sig, g, infer_in(sig, g, t->kids[0].body, budget), budget);
      if (p_ty->kind != TermKind::Sigma)
        fail_here(ErrorCode::KindMismatch,
                  "second projection of a term whose type is not a pair type: " +
                      term_sketch(p_ty),
                  g);
      return instantiate1(p_ty->kids[1], mk::fst(t->kids[0].body));
    }

    case TermKind::NmType:
      return mk::universe();

    case TermKind::CName: {
      expect_affine(g, t->avar, "name introduction");
      return mk::nm();
    }

    case TermKind::IndNm: {
      expect_affine(g, t->avar, "name induction");
      check_in(sig, g, t->kids[0].body, mk::nm(), budget);
      const Scope& motive = t->kids[1];
      {
        CartGuard bind(g, binder_name(motive, 0), mk::nm());
        check_motive_is_type(sig, g, motive.body, budget);
      }
      check_in(sig, g, t->kids[2].body, instantiate1(motive, mk::cname(t->avar)), budget);
      {
        CartGuard bind(g, binder_name(t->kids[3], 0), mk::gel_type(mk::nm(), t->avar));
        Scope lifted_motive{motive.names, shift(motive.body, 1, 1)};
        TermPtr expected =
            instantiate1(lifted_motive, forg_term(t->avar + 1, mk::var(0, binder_name(t->kids[3], 0))));
        check_in(sig, g, t->kids[3].body, expected, budget);
      }
      return instantiate1(motive, t->kids[0].body);
    }

    case TermKind::GelType: {
      int pos = expect_affine(g, t->avar, "Gel");
      check_is_type(sig, g, t->kids[0].body, budget);
      if (!fresh_up_to_reduction(sig, g, pos, t->kids[0].body, budget))
        fail_here(ErrorCode::GelFreshnessViolation,
                  "the content type of Gel at '" + g.at(pos).name +
                      "' must live in the restricted context: " + term_sketch(t->kids[0].body),
                  g);
      return mk::universe();
    }

    case TermKind::GelIntro: {
      int pos = expect_affine(g, t->avar, "gel");
      TermPtr content_ty = infer_in(sig, g, t->kids[0].body, budget);
      if (!fresh_up_to_reduction(sig, g, pos, t->kids[0].body, budget))
        fail_here(ErrorCode::GelFreshnessViolation,
                  "the content of gel at '" + g.at(pos).name +
                      "' must live in the restricted context: " + term_sketch(t->kids[0].body),
                  g);
      if (!fresh_up_to_reduction(sig, g, pos, content_ty, budget))
        fail_here(ErrorCode::GelFreshnessViolation,
                  "the content of gel at '" + g.at(pos).name + "' has a type mentioning the name: " +
                      term_sketch(content_ty),
                  g);
      return mk::gel_type(content_ty, t->avar);
    }

    case TermKind::Ung: {
      TermPtr body_ty;
      {
        AffGuard bind(g, binder_name(t->kids[0], 0));
        body_ty = reveal(sig, g, infer_in(sig, g, t->kids[0].body, budget), budget);
        if (body_ty->kind != TermKind::GelType)
          fail_here(ErrorCode::KindMismatch,
                    "ung expects its body to have a Gel type, got " + term_sketch(body_ty), g);
        if (body_ty->avar != 0)
          fail_here(ErrorCode::KindMismatch,
                    "ung expects a Gel type at its own bound name, got " + term_sketch(body_ty),
                    g);
        TermPtr content = body_ty->kids[0].body;
        std::optional<TermPtr> out = strengthen(content, 0);
        if (!out) out = strengthen(normalize(sig, g, content, Strategy::LeftOuter, budget), 0);
        if (!out)
          fail_here(ErrorCode::GelFreshnessViolation,
                    "the Gel content type escapes ung's bound name: " + term_sketch(content), g);
        body_ty = *out;
      }
      return body_ty;
    }

    case TermKind::Ext: {
      int pos = expect_affine(g, t->avar, "ext");
      const TermPtr& method = t->kids[0].body;
      const TermPtr& arg = t->kids[1].body;
      TermPtr m_ty = infer_in(sig, g, method, budget);
      if (!fresh_up_to_reduction(sig, g, pos, method, budget))
        fail_here(ErrorCode::AffinityViolation,
                  "the ext method must live in the context restricted at '" + g.at(pos).name +
                      "': " + term_sketch(method),
                  g);
      TermPtr mw = reveal(sig, g, m_ty, budget);
      if (mw->kind != TermKind::Pi)
        fail_here(ErrorCode::NotAFunction,
                  "the ext method must be a function, got type " + term_sketch(mw), g);
      TermPtr dom = reveal(sig, g, mw->kids[0].body, budget);
      if (dom->kind != TermKind::BridgePi)
        fail_here(ErrorCode::KindMismatch,
                  "the ext method must consume a bridge, got domain " + term_sketch(dom), g);
      check_in(sig, g, arg, instantiate1_affine(dom->kids[0], t->avar), budget);

      // Result type: the method's codomain at the captured argument, then the
      // resulting bridge applied back at x.
      const Scope& cod = mw->kids[1];
      bool captured = true;
      TermPtr cap_full;
      try {
        cap_full = unrestrict(g, pos, capture(g, pos, arg));
      } catch (const DiagError& e) {
        if (e.diag.code != ErrorCode::CaptureViolation) throw;
        captured = false;
      }
      if (captured) {
        TermPtr inst = reveal(sig, g, instantiate1(cod, cap_full), budget);
        if (inst->kind != TermKind::BridgePi)
          fail_here(ErrorCode::KindMismatch,
                    "the ext method must produce a bridge, got " + term_sketch(inst), g);
        return instantiate1_affine(inst->kids[0], t->avar);
      }
      // The argument is not capturable over x; the result type is still
      // well-defined when the codomain does not depend on the abstracted
      // argument.
      TermPtr inst;
      {
        CartGuard bind(g, binder_name(cod, 0), mw->kids[0].body);
        inst = reveal(sig, g, cod.body, budget);
        if (inst->kind != TermKind::BridgePi)
          fail_here(ErrorCode::KindMismatch,
                    "the ext method must produce a bridge, got " + term_sketch(inst), g);
      }
      std::optional<TermPtr> indep = strengthen(inst, 0);
      if (!indep)
        fail_here(ErrorCode::TypeMismatch,
                  "cannot type ext: the method's result type depends on the extended bridge, "
                  "but the argument " +
                      term_sketch(arg) + " mentions variables introduced after '" +
                      g.at(pos).name + "' and cannot be captured",
                  g);
      return instantiate1_affine((*indep)->kids[0], t->avar);
    }

    case TermKind::Id: {
      check_is_type(sig, g, t->kids[0].body, budget);
      check_in(sig, g, t->kids[1].body, t->kids[0].body, budget);
      check_in(sig, g, t->kids[2].body, t->kids[0].body, budget);
      return mk::universe();
    }

    case TermKind::Refl:
      fail_here(ErrorCode::TypeMismatch,
                "refl has no unique type; it only checks against an expected Id type", g);

    case TermKind::J: {
      TermPtr p_ty = reveal(sig, g, infer_in(sig, g, t->kids[2].body, budget), budget);
      if (p_ty->kind != TermKind::Id)
        fail_here(ErrorCode::KindMismatch,
                  "J eliminates an identity proof, got type " + term_sketch(p_ty), g);
      const TermPtr& a_ty = p_ty->kids[0].body;
      const TermPtr& lhs = p_ty->kids[1].body;
      const TermPtr& rhs = p_ty->kids[2].body;
      const Scope& motive = t->kids[0];
      {
        CartGuard bind_b(g, binder_name(motive, 0), a_ty);
        CartGuard bind_e(g, binder_name(motive, 1),
                         mk::id(shift(a_ty, 1), shift(lhs, 1), mk::var(0, binder_name(motive, 0))));
        check_motive_is_type(sig, g, motive.body, budget);
      }
      check_in(sig, g, t->kids[1].body,
               instantiate(motive, {InstValue::of_term(lhs), InstValue::of_term(mk::refl())}),
               budget);
      return instantiate(motive,
                         {InstValue::of_term(rhs), InstValue::of_term(t->kids[2].body)});
    }

    case TermKind::DataRef: {
      const DataDecl* d = sig.find_data(t->name);
      if (!d) fail_here(ErrorCode::UnboundName, "unknown data type '" + t->name + "'", g);
      if (t->kids.size() != d->params.size())
        fail_here(ErrorCode::KindMismatch,
                  "data type '" + t->name + "' takes " + std::to_string(d->params.size()) +
                      " parameters, got " + std::to_string(t->kids.size()),
                  g);
      return fold_saturated(sig, g, t, data_former_type(*d), budget, "data type");
    }

    case TermKind::CtorApp: {
      const CtorSig* c = sig.find_ctor(t->name);
      if (!c) fail_here(ErrorCode::UnboundName, "unknown constructor '" + t->name + "'", g);
      const DataDecl* d = sig.find_data_of_ctor(t->name);
      const int np = static_cast<int>(d->params.size());
      const int na = static_cast<int>(c->args.size());
      if (t->nparams != np || static_cast<int>(t->kids.size()) != np + na)
        fail_here(ErrorCode::KindMismatch,
                  "constructor '" + t->name + "' takes " + std::to_string(np) +
                      " parameters and " + std::to_string(na) + " arguments, got " +
                      std::to_string(t->nparams) + " and " +
                      std::to_string(static_cast<int>(t->kids.size()) - t->nparams),
                  g);
      return fold_saturated(sig, g, t, ctor_type(*d, *c), budget, "constructor");
    }

    case TermKind::ElimApp: {
      const DataDecl* d = sig.find_data_of_elim(t->name);
      if (!d) fail_here(ErrorCode::UnboundName, "unknown eliminator '" + t->name + "'", g);
      const int np = static_cast<int>(d->params.size());
      const int nk = static_cast<int>(d->ctors.size());
      if (t->nparams != np || static_cast<int>(t->kids.size()) != np + 1 + nk + 1)
        fail_here(ErrorCode::KindMismatch,
                  "eliminator '" + t->name + "' takes " + std::to_string(np) +
                      " parameters, a motive, " + std::to_string(nk) +
                      " methods and a scrutinee; got " + std::to_string(t->kids.size()) +
                      " arguments",
                  g);
      return fold_saturated(sig, g, t, eliminator_type(*d), budget, "eliminator",
                            /*motive_kid=*/np);
    }

    case TermKind::Global: {
      const Def* def = sig.find_def(t->name);
      if (!def) fail_here(ErrorCode::UnboundName, "unknown global '" + t->name + "'", g);
      return def->type;
    }
  }
  fail_here(ErrorCode::KindMismatch, "unrecognized term form", g);
}

// ---- check ------------------------------------------------------------------

void check_in(const Signature& sig, Telescope& g, const TermPtr& t, const TermPtr& type,
              Budget& budget) {
  TermPtr tw = reveal(sig, g, type, budget);
  switch (t->kind) {
    case TermKind::Lam: {
      if (tw->kind != TermKind::Pi)
        fail_here(ErrorCode::TypeMismatch,
                  "a function literal cannot have type " + term_sketch(tw), g);
      const TermPtr& ann = t->kids[0].body;
      check_is_type(sig, g, ann, budget);
      if (!convertible(sig, g, ann, tw->kids[0].body, mk::universe(), budget))
        fail_here(ErrorCode::TypeMismatch,
                  "the lambda's domain annotation " + term_sketch(ann) +
                      " does not match the expected domain " + term_sketch(tw->kids[0].body),
                  g);
      CartGuard bind(g, binder_name(t->kids[1], 0), tw->kids[0].body);
      check_in(sig, g, t->kids[1].body, tw->kids[1].body, budget);
      return;
    }

    case TermKind::BridgeLam: {
      if (tw->kind != TermKind::BridgePi)
        fail_here(ErrorCode::TypeMismatch,
                  "a bridge literal cannot have type " + term_sketch(tw), g);
      AffGuard bind(g, binder_name(t->kids[0], 0));
      check_in(sig, g, t->kids[0].body, tw->kids[0].body, budget);
      return;
    }

    case TermKind::Pair: {
      if (tw->kind != TermKind::Sigma)
        fail_here(ErrorCode::TypeMismatch, "a pair cannot have type " + term_sketch(tw), g);
      check_in(sig, g, t->kids[0].body, tw->kids[0].body, budget);
      check_in(sig, g, t->kids[1].body, instantiate1(tw->kids[1], t->kids[0].body), budget);
      return;
    }

    case TermKind::Refl: {
      if (tw->kind != TermKind::Id)
        fail_here(ErrorCode::TypeMismatch, "refl cannot have type " + term_sketch(tw), g);
      if (!convertible(sig, g, tw->kids[1].body, tw->kids[2].body, tw->kids[0].body, budget))
        fail_here(ErrorCode::TypeMismatch,
                  "refl: the endpoints " + term_sketch(tw->kids[1].body) + " and " +
                      term_sketch(tw->kids[2].body) + " are not convertible",
                  g);
      return;
    }

    default: {
      TermPtr got = infer_in(sig, g, t, budget);
      if (!convertible(sig, g, got, type, mk::universe(), budget))
        fail_here(ErrorCode::TypeMismatch,
                  "expected type " + term_sketch(type) + ", but " + term_sketch(t) +
                      " has type " + term_sketch(got),
                  g);
      return;
    }
  }
}

}  // namespace

// ---- public entry points ----------------------------------------------------

TermPtr nm_step_unwrap(int x_avar, const TermPtr& gel_var) {
  TermPtr method =
      mk::lam(mk::bridge_pi("p", mk::gel_type(mk::nm(), 0)), "g'",
              mk::bridge_lam("y", mk::ung("z", mk::bridge_app(mk::var(2, "g'"), 0))));
  return mk::ext(method, x_avar, gel_var);
}

TermPtr infer(const Signature& sig, const Telescope& gamma, const TermPtr& t, Budget& budget) {
  Telescope g = gamma;
  return infer_in(sig, g, t, budget);
}

TermPtr infer(const Signature& sig, const Telescope& gamma, const TermPtr& t) {
  Budget budget;
  return infer(sig, gamma, t, budget);
}

void check(const Signature& sig, const Telescope& gamma, const TermPtr& t, const TermPtr& type,
           Budget& budget) {
  Telescope g = gamma;
  check_in(sig, g, t, type, budget);
}

void check(const Signature& sig, const Telescope& gamma, const TermPtr& t, const TermPtr& type) {
  Budget budget;
  check(sig, gamma, t, type, budget);
}

void check_telescope(const Signature& sig, const Telescope& gamma, Budget& budget) {
  Telescope prefix;
  for (int p = 0; p < gamma.size(); ++p) {
    const Entry& e = gamma.at(p);
    if (e.is_affine()) {
      prefix.push_affine(e.name);
      continue;
    }
    try {
      check_is_type(sig, prefix, e.type, budget);
    } catch (const DiagError& err) {
      if (err.diag.code == ErrorCode::BudgetExceeded) throw;
      fail(ErrorCode::IllFormedEntryType,
           "entry '" + e.name + "': " + err.diag.message, err.diag.span,
           telescope_sketch(prefix));
    }
    prefix.push_cartesian(e.name, e.type);
  }
}

void check_telescope(const Signature& sig, const Telescope& gamma) {
  Budget budget;
  check_telescope(sig, gamma, budget);
}

void check_declaration(Signature& sig, Declaration decl, long long budget_value) {
  const std::string decl_name =
      decl.kind == Declaration::Kind::Def ? decl.def.name : decl.data.name;
  try {
    Budget budget{budget_value};
    if (decl.kind == Declaration::Kind::Def) {
      Telescope empty;
      check_is_type(sig, empty, decl.def.type, budget);
      if (decl.def.body) check_in(sig, empty, decl.def.body, decl.def.type, budget);
      sig.add_def(std::move(decl.def));
      return;
    }

    DataDecl d = std::move(decl.data);
    if (d.elim_name.empty()) d.elim_name = "elim" + d.name;

    // Parameters form a telescope (they may not mention the data type, which
    // is not yet in scope here).
    Telescope params;
    for (const auto& [pname, ptype] : d.params) params.push_cartesian(pname, ptype);
    check_telescope(sig, params, budget);

    check_positivity(d);

    // Constructor argument types mention the data type, so they are checked
    // against a signature already extended with it; the original signature is
    // only replaced once everything succeeds.
    Signature extended = sig;
    extended.add_data(d);
    for (const CtorSig& c : d.ctors) {
      Telescope cg = params;
      for (const CtorArg& a : c.args) {
        check_is_type(extended, cg, a.type, budget);
        cg.push_cartesian(a.name, a.type);
      }
    }

    // Generated interface sanity: the constructor types and the eliminator
    // type are themselves types.
    Telescope empty;
    for (const CtorSig& c : d.ctors) check_is_type(extended, empty, ctor_type(d, c), budget);
    check_is_type(extended, empty, eliminator_type(d), budget);

    sig = std::move(extended);
  } catch (const DiagError& e) {
    Diagnostic out = e.diag;
    out.message = "in declaration '" + decl_name + "': " + out.message;
    throw DiagError(std::move(out));
  }
}

Signature check_signature(const std::vector<Declaration>& decls, long long budget_value) {
  Signature sig;
  for (const Declaration& d : decls) check_declaration(sig, d, budget_value);
  return sig;
}

}  // namespace npt
