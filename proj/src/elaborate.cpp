#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "npt/core_ops.hpp"
#include "npt/datatypes.hpp"
#include "npt/surface.hpp"

namespace npt::surface {
namespace {

struct Ctx {
  const Signature& sig;
  Telescope g;
  Budget& budget;
};

// Attach the node's span to any diagnostic escaping without one.
template <class F>
auto spanned(const Span& sp, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (DiagError& e) {
    if (e.diag.span.valid()) throw;
    Diagnostic d = e.diag;
    d.span = sp;
    throw DiagError(std::move(d));
  }
}

[[noreturn]] void fail_at(ErrorCode code, std::string msg, const Span& sp) {
  fail(code, std::move(msg), sp);
}

struct CartG {
  Telescope& g;
  CartG(Telescope& g_, std::string n, TermPtr ty) : g(g_) {
    g.push_cartesian(std::move(n), std::move(ty));
  }
  ~CartG() { g.pop(); }
  CartG(const CartG&) = delete;
  CartG& operator=(const CartG&) = delete;
};

struct AffG {
  Telescope& g;
  AffG(Telescope& g_, std::string n) : g(g_) { g.push_affine(std::move(n)); }
  ~AffG() { g.pop(); }
  AffG(const AffG&) = delete;
  AffG& operator=(const AffG&) = delete;
};

TermPtr elab_infer_in(Ctx& c, const SExprPtr& e);
TermPtr elab_check_in(Ctx& c, const SExprPtr& e, const TermPtr& expected);

TermPtr elab_type(Ctx& c, const SExprPtr& e) { return elab_check_in(c, e, mk::universe()); }

TermPtr expose(Ctx& c, const TermPtr& ty) { return reveal(c.sig, c.g, ty, c.budget); }

TermPtr kernel_infer(Ctx& c, const TermPtr& t, const Span& sp) {
  return spanned(sp, [&] { return infer(c.sig, c.g, t, c.budget); });
}

void kernel_check(Ctx& c, const TermPtr& t, const TermPtr& ty, const Span& sp) {
  spanned(sp, [&] { check(c.sig, c.g, t, ty, c.budget); });
}

// Conversion at U (the elaborator only ever compares types).
bool conv(Ctx& c, const TermPtr& a, const TermPtr& b) {
  return convertible(c.sig, c.g, a, b, mk::universe(), c.budget);
}

// ---- name resolution ----------------------------------------------------

struct Resolved {
  enum class K { CartVar, AffVar, DefName, DataName, CtorName, ElimName, None } k = K::None;
  int index = -1;                 // telescope hits
  const DataDecl* data = nullptr; // DataName/CtorName/ElimName
  const CtorSig* ctor = nullptr;  // CtorName
};

Resolved resolve(const Ctx& c, const std::string& n) {
  for (int i = 0; i < c.g.size(); ++i) {
    const Entry& e = c.g.by_index(i);
    if (e.name == n)
      return Resolved{e.is_affine() ? Resolved::K::AffVar : Resolved::K::CartVar, i, nullptr,
                      nullptr};
  }
  if (c.sig.find_def(n)) return Resolved{Resolved::K::DefName, -1, nullptr, nullptr};
  if (const DataDecl* d = c.sig.find_data(n))
    return Resolved{Resolved::K::DataName, -1, d, nullptr};
  if (const CtorSig* cs = c.sig.find_ctor(n))
    return Resolved{Resolved::K::CtorName, -1, c.sig.find_data_of_ctor(n), cs};
  if (const DataDecl* d = c.sig.find_data_of_elim(n))
    return Resolved{Resolved::K::ElimName, -1, d, nullptr};
  return Resolved{};
}

// The identifier must name an affine telescope entry.
int affine_index(Ctx& c, const std::string& n, const Span& sp) {
  Resolved r = resolve(c, n);
  switch (r.k) {
    case Resolved::K::AffVar:
      return r.index;
    case Resolved::K::CartVar:
      fail_at(ErrorCode::KindMismatch,
              "'" + n + "' is a cartesian variable; a name bound as (" + n + " : @I) is required",
              sp);
    case Resolved::K::None:
      fail_at(ErrorCode::UnboundName, "unbound name '" + n + "'", sp);
    default:
      fail_at(ErrorCode::KindMismatch,
              "'" + n + "' names a signature entry; a name bound as (" + n +
                  " : @I) is required",
              sp);
  }
}

// ---- saturated heads (data formers, constructors, eliminators) -----------

void flatten_spine(const SExprPtr& e, SExprPtr& head, std::vector<SExprPtr>& args) {
  if (e->kind == SKind::App) {
    flatten_spine(e->kids[0], head, args);
    args.push_back(e->kids[1]);
  } else {
    head = e;
  }
}

// Apply a head whose type is the Pi tower `tower` and whose saturated node
// takes exactly `arity` arguments, to `args` (|args| <= arity). Missing
// arguments are eta-expanded: fresh lambdas are wrapped around the node.
// `build` receives exactly `arity` core arguments (the given ones shifted
// under the fresh binders) and runs in the extended telescope.
TermPtr apply_tower(Ctx& c, TermPtr tower, const std::vector<SExprPtr>& args, int arity,
                    const std::string& head_name, const Span& sp,
                    const std::function<TermPtr(std::vector<TermPtr>)>& build) {
  std::vector<TermPtr> cores;
  cores.reserve(static_cast<std::size_t>(arity));
  for (const SExprPtr& a : args) {
    TermPtr w = expose(c, tower);
    if (w->kind != TermKind::Pi)
      fail_at(ErrorCode::NotAFunction, "'" + head_name + "' is applied to too many arguments",
              a->span);
    cores.push_back(elab_check_in(c, a, w->kids[0].body));
    tower = instantiate1(w->kids[1], cores.back());
  }
  int missing = arity - static_cast<int>(args.size());
  if (missing == 0) return build(std::move(cores));

  std::vector<std::pair<std::string, TermPtr>> binders;
  binders.reserve(static_cast<std::size_t>(missing));
  for (int j = 0; j < missing; ++j) {
    TermPtr w = whnf(c.sig, c.g, tower, c.budget);
    if (w->kind != TermKind::Pi)
      fail_at(ErrorCode::KindMismatch, "cannot eta-expand '" + head_name + "' here", sp);
    std::string bn = w->kids[1].names[0];
    if (bn.empty()) bn = "e" + std::to_string(j);
    binders.emplace_back(bn, w->kids[0].body);
    c.g.push_cartesian(bn, w->kids[0].body);
    tower = w->kids[1].body;
  }
  for (TermPtr& t : cores) t = shift(t, missing);
  for (int j = 0; j < missing; ++j) cores.push_back(mk::var(missing - 1 - j, binders[j].first));
  TermPtr out = build(std::move(cores));
  for (int j = 0; j < missing; ++j) c.g.pop();
  for (int j = missing - 1; j >= 0; --j)
    out = mk::lam(binders[j].second, binders[j].first, out);
  return out;
}

// Generic application loop for non-saturated heads: arguments are checked
// against the head's successive domains; a name argument selects bridge
// application.
TermPtr app_args(Ctx& c, TermPtr head, TermPtr head_ty,
                 std::vector<SExprPtr>::const_iterator it,
                 std::vector<SExprPtr>::const_iterator end) {
  for (; it != end; ++it) {
    const SExprPtr& a = *it;
    bool name_arg = a->kind == SKind::Ident && resolve(c, a->name).k == Resolved::K::AffVar;
    TermPtr w = expose(c, head_ty);
    if (name_arg) {
      int idx = affine_index(c, a->name, a->span);
      if (w->kind != TermKind::BridgePi)
        fail_at(ErrorCode::NotAFunction,
                "'" + a->name + "' is a name; only a bridge (a term of some '(x : @I) -o B') "
                "can be applied to it",
                a->span);
      head = mk::bridge_app(std::move(head), idx);
      head_ty = instantiate1_affine(w->kids[0], idx);
      continue;
    }
    if (w->kind == TermKind::BridgePi)
      fail_at(ErrorCode::KindMismatch, "a bridge expects a name argument", a->span);
    if (w->kind != TermKind::Pi)
      fail_at(ErrorCode::NotAFunction, "application of a non-function", a->span);
    TermPtr arg = elab_check_in(c, a, w->kids[0].body);
    head = mk::app(std::move(head), arg);
    head_ty = instantiate1(w->kids[1], arg);
  }
  return head;
}

TermPtr saturated_data(Ctx& c, const DataDecl& d, const std::vector<SExprPtr>& args,
                       const Span& sp) {
  int np = static_cast<int>(d.params.size());
  int k = static_cast<int>(args.size());
  if (k <= np)
    return apply_tower(c, data_former_type(d), args, np, d.name, sp,
                       [&](std::vector<TermPtr> cores) {
                         return mk::data_ref(d.name, std::move(cores));
                       });
  // Overapplied: build the full former, then let the generic loop diagnose.
  std::vector<SExprPtr> first(args.begin(), args.begin() + np);
  TermPtr node = apply_tower(c, data_former_type(d), first, np, d.name, sp,
                             [&](std::vector<TermPtr> cores) {
                               return mk::data_ref(d.name, std::move(cores));
                             });
  return app_args(c, node, mk::universe(), args.begin() + np, args.end());
}

TermPtr saturated_ctor(Ctx& c, const DataDecl& d, const CtorSig& ctor,
                       const std::vector<SExprPtr>& args, const TermPtr& expected,
                       const Span& sp) {
  int np = static_cast<int>(d.params.size());
  int na = static_cast<int>(ctor.args.size());
  int k = static_cast<int>(args.size());

  std::vector<TermPtr> params;
  if (np > 0) {
    // Parameters are elided in constructor applications; they come from the
    // expected type, so a parameterized constructor needs one, fully applied.
    if (!expected || k < na)
      fail_at(ErrorCode::TypeMismatch,
              "constructor '" + ctor.name + "' of the parameterized type '" + d.name +
                  "' needs an expected type here (write a fully applied constructor in a "
                  "position whose type is known)",
              sp);
    TermPtr w = expose(c, expected);
    if (w->kind != TermKind::DataRef || w->name != d.name)
      fail_at(ErrorCode::TypeMismatch,
              "constructor '" + ctor.name + "' builds a '" + d.name +
                  "', but the expected type here is '" + pretty(c.sig, c.g, expected) + "'",
              sp);
    for (const Scope& s : w->kids) params.push_back(s.body);
  }

  TermPtr tower = ctor_type(d, ctor);
  for (const TermPtr& p : params) {
    TermPtr w = whnf(c.sig, c.g, tower, c.budget);
    tower = instantiate1(w->kids[1], p);
  }

  auto build = [&](std::vector<TermPtr> cores) {
    int missing = na - std::min(k, na);
    std::vector<TermPtr> ps = params;
    for (TermPtr& p : ps) p = shift(p, missing);
    return mk::ctor_app(ctor.name, std::move(ps), std::move(cores));
  };
  if (k <= na) return apply_tower(c, tower, args, na, ctor.name, sp, build);
  std::vector<SExprPtr> first(args.begin(), args.begin() + na);
  TermPtr node = apply_tower(c, tower, first, na, ctor.name, sp, build);
  TermPtr node_ty = mk::data_ref(d.name, params);
  return app_args(c, node, node_ty, args.begin() + na, args.end());
}

TermPtr saturated_elim(Ctx& c, const DataDecl& d, const std::vector<SExprPtr>& args,
                       const Span& sp) {
  int np = static_cast<int>(d.params.size());
  int nc = static_cast<int>(d.ctors.size());
  int arity = np + 1 + nc + 1;
  int k = static_cast<int>(args.size());

  auto build = [&](std::vector<TermPtr> cores) {
    std::vector<TermPtr> params(cores.begin(), cores.begin() + np);
    TermPtr motive = cores[static_cast<std::size_t>(np)];
    std::vector<TermPtr> methods(cores.begin() + np + 1, cores.begin() + np + 1 + nc);
    TermPtr scrut = cores.back();
    return mk::elim_app(d.elim_name, std::move(params), std::move(motive), std::move(methods),
                        std::move(scrut));
  };
  if (k <= arity) return apply_tower(c, eliminator_type(d), args, arity, d.elim_name, sp, build);
  std::vector<SExprPtr> first(args.begin(), args.begin() + arity);
  TermPtr node = apply_tower(c, eliminator_type(d), first, arity, d.elim_name, sp, build);
  return app_args(c, node, kernel_infer(c, node, sp), args.begin() + arity, args.end());
}

// ---- lambda-shaped operands ----------------------------------------------

bool is_lam(const SExprPtr& e) { return e->kind == SKind::Lam; }

const SExprPtr& lam_body(const SExprPtr& e) { return e->kids.back(); }

// Verify an explicit cartesian annotation against the domain the position
// requires; affine annotations are vetoed where a cartesian binder is needed
// and vice versa.
void check_lam_annotation(Ctx& c, const SExprPtr& lam, const TermPtr& required_dom,
                          bool required_affine) {
  if (!lam->binder_annotated) return;
  if (required_affine) {
    if (!lam->binder_affine)
      fail_at(ErrorCode::KindMismatch,
              "this binder introduces a name; annotate it as (" + lam->name + " : @I)",
              lam->span);
    return;
  }
  if (lam->binder_affine)
    fail_at(ErrorCode::KindMismatch,
            "this binder introduces a cartesian variable of type '" +
                pretty(c.sig, c.g, required_dom) + "', not a name",
            lam->span);
  TermPtr ann = elab_type(c, lam->kids[0]);
  if (!conv(c, ann, required_dom))
    fail_at(ErrorCode::TypeMismatch,
            "binder annotation '" + pretty(c.sig, c.g, ann) + "' does not match the required '" +
                pretty(c.sig, c.g, required_dom) + "'",
            lam->kids[0]->span);
}

// ---- inference ------------------------------------------------------------

TermPtr elab_infer_in(Ctx& c, const SExprPtr& e) {
  switch (e->kind) {
    case SKind::Ident: {
      Resolved r = resolve(c, e->name);
      switch (r.k) {
        case Resolved::K::CartVar:
          return mk::var(r.index, e->name);
        case Resolved::K::AffVar:
          fail_at(ErrorCode::KindMismatch,
                  "'" + e->name + "' is a name, and names are not terms (did you mean 'name " +
                      e->name + "'?)",
                  e->span);
        case Resolved::K::DefName:
          return mk::global(e->name);
        case Resolved::K::DataName:
          return saturated_data(c, *r.data, {}, e->span);
        case Resolved::K::CtorName:
          return saturated_ctor(c, *r.data, *r.ctor, {}, nullptr, e->span);
        case Resolved::K::ElimName:
          return saturated_elim(c, *r.data, {}, e->span);
        case Resolved::K::None:
          fail_at(ErrorCode::UnboundName, "unbound name '" + e->name + "'", e->span);
      }
      break;
    }

    case SKind::Universe:
      return mk::universe();
    case SKind::NmType:
      return mk::nm();
    case SKind::ReflE:
      return mk::refl();
    case SKind::NameOf:
      return mk::cname(affine_index(c, e->name, e->span));

    case SKind::App: {
      SExprPtr head;
      std::vector<SExprPtr> args;
      flatten_spine(e, head, args);
      if (head->kind == SKind::Ident) {
        Resolved r = resolve(c, head->name);
        if (r.k == Resolved::K::DataName) return saturated_data(c, *r.data, args, head->span);
        if (r.k == Resolved::K::CtorName)
          return saturated_ctor(c, *r.data, *r.ctor, args, nullptr, head->span);
        if (r.k == Resolved::K::ElimName) return saturated_elim(c, *r.data, args, head->span);
      }
      TermPtr h = elab_infer_in(c, head);
      return app_args(c, h, kernel_infer(c, h, head->span), args.cbegin(), args.cend());
    }

    case SKind::Lam: {
      if (!e->binder_annotated)
        fail_at(ErrorCode::AmbiguousBinderKind,
                "cannot determine the binder kind of '" + e->name +
                    "' here: annotate it, or move the lambda into a position with a known type",
                e->span);
      if (e->binder_affine) {
        AffG bind(c.g, e->name);
        return mk::bridge_lam(e->name, elab_infer_in(c, lam_body(e)));
      }
      TermPtr dom = elab_type(c, e->kids[0]);
      CartG bind(c.g, e->name, dom);
      return mk::lam(dom, e->name, elab_infer_in(c, lam_body(e)));
    }

    case SKind::Pi: {
      TermPtr dom = elab_type(c, e->kids[0]);
      CartG bind(c.g, e->name, dom);
      return mk::pi(dom, e->name, elab_type(c, e->kids[1]));
    }
    case SKind::Arrow: {
      TermPtr dom = elab_type(c, e->kids[0]);
      return mk::arrow(dom, elab_type(c, e->kids[1]));
    }
    case SKind::BridgePi: {
      AffG bind(c.g, e->name);
      return mk::bridge_pi(e->name, elab_type(c, e->kids[0]));
    }
    case SKind::SigmaE: {
      TermPtr dom = elab_type(c, e->kids[0]);
      CartG bind(c.g, e->name, dom);
      return mk::sigma(dom, e->name, elab_type(c, e->kids[1]));
    }

    case SKind::PairE:
      return mk::pair(elab_infer_in(c, e->kids[0]), elab_infer_in(c, e->kids[1]));
    case SKind::FstE:
      return mk::fst(elab_infer_in(c, e->kids[0]));
    case SKind::SndE:
      return mk::snd(elab_infer_in(c, e->kids[0]));

    case SKind::IdE: {
      TermPtr ty = elab_type(c, e->kids[0]);
      return mk::id(ty, elab_check_in(c, e->kids[1], ty), elab_check_in(c, e->kids[2], ty));
    }

    case SKind::JE: {
      TermPtr proof = elab_infer_in(c, e->kids[1]);
      TermPtr pty = expose(c, kernel_infer(c, proof, e->kids[1]->span));
      if (pty->kind != TermKind::Id)
        fail_at(ErrorCode::KindMismatch,
                "J expects a proof of an identity type; this has type '" +
                    pretty(c.sig, c.g, pty) + "'",
                e->kids[1]->span);
      TermPtr a_ty = pty->kids[0].body;
      TermPtr lhs = pty->kids[1].body;
      const SExprPtr& m = e->kids[2];
      std::string bn = "b";
      std::string en = "e";
      TermPtr motive_body;
      if (is_lam(m) && is_lam(lam_body(m))) {
        const SExprPtr& inner = lam_body(m);
        bn = m->name;
        en = inner->name;
        check_lam_annotation(c, m, a_ty, false);
        CartG bindb(c.g, bn, a_ty);
        TermPtr e_ty = mk::id(shift(a_ty, 1), shift(lhs, 1), mk::var(0, bn));
        check_lam_annotation(c, inner, e_ty, false);
        CartG binde(c.g, en, e_ty);
        motive_body = elab_type(c, lam_body(inner));
      } else {
        TermPtr m_ty =
            mk::pi(a_ty, bn,
                   mk::pi(mk::id(shift(a_ty, 1), shift(lhs, 1), mk::var(0, bn)), en,
                          mk::universe()));
        TermPtr mc = elab_check_in(c, m, m_ty);
        motive_body = mk::app(mk::app(shift(mc, 2), mk::var(1, bn)), mk::var(0, en));
      }
      Scope motive{{bn, en}, motive_body};
      TermPtr base_ty =
          instantiate(motive, {InstValue::of_term(lhs), InstValue::of_term(mk::refl())});
      TermPtr base = elab_check_in(c, e->kids[0], base_ty);
      return mk::j(bn, en, motive_body, base, proof);
    }

    case SKind::GelT: {
      int idx = affine_index(c, e->name, e->span);
      return mk::gel_type(elab_type(c, e->kids[0]), idx);
    }
    case SKind::GelI: {
      int idx = affine_index(c, e->name, e->span);
      return mk::gel_intro(elab_infer_in(c, e->kids[0]), idx);
    }

    case SKind::UngE: {
      const SExprPtr& b = e->kids[0];
      if (is_lam(b)) {
        if (b->binder_annotated && !b->binder_affine)
          fail_at(ErrorCode::KindMismatch,
                  "ung binds a name; annotate the binder as (" + b->name + " : @I)", b->span);
        AffG bind(c.g, b->name);
        return mk::ung(b->name, elab_infer_in(c, lam_body(b)));
      }
      TermPtr core = elab_infer_in(c, b);
      AffG bind(c.g, "x");
      return mk::ung("x", mk::bridge_app(shift(core, 1), 0));
    }
    case SKind::NuE: {
      AffG bind(c.g, e->name);
      return mk::ung(e->name, elab_infer_in(c, e->kids[0]));
    }

    case SKind::ExtE: {
      int idx = affine_index(c, e->name, e->span);
      TermPtr method = elab_infer_in(c, e->kids[0]);
      TermPtr mty = expose(c, kernel_infer(c, method, e->kids[0]->span));
      if (mty->kind != TermKind::Pi)
        fail_at(ErrorCode::NotAFunction,
                "the ext method must be a function from bridges; this has type '" +
                    pretty(c.sig, c.g, mty) + "'",
                e->kids[0]->span);
      TermPtr dw = expose(c, mty->kids[0].body);
      if (dw->kind != TermKind::BridgePi)
        fail_at(ErrorCode::KindMismatch,
                "the ext method must consume a bridge '(y : @I) -o A'; its domain is '" +
                    pretty(c.sig, c.g, mty->kids[0].body) + "'",
                e->kids[0]->span);
      TermPtr arg = elab_check_in(c, e->kids[1], instantiate1_affine(dw->kids[0], idx));
      return mk::ext(method, idx, arg);
    }

    case SKind::IndNmE: {
      int idx = affine_index(c, e->name, e->span);
      TermPtr scrut = elab_check_in(c, e->kids[0], mk::nm());
      const SExprPtr& m = e->kids[3];
      std::string zn = "z";
      TermPtr motive_body;
      if (is_lam(m)) {
        zn = m->name;
        check_lam_annotation(c, m, mk::nm(), false);
        CartG bind(c.g, zn, mk::nm());
        motive_body = elab_type(c, lam_body(m));
      } else {
        TermPtr mc = elab_check_in(c, m, mk::arrow(mk::nm(), mk::universe()));
        motive_body = mk::app(shift(mc, 1), mk::var(0, zn));
      }
      Scope motive{{zn}, motive_body};
      TermPtr base = elab_check_in(c, e->kids[1], instantiate1(motive, mk::cname(idx)));

      const SExprPtr& st = e->kids[2];
      std::string gn = "g";
      TermPtr step_body;
      TermPtr g_ty = mk::gel_type(mk::nm(), idx);
      if (is_lam(st)) {
        gn = st->name;
        check_lam_annotation(c, st, g_ty, false);
        CartG bind(c.g, gn, g_ty);
        Scope lifted{{zn}, shift(motive_body, 1, 1)};
        TermPtr expected = instantiate1(lifted, nm_step_unwrap(idx + 1, mk::var(0, gn)));
        step_body = elab_check_in(c, lam_body(st), expected);
      } else {
        TermPtr sc = elab_infer_in(c, st);
        CartG bind(c.g, gn, g_ty);
        step_body = mk::app(shift(sc, 1), mk::var(0, gn));
      }
      return mk::ind_nm(idx, scrut, zn, motive_body, base, gn, step_body);
    }
  }
  fail_at(ErrorCode::SyntaxError, "unhandled expression form", e->span);
}

// ---- checking -------------------------------------------------------------

TermPtr elab_check_in(Ctx& c, const SExprPtr& e, const TermPtr& expected) {
  switch (e->kind) {
    case SKind::Lam: {
      TermPtr w = expose(c, expected);
      if (w->kind == TermKind::Pi) {
        TermPtr required_dom = w->kids[0].body;
        check_lam_annotation(c, e, required_dom, false);
        TermPtr dom = e->binder_annotated ? elab_type(c, e->kids[0]) : required_dom;
        CartG bind(c.g, e->name, required_dom);
        TermPtr body = elab_check_in(c, lam_body(e), w->kids[1].body);
        return mk::lam(dom, e->name, body);
      }
      if (w->kind == TermKind::BridgePi) {
        check_lam_annotation(c, e, nullptr, true);
        AffG bind(c.g, e->name);
        TermPtr body = elab_check_in(c, lam_body(e), w->kids[0].body);
        return mk::bridge_lam(e->name, body);
      }
      if (!e->binder_annotated)
        fail_at(ErrorCode::AmbiguousBinderKind,
                "cannot determine the binder kind of '" + e->name + "': the expected type '" +
                    pretty(c.sig, c.g, expected) + "' is not a function or bridge type",
                e->span);
      break;  // fall through to the infer-then-check path
    }

    case SKind::PairE: {
      TermPtr w = expose(c, expected);
      if (w->kind == TermKind::Sigma) {
        TermPtr first = elab_check_in(c, e->kids[0], w->kids[0].body);
        TermPtr second = elab_check_in(c, e->kids[1], instantiate1(w->kids[1], first));
        return mk::pair(first, second);
      }
      break;
    }

    case SKind::ReflE: {
      TermPtr w = expose(c, expected);
      if (w->kind != TermKind::Id)
        fail_at(ErrorCode::TypeMismatch,
                "refl proves an identity type; the expected type here is '" +
                    pretty(c.sig, c.g, expected) + "'",
                e->span);
      TermPtr t = mk::refl();
      kernel_check(c, t, expected, e->span);
      return t;
    }

    case SKind::GelI: {
      TermPtr w = expose(c, expected);
      if (w->kind == TermKind::GelType) {
        int idx = affine_index(c, e->name, e->span);
        if (idx != w->avar)
          fail_at(ErrorCode::TypeMismatch,
                  "gel at '" + e->name + "' cannot have the expected type '" +
                      pretty(c.sig, c.g, expected) + "' (different name)",
                  e->span);
        TermPtr content = elab_check_in(c, e->kids[0], w->kids[0].body);
        TermPtr t = mk::gel_intro(content, idx);
        kernel_check(c, t, expected, e->span);
        return t;
      }
      break;
    }

    case SKind::Ident: {
      Resolved r = resolve(c, e->name);
      if (r.k == Resolved::K::CtorName) {
        TermPtr t = saturated_ctor(c, *r.data, *r.ctor, {}, expected, e->span);
        kernel_check(c, t, expected, e->span);
        return t;
      }
      break;
    }

    case SKind::App: {
      SExprPtr head;
      std::vector<SExprPtr> args;
      flatten_spine(e, head, args);
      if (head->kind == SKind::Ident) {
        Resolved r = resolve(c, head->name);
        if (r.k == Resolved::K::CtorName) {
          TermPtr t = saturated_ctor(c, *r.data, *r.ctor, args, expected, head->span);
          kernel_check(c, t, expected, e->span);
          return t;
        }
      }
      break;
    }

    default:
      break;
  }

  TermPtr t = elab_infer_in(c, e);
  kernel_check(c, t, expected, e->span);
  return t;
}

}  // namespace

// ---- public entry points ----------------------------------------------------

TermPtr elab_check(const Signature& sig, const Telescope& gamma, const SExprPtr& e,
                   const TermPtr& expected, Budget& budget) {
  Ctx c{sig, gamma, budget};
  return elab_check_in(c, e, expected);
}

TermPtr elab_infer(const Signature& sig, const Telescope& gamma, const SExprPtr& e,
                   Budget& budget) {
  Ctx c{sig, gamma, budget};
  return elab_infer_in(c, e);
}

Declaration elab_decl(const Signature& sig, const SurfaceDecl& sd, long long budget_value) {
  Budget budget{budget_value};
  switch (sd.kind) {
    case SurfaceDecl::Kind::Def: {
      Ctx c{sig, {}, budget};
      TermPtr ty = spanned(sd.span, [&] { return elab_type(c, sd.type); });
      TermPtr body = spanned(sd.span, [&] { return elab_check_in(c, sd.body, ty); });
      Def d;
      d.name = sd.name;
      d.type = std::move(ty);
      d.body = std::move(body);
      d.golden = sd.golden;
      return Declaration::of_def(std::move(d));
    }
    case SurfaceDecl::Kind::Postulate: {
      Ctx c{sig, {}, budget};
      Def d;
      d.name = sd.name;
      d.type = spanned(sd.span, [&] { return elab_type(c, sd.type); });
      d.body = nullptr;
      return Declaration::of_def(std::move(d));
    }
    case SurfaceDecl::Kind::Data:
      break;
  }

  DataDecl d;
  d.name = sd.name;
  d.elim_name = "elim" + sd.name;
  Ctx c{sig, {}, budget};
  for (const SurfaceParam& p : sd.params) {
    TermPtr ty = spanned(p.span, [&] { return elab_type(c, p.type); });
    d.params.emplace_back(p.name, ty);
    c.g.push_cartesian(p.name, ty);
  }

  // Constructor types may mention the data type recursively, so they are
  // elaborated against a stub signature carrying the former (no constructors
  // yet). check_declaration re-checks everything against the real one.
  Signature stub = sig;
  spanned(sd.span, [&] { stub.add_data(DataDecl{d.name, d.params, {}, d.elim_name}); });
  Ctx cc{stub, c.g, budget};

  int np = static_cast<int>(d.params.size());
  for (const SurfaceCtorDecl& sc : sd.ctors) {
    TermPtr ct = spanned(sc.span, [&] { return elab_type(cc, sc.type); });
    CtorSig cs;
    cs.name = sc.name;
    cs.data = d.name;
    TermPtr cur = ct;
    while (cur->kind == TermKind::Pi) {
      CtorArg a;
      a.name = cur->kids[1].names[0];
      a.type = cur->kids[0].body;
      cs.args.push_back(std::move(a));
      cur = cur->kids[1].body;
    }
    int na = static_cast<int>(cs.args.size());
    std::vector<TermPtr> self_params;
    for (int j = 0; j < np; ++j)
      self_params.push_back(mk::var(na + np - 1 - j, d.params[static_cast<std::size_t>(j)].first));
    if (!alpha_eq(cur, mk::data_ref(d.name, self_params)))
      fail_at(ErrorCode::KindMismatch,
              "constructor '" + sc.name + "' must end in '" + d.name +
                  "' applied to the data parameters in declaration order",
              sc.span);
    d.ctors.push_back(std::move(cs));
  }
  return Declaration::of_data(std::move(d));
}

void check_source(Signature& sig, const std::string& text, const std::string& filename,
                  long long default_budget) {
  ParsedFile pf = parse_file(text, filename);
  long long budget_value = pf.budget > 0 ? pf.budget : default_budget;
  for (const SurfaceDecl& sd : pf.decls) {
    Declaration d = elab_decl(sig, sd, budget_value);
    try {
      check_declaration(sig, std::move(d), budget_value);
    } catch (DiagError& e) {
      if (e.diag.span.valid()) throw;
      Diagnostic diag = e.diag;
      diag.span = sd.span;
      throw DiagError(std::move(diag));
    }
  }
}

}  // namespace npt::surface
