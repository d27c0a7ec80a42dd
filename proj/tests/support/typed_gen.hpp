#pragma once

// Generator of genuinely well-typed core terms over a given signature,
// used by property tests: restriction soundness, weakening, subject
// reduction, strategy agreement, and the freshness oracle runs.
//
// `term` is type-directed: given a target type it builds an inhabitant from
// introduction forms, matching variables/globals, or elimination forms whose
// premises it generates recursively. It returns nullptr when it fails to
// find an inhabitant (callers retry with another target); everything it does
// return type-checks by construction, which the property tests re-verify.

#include <optional>
#include <string>
#include <vector>

#include "gen.hpp"
#include "npt/datatypes.hpp"
#include "npt/eval.hpp"
#include "npt/typecheck.hpp"

namespace npt::testing {

// Reindex a term that is fresh at `pos` into restrict(gamma, pos): the
// inverse of unrestrict.
inline std::optional<TermPtr> to_restricted(const Telescope& gamma, int pos, const TermPtr& t) {
  try {
    TermPtr cap = capture(gamma, pos, t);
    return strengthen(cap->kids[0].body, 0);
  } catch (const DiagError&) {
    return std::nullopt;
  }
}

class TypedGen {
 public:
  TypedGen(Rng& rng, const Signature& sig) : rng_(rng), sig_(sig) {}

  // A term of the given type in gamma, or nullptr.
  TermPtr term(Telescope gamma, const TermPtr& type, int depth) {
    return gen_term(gamma, type, depth);
  }

  // A random type in gamma (always succeeds; falls back to Nm).
  TermPtr type(Telescope gamma, int depth) { return gen_type(gamma, depth); }

 private:
  Rng& rng_;
  const Signature& sig_;

  Budget fresh_budget() const { return Budget{200'000}; }

  TermPtr safe_whnf(const Telescope& g, const TermPtr& t) {
    try {
      Budget b = fresh_budget();
      return whnf(sig_, g, t, b);
    } catch (const DiagError&) {
      return nullptr;
    }
  }

  bool types_equal(const Telescope& g, const TermPtr& a, const TermPtr& b) {
    try {
      Budget bud = fresh_budget();
      return convertible(sig_, g, a, b, mk::universe(), bud);
    } catch (const DiagError&) {
      return false;
    }
  }

  // Candidate filter: composites must actually check at the target. Mostly
  // this is true by construction, but bidirectionality makes some shapes
  // unheckable even when semantically fine (a beta-redex whose function body
  // is check-mode only, a dependent pair in an inferring position); those are
  // discarded and another production is tried.
  bool validates(const Telescope& g, const TermPtr& t, const TermPtr& w) {
    try {
      Budget bud = fresh_budget();
      check(sig_, g, t, w, bud);
      return true;
    } catch (const DiagError&) {
      return false;
    }
  }

  std::vector<int> affine_positions(const Telescope& g) {
    std::vector<int> out;
    for (int p = 0; p < g.size(); ++p)
      if (g.at(p).is_affine()) out.push_back(p);
    return out;
  }

  std::vector<TermPtr> atoms(const Telescope& g, const TermPtr& w) {
    std::vector<TermPtr> out;
    for (int i = 0; i < g.size(); ++i) {
      const Entry& e = g.by_index(i);
      if (e.is_affine()) continue;
      if (types_equal(g, shift(e.type, i + 1), w)) out.push_back(mk::var(i, e.name));
    }
    for (const auto& item : sig_.items()) {
      if (item.kind != Signature::Item::Kind::Def) continue;
      const Def* d = sig_.find_def(item.name);
      if (d && types_equal(g, d->type, w)) out.push_back(mk::global(item.name));
    }
    return out;
  }

  TermPtr gen_term(Telescope& g, const TermPtr& type, int depth) {
    if (depth < -8) return nullptr;  // circuit breaker
    TermPtr w = safe_whnf(g, type);
    if (!w) return nullptr;

    std::vector<TermPtr> at = atoms(g, w);
    if (depth <= 0 && !at.empty() && rng_.chance(0.8))
      return at[rng_.below((int)at.size())];

    for (int attempt = 0; attempt < 3; ++attempt) {
      TermPtr t = (depth > 0 && rng_.chance(0.3)) ? gen_elim(g, w, depth) : gen_intro(g, w, depth);
      if (t && validates(g, t, w)) return t;
    }
    if (!at.empty()) return at[rng_.below((int)at.size())];
    TermPtr t = gen_intro(g, w, depth);
    return (t && validates(g, t, w)) ? t : nullptr;
  }

  TermPtr gen_intro(Telescope& g, const TermPtr& w, int depth) {
    switch (w->kind) {
      case TermKind::Pi: {
        std::string n = "q" + std::to_string(g.size());
        g.push_cartesian(n, w->kids[0].body);
        TermPtr body = gen_term(g, w->kids[1].body, depth - 1);
        g.pop();
        return body ? mk::lam(w->kids[0].body, n, body) : nullptr;
      }
      case TermKind::BridgePi: {
        std::string n = "r" + std::to_string(g.size());
        g.push_affine(n);
        TermPtr body = gen_term(g, w->kids[0].body, depth - 1);
        g.pop();
        return body ? mk::bridge_lam(n, body) : nullptr;
      }
      case TermKind::Sigma: {
        TermPtr a = gen_term(g, w->kids[0].body, depth - 1);
        if (!a) return nullptr;
        TermPtr b = gen_term(g, instantiate1(w->kids[1], a), depth - 1);
        return b ? mk::pair(a, b) : nullptr;
      }
      case TermKind::NmType: {
        std::vector<int> aff = affine_positions(g);
        if (aff.empty()) return nullptr;
        return mk::cname(g.index_of(aff[rng_.below((int)aff.size())]));
      }
      case TermKind::Universe:
        return gen_type(g, depth - 1);
      case TermKind::GelType: {
        int pos = g.position_of(w->avar);
        std::optional<TermPtr> content_ty = to_restricted(g, pos, w->kids[0].body);
        if (!content_ty) return nullptr;
        Telescope rg = restrict(g, pos);
        TermPtr c = gen_term(rg, *content_ty, depth - 1);
        return c ? mk::gel_intro(unrestrict(g, pos, c), w->avar) : nullptr;
      }
      case TermKind::Id: {
        try {
          Budget bud = fresh_budget();
          if (convertible(sig_, g, w->kids[1].body, w->kids[2].body, w->kids[0].body, bud))
            return mk::refl();
        } catch (const DiagError&) {
        }
        return nullptr;
      }
      case TermKind::DataRef: {
        const DataDecl* d = sig_.find_data(w->name);
        if (!d || d->ctors.empty()) return nullptr;
        // At exhausted depth only non-recursive constructors keep this finite.
        std::vector<const CtorSig*> pool;
        for (const CtorSig& c : d->ctors) {
          bool rec = false;
          for (const CtorArg& a : c.args)
            if (a.cls != ArgClass::Const) rec = true;
          if (depth > 0 || !rec) pool.push_back(&c);
        }
        if (pool.empty()) return nullptr;
        const CtorSig* c = pool[rng_.below((int)pool.size())];
        std::vector<TermPtr> params;
        for (const auto& k : w->kids) params.push_back(k.body);
        // Walk the constructor's Pi tower past the parameters, then generate
        // each argument at its instantiated type.
        TermPtr tower = ctor_type(*d, *c);
        for (const TermPtr& p : params) {
          tower = safe_whnf(g, tower);
          if (!tower || tower->kind != TermKind::Pi) return nullptr;
          tower = instantiate1(tower->kids[1], p);
        }
        std::vector<TermPtr> args;
        for (size_t i = 0; i < c->args.size(); ++i) {
          tower = safe_whnf(g, tower);
          if (!tower || tower->kind != TermKind::Pi) return nullptr;
          TermPtr a = gen_term(g, tower->kids[0].body, depth - 1);
          if (!a) return nullptr;
          args.push_back(a);
          tower = instantiate1(tower->kids[1], a);
        }
        return mk::ctor_app(c->name, params, args);
      }
      default:
        return nullptr;
    }
  }

  TermPtr gen_elim(Telescope& g, const TermPtr& w, int depth) {
    switch (rng_.below(3)) {
      case 0: {  // application
        TermPtr dom = gen_type(g, 0);
        TermPtr f = gen_term(g, mk::arrow(dom, w), depth - 1);
        if (!f) return nullptr;
        TermPtr a = gen_term(g, dom, depth - 1);
        return a ? mk::app(f, a) : nullptr;
      }
      case 1: {  // bridge application at a name the target type is fresh for
        std::vector<int> ok;
        for (int p : affine_positions(g))
          if (is_fresh(g, p, w)) ok.push_back(p);
        if (ok.empty()) return nullptr;
        int pos = ok[rng_.below((int)ok.size())];
        std::optional<TermPtr> w_r = to_restricted(g, pos, w);
        if (!w_r) return nullptr;
        Telescope rg = restrict(g, pos);
        TermPtr fn_r = gen_term(rg, mk::bridge_pi("y", shift(*w_r, 1)), depth - 1);
        if (!fn_r) return nullptr;
        return mk::bridge_app(unrestrict(g, pos, fn_r), g.index_of(pos));
      }
      default: {  // ung of a gel at a fresh bound name
        std::string n = "s" + std::to_string(g.size());
        g.push_affine(n);
        TermPtr body = gen_term(g, mk::gel_type(shift(w, 1), 0), depth - 1);
        g.pop();
        return body ? mk::ung(n, body) : nullptr;
      }
    }
  }

  TermPtr gen_type(Telescope& g, int depth) {
    const int roll = depth > 0 ? rng_.below(8) : rng_.below(3);
    switch (roll) {
      case 0:
        return mk::nm();
      case 1:
        if (sig_.find_data("Nat")) return mk::data_ref("Nat");
        return mk::nm();
      case 2: {
        // A postulated type from the signature, when one exists.
        std::vector<TermPtr> tys;
        for (const auto& item : sig_.items()) {
          if (item.kind != Signature::Item::Kind::Def) continue;
          const Def* d = sig_.find_def(item.name);
          if (d && d->type->kind == TermKind::Universe) tys.push_back(mk::global(item.name));
        }
        if (!tys.empty()) return tys[rng_.below((int)tys.size())];
        return mk::nm();
      }
      case 3: {
        TermPtr dom = gen_type(g, depth - 1);
        std::string n = "q" + std::to_string(g.size());
        g.push_cartesian(n, dom);
        TermPtr cod = gen_type(g, depth - 1);
        g.pop();
        return mk::pi(dom, n, cod);
      }
      case 4: {
        TermPtr dom = gen_type(g, depth - 1);
        std::string n = "q" + std::to_string(g.size());
        g.push_cartesian(n, dom);
        TermPtr cod = gen_type(g, depth - 1);
        g.pop();
        return mk::sigma(dom, n, cod);
      }
      case 5: {
        std::string n = "r" + std::to_string(g.size());
        g.push_affine(n);
        TermPtr cod = gen_type(g, depth - 1);
        g.pop();
        return mk::bridge_pi(n, cod);
      }
      case 6: {
        std::vector<int> aff = affine_positions(g);
        if (aff.empty()) return mk::nm();
        int pos = aff[rng_.below((int)aff.size())];
        Telescope rg = restrict(g, pos);
        TermPtr content = gen_type(rg, depth - 1);
        return mk::gel_type(unrestrict(g, pos, content), g.index_of(pos));
      }
      default: {
        TermPtr a = gen_term(g, mk::nm(), depth - 1);
        TermPtr b = rng_.chance(0.5) ? a : gen_term(g, mk::nm(), depth - 1);
        if (!a || !b) return mk::nm();
        return mk::id(mk::nm(), a, b);
      }
    }
  }
};

}  // namespace npt::testing
