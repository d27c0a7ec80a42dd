#include "npt/eval.hpp"

#include "npt/datatypes.hpp"

namespace npt {

Strategy strategy_of_name(const std::string& s) {
  if (s == "lo") return Strategy::LeftOuter;
  if (s == "ri") return Strategy::RightInner;
  fail(ErrorCode::SyntaxError, "unknown strategy '" + s + "' (expected lo or ri)");
}

namespace {

// Extend gamma with the binders of kid `i` of t (no-op for arity-0 scopes).
// Cartesian binder types are irrelevant to reduction; they are left null.
void push_scope_entries(Telescope& gamma, const Term& t, int i) {
  const Scope& s = t.kids[i];
  bool affine = scope_is_affine(t.kind, i);
  for (const std::string& n : s.names) {
    if (affine)
      gamma.push_affine(n);
    else
      gamma.push_cartesian(n, nullptr);
  }
}

void pop_scope_entries(Telescope& gamma, const Term& t, int i) {
  for (int b = 0; b < t.kids[i].arity(); ++b) gamma.pop();
}

bool capturable(const Telescope& gamma, int pos, const TermPtr& t) {
  try {
    capture(gamma, pos, t);
    return true;
  } catch (const DiagError& e) {
    if (e.diag.code == ErrorCode::CaptureViolation) return false;
    throw;
  }
}

}  // namespace

std::optional<std::string> root_rule(const Signature& sig, const Telescope& gamma,
                                     const TermPtr& t) {
  switch (t->kind) {
    case TermKind::App:
      if (t->kids[0].body->kind == TermKind::Lam) return "beta";
      return std::nullopt;
    case TermKind::BridgeApp:
      if (t->kids[0].body->kind == TermKind::BridgeLam) return "bridge-beta";
      return std::nullopt;
    case TermKind::Fst:
      if (t->kids[0].body->kind == TermKind::Pair) return "fst-beta";
      return std::nullopt;
    case TermKind::Snd:
      if (t->kids[0].body->kind == TermKind::Pair) return "snd-beta";
      return std::nullopt;
    case TermKind::J:
      if (t->kids[2].body->kind == TermKind::Refl) return "j-beta";
      return std::nullopt;
    case TermKind::Global: {
      const Def* d = sig.find_def(t->name);
      if (d && !d->is_postulate()) return "delta " + t->name;
      return std::nullopt;
    }
    case TermKind::Ext:
      if (capturable(gamma, gamma.position_of(t->avar), t->kids[1].body)) return "ext-beta";
      return std::nullopt;
    case TermKind::Ung: {
      const TermPtr& body = t->kids[0].body;
      if (body->kind == TermKind::GelIntro && body->avar == 0 &&
          strengthen(body->kids[0].body, 0))
        return "gel-beta";
      return std::nullopt;
    }
    case TermKind::IndNm: {
      const TermPtr& s = t->kids[0].body;
      if (s->kind == TermKind::CName && s->avar == t->avar) return "nm-beta0";
      if (is_fresh(gamma, gamma.position_of(t->avar), s)) return "nm-beta1";
      return std::nullopt;
    }
    case TermKind::ElimApp: {
      const TermPtr& s = t->kids.back().body;
      if (s->kind != TermKind::CtorApp) return std::nullopt;
      const DataDecl* d = sig.find_data_of_elim(t->name);
      if (d && d->find_ctor(s->name)) return "iota " + s->name;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

TermPtr fire_root(const Signature& sig, const Telescope& gamma, const TermPtr& t,
                  const std::string& rule) {
  switch (t->kind) {
    case TermKind::App:
      return instantiate1(t->kids[0].body->kids[1], t->kids[1].body);
    case TermKind::BridgeApp:
      return instantiate1_affine(t->kids[0].body->kids[0], t->avar);
    case TermKind::Fst:
      return t->kids[0].body->kids[0].body;
    case TermKind::Snd:
      return t->kids[0].body->kids[1].body;
    case TermKind::J:
      return t->kids[1].body;
    case TermKind::Global:
      return sig.find_def(t->name)->body;
    case TermKind::Ext: {
      int pos = gamma.position_of(t->avar);
      TermPtr cap = unrestrict(gamma, pos, capture(gamma, pos, t->kids[1].body));
      return mk::bridge_app(mk::app(t->kids[0].body, cap), t->avar);
    }
    case TermKind::Ung:
      return *strengthen(t->kids[0].body->kids[0].body, 0);
    case TermKind::IndNm:
      if (rule == "nm-beta0") return t->kids[2].body;
      return instantiate1(t->kids[3], mk::gel_intro(t->kids[0].body, t->avar));
    case TermKind::ElimApp:
      return *iota_reduce(sig, t);
    default:
      fail(ErrorCode::KindMismatch, "fire_root: '" + rule + "' does not apply here");
  }
}

namespace {

bool find_redex(const Signature& sig, Telescope& gamma, const TermPtr& t, Strategy st,
                std::vector<int>& path, std::string& rule) {
  auto descend = [&](int i) {
    path.push_back(i);
    push_scope_entries(gamma, *t, i);
    bool hit = find_redex(sig, gamma, t->kids[i].body, st, path, rule);
    pop_scope_entries(gamma, *t, i);
    if (!hit) path.pop_back();
    return hit;
  };
  if (st == Strategy::LeftOuter) {
    if (auto r = root_rule(sig, gamma, t)) {
      rule = *r;
      return true;
    }
    for (int i = 0; i < static_cast<int>(t->kids.size()); ++i)
      if (descend(i)) return true;
    return false;
  }
  for (int i = static_cast<int>(t->kids.size()) - 1; i >= 0; --i)
    if (descend(i)) return true;
  if (auto r = root_rule(sig, gamma, t)) {
    rule = *r;
    return true;
  }
  return false;
}

TermPtr rewrite_at(const Signature& sig, Telescope& gamma, const TermPtr& t,
                   const std::vector<int>& path, size_t i, const std::string& rule) {
  if (i == path.size()) {
    auto r = root_rule(sig, gamma, t);
    if (!r || *r != rule)
      fail(ErrorCode::KindMismatch,
           "trace replay: expected a '" + rule + "' redex at the recorded path");
    return fire_root(sig, gamma, t, rule);
  }
  int k = path[i];
  if (k < 0 || k >= static_cast<int>(t->kids.size()))
    fail(ErrorCode::KindMismatch, "trace replay: path leaves the term");
  push_scope_entries(gamma, *t, k);
  TermPtr nb = rewrite_at(sig, gamma, t->kids[k].body, path, i + 1, rule);
  pop_scope_entries(gamma, *t, k);
  Term out = *t;
  out.kids[k].body = std::move(nb);
  return std::make_shared<const Term>(std::move(out));
}

}  // namespace

TermPtr normalize(const Signature& sig, const Telescope& gamma, TermPtr t, Strategy strategy,
                  Budget& budget, ReductionTrace* trace) {
  Telescope g = gamma;
  for (;;) {
    std::vector<int> path;
    std::string rule;
    if (!find_redex(sig, g, t, strategy, path, rule)) return t;
    budget.charge();
    t = rewrite_at(sig, g, t, path, 0, rule);
    if (trace) trace->steps.push_back({rule, std::move(path)});
  }
}

TermPtr normalize(const Signature& sig, const Telescope& gamma, TermPtr t, Strategy strategy) {
  Budget b;
  return normalize(sig, gamma, std::move(t), strategy, b, nullptr);
}

TermPtr replay(const Signature& sig, const Telescope& gamma, TermPtr t,
               const ReductionTrace& trace) {
  Telescope g = gamma;
  for (const TraceStep& s : trace.steps) t = rewrite_at(sig, g, t, s.path, 0, s.rule);
  return t;
}

TermPtr whnf(const Signature& sig, const Telescope& gamma, TermPtr t, Budget& budget) {
  for (;;) {
    if (auto r = root_rule(sig, gamma, t)) {
      budget.charge();
      t = fire_root(sig, gamma, t, *r);
      continue;
    }
    int head;
    switch (t->kind) {
      case TermKind::App:
      case TermKind::BridgeApp:
      case TermKind::Fst:
      case TermKind::Snd:
      case TermKind::Ung:
      case TermKind::IndNm:
        head = 0;
        break;
      case TermKind::J:
        head = 2;
        break;
      case TermKind::ElimApp:
        head = static_cast<int>(t->kids.size()) - 1;
        break;
      default:
        return t;
    }
    Telescope g2 = gamma;
    push_scope_entries(g2, *t, head);
    TermPtr h = whnf(sig, g2, t->kids[head].body, budget);
    if (h == t->kids[head].body) return t;
    Term out = *t;
    out.kids[head].body = std::move(h);
    t = std::make_shared<const Term>(std::move(out));
  }
}

TermPtr whnf(const Signature& sig, const Telescope& gamma, TermPtr t) {
  Budget b;
  return whnf(sig, gamma, std::move(t), b);
}

TermPtr reveal(const Signature& sig, const Telescope& gamma, const TermPtr& t, Budget& budget) {
  TermPtr w = whnf(sig, gamma, t, budget);
  if (w->kind == TermKind::Ext || w->kind == TermKind::IndNm)
    return normalize(sig, gamma, t, Strategy::LeftOuter, budget);
  return w;
}

namespace {

// Reindex a gamma-term that is fresh for the entry at pos into
// restrict(gamma, pos); nullopt when the term is not actually fresh.
std::optional<TermPtr> to_restricted(const Telescope& gamma, int pos, const TermPtr& t) {
  try {
    TermPtr cap = capture(gamma, pos, t);
    return strengthen(cap->kids[0].body, 0);
  } catch (const DiagError& e) {
    if (e.diag.code == ErrorCode::CaptureViolation) return std::nullopt;
    throw;
  }
}

}  // namespace

bool convertible(const Signature& sig, const Telescope& gamma, const TermPtr& a,
                 const TermPtr& b, const TermPtr& type, Budget& budget) {
  TermPtr T = whnf(sig, gamma, type, budget);
  switch (T->kind) {
    case TermKind::Pi: {
      Telescope g2 = gamma;
      g2.push_cartesian(T->kids[1].names[0], T->kids[0].body);
      return convertible(sig, g2, mk::app(shift(a, 1), mk::var(0)),
                         mk::app(shift(b, 1), mk::var(0)), T->kids[1].body, budget);
    }
    case TermKind::BridgePi: {
      Telescope g2 = gamma;
      g2.push_affine(T->kids[0].names[0]);
      return convertible(sig, g2, mk::bridge_app(shift(a, 1), 0),
                         mk::bridge_app(shift(b, 1), 0), T->kids[0].body, budget);
    }
    case TermKind::Sigma: {
      if (!convertible(sig, gamma, mk::fst(a), mk::fst(b), T->kids[0].body, budget))
        return false;
      TermPtr snd_type = instantiate1(T->kids[1], mk::fst(a));
      return convertible(sig, gamma, mk::snd(a), mk::snd(b), snd_type, budget);
    }
    case TermKind::GelType: {
      int pos = gamma.position_of(T->avar);
      TermPtr na = normalize(sig, gamma, a, Strategy::LeftOuter, budget);
      TermPtr nb = normalize(sig, gamma, b, Strategy::LeftOuter, budget);
      TermPtr capa, capb;
      try {
        capa = capture(gamma, pos, na);
        capb = capture(gamma, pos, nb);
      } catch (const DiagError& e) {
        if (e.diag.code != ErrorCode::CaptureViolation) throw;
        return alpha_eq(na, nb);  // not capturable: structural comparison
      }
      auto content_type = to_restricted(gamma, pos, T->kids[0].body);
      if (!content_type) return alpha_eq(na, nb);
      Telescope rg = restrict(gamma, pos);
      TermPtr ua = mk::ung(capa->kids[0].names[0], capa->kids[0].body);
      TermPtr ub = mk::ung(capb->kids[0].names[0], capb->kids[0].body);
      return convertible(sig, rg, ua, ub, *content_type, budget);
    }
    default: {
      TermPtr na = normalize(sig, gamma, a, Strategy::LeftOuter, budget);
      TermPtr nb = normalize(sig, gamma, b, Strategy::LeftOuter, budget);
      return alpha_eq(na, nb);
    }
  }
}

bool convertible(const Signature& sig, const Telescope& gamma, const TermPtr& a,
                 const TermPtr& b, const TermPtr& type) {
  Budget budget;
  return convertible(sig, gamma, a, b, type, budget);
}

}  // namespace npt
