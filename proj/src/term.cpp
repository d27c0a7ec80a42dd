#include "npt/term.hpp"

namespace npt {

bool scope_is_affine(TermKind kind, int kid_index) {
  switch (kind) {
    case TermKind::BridgePi:
    case TermKind::BridgeLam:
    case TermKind::Ung:
      return kid_index == 0;
    default:
      return false;
  }
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->var != b->var || a->avar != b->avar) return false;
  if (a->nparams != b->nparams) return false;
  switch (a->kind) {  // names are meaning-bearing only for these kinds
    case TermKind::DataRef:
    case TermKind::CtorApp:
    case TermKind::ElimApp:
    case TermKind::Global:
      if (a->name != b->name) return false;
      break;
    default:
      break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i) {
    if (a->kids[i].arity() != b->kids[i].arity()) return false;
    if (!alpha_eq(a->kids[i].body, b->kids[i].body)) return false;
  }
  return true;
}

namespace mk {

static TermPtr node(Term t) { return std::make_shared<const Term>(std::move(t)); }
static Scope plain(TermPtr t) { return Scope{{}, std::move(t)}; }
static Scope under(std::string n, TermPtr t) {
  return Scope{{std::move(n)}, std::move(t)};
}

TermPtr var(int index, std::string name) {
  Term t{TermKind::Var};
  t.var = index;
  t.name = std::move(name);
  return node(std::move(t));
}

TermPtr universe() { return node(Term{TermKind::Universe}); }

TermPtr pi(TermPtr domain, std::string binder, TermPtr codomain) {
  Term t{TermKind::Pi};
  t.kids = {plain(std::move(domain)), under(std::move(binder), std::move(codomain))};
  return node(std::move(t));
}

// Defined in core_ops.cpp (needs shift); forward-declared there.
TermPtr shift_for_arrow(const TermPtr& t);

TermPtr arrow(TermPtr domain, TermPtr codomain) {
  return pi(std::move(domain), "_", shift_for_arrow(codomain));
}

TermPtr lam(TermPtr domain, std::string binder, TermPtr body) {
  Term t{TermKind::Lam};
  t.kids = {plain(std::move(domain)), under(std::move(binder), std::move(body))};
  return node(std::move(t));
}

TermPtr app(TermPtr fn, TermPtr arg) {
  Term t{TermKind::App};
  t.kids = {plain(std::move(fn)), plain(std::move(arg))};
  return node(std::move(t));
}

TermPtr bridge_pi(std::string binder, TermPtr codomain) {
  Term t{TermKind::BridgePi};
  t.kids = {under(std::move(binder), std::move(codomain))};
  return node(std::move(t));
}

TermPtr bridge_lam(std::string binder, TermPtr body) {
  Term t{TermKind::BridgeLam};
  t.kids = {under(std::move(binder), std::move(body))};
  return node(std::move(t));
}

TermPtr bridge_app(TermPtr fn, int affine_index) {
  Term t{TermKind::BridgeApp};
  t.avar = affine_index;
  t.kids = {plain(std::move(fn))};
  return node(std::move(t));
}

TermPtr sigma(TermPtr domain, std::string binder, TermPtr codomain) {
  Term t{TermKind::Sigma};
  t.kids = {plain(std::move(domain)), under(std::move(binder), std::move(codomain))};
  return node(std::move(t));
}

TermPtr pair(TermPtr fst, TermPtr snd) {
  Term t{TermKind::Pair};
  t.kids = {plain(std::move(fst)), plain(std::move(snd))};
  return node(std::move(t));
}

TermPtr fst(TermPtr p) {
  Term t{TermKind::Fst};
  t.kids = {plain(std::move(p))};
  return node(std::move(t));
}

TermPtr snd(TermPtr p) {
  Term t{TermKind::Snd};
  t.kids = {plain(std::move(p))};
  return node(std::move(t));
}

TermPtr nm() { return node(Term{TermKind::NmType}); }

TermPtr cname(int affine_index) {
  Term t{TermKind::CName};
  t.avar = affine_index;
  return node(std::move(t));
}

TermPtr ind_nm(int affine_index, TermPtr scrutinee, std::string motive_binder, TermPtr motive,
               TermPtr base, std::string step_binder, TermPtr step) {
  Term t{TermKind::IndNm};
  t.avar = affine_index;
  t.kids = {plain(std::move(scrutinee)), under(std::move(motive_binder), std::move(motive)),
            plain(std::move(base)), under(std::move(step_binder), std::move(step))};
  return node(std::move(t));
}

TermPtr gel_type(TermPtr content_type, int affine_index) {
  Term t{TermKind::GelType};
  t.avar = affine_index;
  t.kids = {plain(std::move(content_type))};
  return node(std::move(t));
}

TermPtr gel_intro(TermPtr content, int affine_index) {
  Term t{TermKind::GelIntro};
  t.avar = affine_index;
  t.kids = {plain(std::move(content))};
  return node(std::move(t));
}

TermPtr ung(std::string binder, TermPtr body) {
  Term t{TermKind::Ung};
  t.kids = {under(std::move(binder), std::move(body))};
  return node(std::move(t));
}

TermPtr ext(TermPtr method, int affine_index, TermPtr arg) {
  Term t{TermKind::Ext};
  t.avar = affine_index;
  t.kids = {plain(std::move(method)), plain(std::move(arg))};
  return node(std::move(t));
}

TermPtr id(TermPtr type, TermPtr lhs, TermPtr rhs) {
  Term t{TermKind::Id};
  t.kids = {plain(std::move(type)), plain(std::move(lhs)), plain(std::move(rhs))};
  return node(std::move(t));
}

TermPtr refl() { return node(Term{TermKind::Refl}); }

TermPtr j(std::string b_binder, std::string e_binder, TermPtr motive, TermPtr base,
          TermPtr proof) {
  Term t{TermKind::J};
  t.kids = {Scope{{std::move(b_binder), std::move(e_binder)}, std::move(motive)},
            plain(std::move(base)), plain(std::move(proof))};
  return node(std::move(t));
}

TermPtr data_ref(std::string name, std::vector<TermPtr> params) {
  Term t{TermKind::DataRef};
  t.name = std::move(name);
  for (auto& p : params) t.kids.push_back(plain(std::move(p)));
  return node(std::move(t));
}

TermPtr ctor_app(std::string name, std::vector<TermPtr> params, std::vector<TermPtr> args) {
  Term t{TermKind::CtorApp};
  t.name = std::move(name);
  t.nparams = static_cast<int>(params.size());
  for (auto& p : params) t.kids.push_back(plain(std::move(p)));
  for (auto& a : args) t.kids.push_back(plain(std::move(a)));
  return node(std::move(t));
}

TermPtr elim_app(std::string name, std::vector<TermPtr> params, TermPtr motive,
                 std::vector<TermPtr> methods, TermPtr scrutinee) {
  Term t{TermKind::ElimApp};
  t.name = std::move(name);
  t.nparams = static_cast<int>(params.size());
  for (auto& p : params) t.kids.push_back(plain(std::move(p)));
  t.kids.push_back(plain(std::move(motive)));
  for (auto& m : methods) t.kids.push_back(plain(std::move(m)));
  t.kids.push_back(plain(std::move(scrutinee)));
  return node(std::move(t));
}

TermPtr global(std::string name) {
  Term t{TermKind::Global};
  t.name = std::move(name);
  return node(std::move(t));
}

}  // namespace mk

void Telescope::push_cartesian(std::string name, TermPtr type) {
  entries_.push_back(Entry{EntryKind::Cartesian, std::move(name), std::move(type)});
}

void Telescope::push_affine(std::string name) {
  entries_.push_back(Entry{EntryKind::Affine, std::move(name), nullptr});
}

void Telescope::pop() { entries_.pop_back(); }

}  // namespace npt
