#include "npt/datatypes.hpp"

#include "npt/core_ops.hpp"

namespace npt {

namespace {

// Context-slot bookkeeping for building Pi towers without hand index
// arithmetic: slots are named, indices derived from the current depth.
struct Levels {
  std::vector<std::string> slots;
  void push(std::string tag) { slots.push_back(std::move(tag)); }
  int index_of(const std::string& tag) const {
    for (int p = static_cast<int>(slots.size()) - 1; p >= 0; --p)
      if (slots[p] == tag) return static_cast<int>(slots.size()) - 1 - p;
    fail(ErrorCode::UnboundVariable, "internal: unknown slot '" + tag + "'");
  }
};

bool occurs_self(const TermPtr& t, const std::string& self) {
  if ((t->kind == TermKind::DataRef || t->kind == TermKind::CtorApp ||
       t->kind == TermKind::ElimApp || t->kind == TermKind::Global) &&
      t->name == self)
    return true;
  for (const Scope& s : t->kids)
    if (occurs_self(s.body, self)) return true;
  return false;
}

bool occurs_left_of_arrow(const TermPtr& t, const std::string& self) {
  if (t->kind == TermKind::Pi && occurs_self(t->kids[0].body, self)) return true;
  for (const Scope& s : t->kids)
    if (occurs_left_of_arrow(s.body, self)) return true;
  return false;
}

// The data type applied to its own parameters, seen from `extra` binders
// beyond the parameter block.
TermPtr self_at(const DataDecl& d, int extra) {
  int n = static_cast<int>(d.params.size());
  std::vector<TermPtr> ps;
  for (int i = 0; i < n; ++i) ps.push_back(mk::var(n + extra - 1 - i, d.params[i].first));
  return mk::data_ref(d.name, std::move(ps));
}

}  // namespace

void check_positivity(DataDecl& d) {
  for (CtorSig& c : d.ctors) {
    for (size_t j = 0; j < c.args.size(); ++j) {
      CtorArg& a = c.args[j];
      const TermPtr& T = a.type;
      if (alpha_eq(T, self_at(d, static_cast<int>(j)))) {
        a.cls = ArgClass::Rec;
        continue;
      }
      if (T->kind == TermKind::BridgePi &&
          alpha_eq(T->kids[0].body, self_at(d, static_cast<int>(j) + 1))) {
        a.cls = ArgClass::BridgeRec;
        continue;
      }
      if (!occurs_self(T, d.name)) {
        a.cls = ArgClass::Const;
        continue;
      }
      if (occurs_left_of_arrow(T, d.name))
        fail(ErrorCode::NegativeOccurrence,
             "constructor '" + c.name + "' of '" + d.name +
                 "': recursive occurrence left of an arrow");
      fail(ErrorCode::NestedOccurrence,
           "constructor '" + c.name + "' of '" + d.name +
               "': recursive occurrence must be '" + d.name +
               " params' or '@I -o " + d.name + " params'");
    }
  }
}

TermPtr data_former_type(const DataDecl& d) {
  TermPtr out = mk::universe();
  for (int i = static_cast<int>(d.params.size()) - 1; i >= 0; --i)
    out = mk::pi(d.params[i].second, d.params[i].first, out);
  return out;
}

TermPtr ctor_type(const DataDecl& d, const CtorSig& c) {
  std::vector<std::pair<std::string, TermPtr>> binders;
  for (const auto& [pn, pt] : d.params) binders.emplace_back(pn, pt);
  for (const CtorArg& a : c.args) binders.emplace_back(a.name.empty() ? "a" : a.name, a.type);

  std::vector<TermPtr> ps;
  int depth = static_cast<int>(binders.size());
  int n = static_cast<int>(d.params.size());
  for (int i = 0; i < n; ++i) ps.push_back(mk::var(depth - 1 - i, d.params[i].first));
  TermPtr out = mk::data_ref(d.name, std::move(ps));
  for (auto it = binders.rbegin(); it != binders.rend(); ++it)
    out = mk::pi(it->second, it->first, out);
  return out;
}

TermPtr eliminator_type(const DataDecl& d) {
  int n = static_cast<int>(d.params.size());
  std::vector<std::pair<std::string, TermPtr>> binders;
  Levels lv;

  auto param_tag = [](int i) { return "p" + std::to_string(i); };
  auto data_at = [&]() {
    std::vector<TermPtr> ps;
    for (int i = 0; i < n; ++i)
      ps.push_back(mk::var(lv.index_of(param_tag(i)), d.params[i].first));
    return mk::data_ref(d.name, std::move(ps));
  };

  for (int i = 0; i < n; ++i) {
    binders.emplace_back(d.params[i].first, d.params[i].second);
    lv.push(param_tag(i));
  }
  binders.emplace_back("M", mk::arrow(data_at(), mk::universe()));
  lv.push("M");

  for (size_t ci = 0; ci < d.ctors.size(); ++ci) {
    const CtorSig& c = d.ctors[ci];
    Levels ml = lv;
    std::vector<std::pair<std::string, TermPtr>> mbinders;
    auto arg_tag = [](size_t j) { return "a" + std::to_string(j); };

    for (size_t j = 0; j < c.args.size(); ++j) {
      // Stored in (params, previous args); here (params, M, earlier methods,
      // previous args) — shift over the inserted slots, below the local args.
      TermPtr ty = shift(c.args[j].type, 1 + static_cast<int>(ci), static_cast<int>(j));
      mbinders.emplace_back(c.args[j].name.empty() ? "a" : c.args[j].name, ty);
      ml.push(arg_tag(j));
    }
    for (size_t j = 0; j < c.args.size(); ++j) {
      if (c.args[j].cls == ArgClass::Const) continue;
      int mix = ml.index_of("M");
      int aix = ml.index_of(arg_tag(j));
      TermPtr ih;
      if (c.args[j].cls == ArgClass::Rec)
        ih = mk::app(mk::var(mix, "M"), mk::var(aix));
      else
        ih = mk::bridge_pi(
            "x", mk::app(mk::var(mix + 1, "M"), mk::bridge_app(mk::var(aix + 1), 0)));
      mbinders.emplace_back("h" + c.args[j].name, ih);
      ml.push("ih" + std::to_string(j));
    }
    std::vector<TermPtr> ps, as;
    for (int i = 0; i < n; ++i)
      ps.push_back(mk::var(ml.index_of(param_tag(i)), d.params[i].first));
    for (size_t j = 0; j < c.args.size(); ++j) as.push_back(mk::var(ml.index_of(arg_tag(j))));
    TermPtr mty = mk::app(mk::var(ml.index_of("M"), "M"),
                          mk::ctor_app(c.name, std::move(ps), std::move(as)));
    for (auto it = mbinders.rbegin(); it != mbinders.rend(); ++it)
      mty = mk::pi(it->second, it->first, mty);

    binders.emplace_back("m" + c.name, mty);
    lv.push("m" + std::to_string(ci));
  }

  binders.emplace_back("s", data_at());
  lv.push("s");
  TermPtr out = mk::app(mk::var(lv.index_of("M"), "M"), mk::var(lv.index_of("s"), "s"));
  for (auto it = binders.rbegin(); it != binders.rend(); ++it)
    out = mk::pi(it->second, it->first, out);
  return out;
}

std::optional<TermPtr> iota_reduce(const Signature& sig, const TermPtr& elim) {
  const DataDecl* d = sig.find_data_of_elim(elim->name);
  if (!d) return std::nullopt;
  const TermPtr& scrut = elim->kids.back().body;
  if (scrut->kind != TermKind::CtorApp) return std::nullopt;
  const CtorSig* c = d->find_ctor(scrut->name);
  if (!c) return std::nullopt;

  int P = static_cast<int>(d->params.size());
  int ci = 0;
  while (d->ctors[ci].name != c->name) ++ci;

  // Rebuild the eliminator around a new scrutinee, `by` binders deeper.
  auto sub_elim = [&](TermPtr new_scrut, int by) {
    std::vector<TermPtr> ps, ms;
    for (int k = 0; k < P; ++k) ps.push_back(shift(elim->kids[k].body, by));
    TermPtr motive = shift(elim->kids[P].body, by);
    for (size_t m = 0; m < d->ctors.size(); ++m)
      ms.push_back(shift(elim->kids[P + 1 + m].body, by));
    return mk::elim_app(elim->name, std::move(ps), std::move(motive), std::move(ms),
                        std::move(new_scrut));
  };

  TermPtr r = elim->kids[P + 1 + ci].body;
  std::vector<TermPtr> args;
  for (size_t j = 0; j < c->args.size(); ++j)
    args.push_back(scrut->kids[scrut->nparams + j].body);
  for (const TermPtr& a : args) r = mk::app(r, a);
  for (size_t j = 0; j < c->args.size(); ++j) {
    if (c->args[j].cls == ArgClass::Const) continue;
    if (c->args[j].cls == ArgClass::Rec)
      r = mk::app(r, sub_elim(args[j], 0));
    else
      r = mk::app(r, mk::bridge_lam("x", sub_elim(mk::bridge_app(shift(args[j], 1), 0), 1)));
  }
  return r;
}

}  // namespace npt
