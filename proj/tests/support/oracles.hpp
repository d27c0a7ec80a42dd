#pragma once

// Independent reference implementations used to cross-check the kernel's
// positional machinery. Everything here works on an explicitly *named* tree:
// binders get fresh unique names, free references become name strings, and
// the checks are done by set arithmetic on names. None of it shares index
// arithmetic with src/core_ops.cpp.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "npt/core_ops.hpp"
#include "npt/term.hpp"

namespace npt::testing {

struct NamedRefs {
  std::set<std::string> cartesian;
  std::set<std::string> affine;
};

// Collect free references of t by name. Telescope entries must carry unique
// names (the tests guarantee this); binder names are replaced by gensyms so
// shadowing cannot confuse the collection.
inline void collect_named(const TermPtr& t, std::vector<std::pair<std::string, bool>>& scope,
                          int& gensym, NamedRefs& out) {
  auto lookup = [&](int idx) -> const std::pair<std::string, bool>& {
    return scope.at(scope.size() - 1 - static_cast<size_t>(idx));
  };
  if (t->kind == TermKind::Var) {
    auto& [nm, introduced] = lookup(t->var);
    if (!introduced) out.cartesian.insert(nm);
  }
  if (t->avar >= 0) {
    auto& [nm, introduced] = lookup(t->avar);
    if (!introduced) out.affine.insert(nm);
  }
  for (size_t i = 0; i < t->kids.size(); ++i) {
    const Scope& s = t->kids[i];
    for (int b = 0; b < s.arity(); ++b)
      scope.push_back({"%g" + std::to_string(gensym++), true});
    collect_named(s.body, scope, gensym, out);
    for (int b = 0; b < s.arity(); ++b) scope.pop_back();
  }
}

inline NamedRefs named_refs(const Telescope& gamma, const TermPtr& t) {
  std::vector<std::pair<std::string, bool>> scope;
  for (const Entry& e : gamma.entries()) scope.push_back({e.name, false});
  int gensym = 0;
  NamedRefs out;
  collect_named(t, scope, gensym, out);
  return out;
}

// Oracle for supports(): recompute via names, then map back to indices.
inline VarSet supports_oracle(const Telescope& gamma, const TermPtr& t) {
  NamedRefs refs = named_refs(gamma, t);
  VarSet out;
  for (int pos = 0; pos < gamma.size(); ++pos) {
    const Entry& e = gamma.at(pos);
    if (refs.cartesian.count(e.name)) out.cartesian.insert(gamma.index_of(pos));
    if (refs.affine.count(e.name)) out.affine.insert(gamma.index_of(pos));
  }
  return out;
}

// Oracle for restrict(): re-derive the definition entry by entry.
inline std::vector<std::pair<std::string, bool>> restrict_oracle(const Telescope& gamma,
                                                                 int pos) {
  std::vector<std::pair<std::string, bool>> kept;  // (name, is_affine)
  for (int q = 0; q < gamma.size(); ++q) {
    const Entry& e = gamma.at(q);
    bool is_x = q == pos;
    bool right_of_x_cartesian = q > pos && !e.is_affine();
    if (is_x || right_of_x_cartesian) continue;
    kept.push_back({e.name, e.is_affine()});
  }
  return kept;
}

// Scope-level freshness oracle: every name the term mentions must survive
// into the restricted context (in particular x itself must not occur).
inline bool fresh_oracle(const Telescope& gamma, int pos, const TermPtr& t) {
  NamedRefs refs = named_refs(gamma, t);
  std::set<std::string> survivors;
  for (auto& [nm, _] : restrict_oracle(gamma, pos)) survivors.insert(nm);
  for (const std::string& nm : refs.cartesian)
    if (!survivors.count(nm)) return false;
  for (const std::string& nm : refs.affine)
    if (!survivors.count(nm)) return false;
  return true;
}

}  // namespace npt::testing
