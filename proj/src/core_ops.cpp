#include "npt/core_ops.hpp"

namespace npt {

// One traversal engine: fn decides what happens to each free reference.
// fn(base) returns the replacement for free index `base` (depth already
// subtracted); result indices are relative to the target context and get
// re-shifted by the current depth. A null term in Repl means "index move".
namespace {

struct Repl {
  TermPtr term;     // cartesian replacement (target-relative)
  int index = -1;   // index move (target-relative); used when term is null
};

using RefFn = std::function<Repl(int base, bool affine_slot)>;

TermPtr transform(const TermPtr& t, int depth, const RefFn& fn);

Scope transform_scope(const Scope& s, int depth, const RefFn& fn) {
  return Scope{s.names, transform(s.body, depth + s.arity(), fn)};
}

TermPtr transform(const TermPtr& t, int depth, const RefFn& fn) {
  bool changed = false;
  Term out = *t;

  auto map_index = [&](int idx, bool affine_slot) -> int {
    if (idx < depth) return idx;  // bound inside t
    Repl r = fn(idx - depth, affine_slot);
    if (r.term) {
      // Only reachable for Var nodes; handled below. Affine slots must map to
      // indices.
      fail(ErrorCode::KindMismatch,
           "cannot substitute a general term for an affine variable");
    }
    return r.index + depth;
  };

  if (t->kind == TermKind::Var && t->var >= depth) {
    Repl r = fn(t->var - depth, false);
    if (r.term) return shift(r.term, depth);
    if (r.index + depth != t->var) {
      out.var = r.index + depth;
      return std::make_shared<const Term>(std::move(out));
    }
    return t;
  }

  if (t->avar >= 0) {
    int nv = map_index(t->avar, true);
    if (nv != t->avar) {
      out.avar = nv;
      changed = true;
    }
  }
  for (size_t i = 0; i < t->kids.size(); ++i) {
    Scope ns = transform_scope(t->kids[i], depth, fn);
    if (ns.body != t->kids[i].body) {
      out.kids[i] = std::move(ns);
      changed = true;
    }
  }
  return changed ? std::make_shared<const Term>(std::move(out)) : t;
}

}  // namespace

TermPtr shift(const TermPtr& t, int by, int cutoff) {
  if (by == 0) return t;
  return transform(t, cutoff, [&](int base, bool) { return Repl{nullptr, base + by}; });
}

namespace mk {
TermPtr shift_for_arrow(const TermPtr& t) { return shift(t, 1); }
}  // namespace mk

std::optional<TermPtr> strengthen(const TermPtr& t, int k) {
  try {
    return transform(t, 0, [&](int base, bool) -> Repl {
      if (base == k)
        fail(ErrorCode::UnboundVariable, "strengthened variable still occurs");
      return Repl{nullptr, base > k ? base - 1 : base};
    });
  } catch (const DiagError&) {
    return std::nullopt;
  }
}

TermPtr instantiate(const Scope& scope, const std::vector<InstValue>& values) {
  int n = scope.arity();
  if (static_cast<int>(values.size()) != n)
    fail(ErrorCode::KindMismatch, "instantiate: arity mismatch");
  return transform(scope.body, 0, [&](int base, bool affine_slot) -> Repl {
    if (base >= n) return Repl{nullptr, base - n};
    const InstValue& v = values[n - 1 - base];  // index 0 is the last binder
    if (v.term) {
      if (affine_slot)
        fail(ErrorCode::KindMismatch,
             "cannot substitute a general term for an affine variable");
      return Repl{v.term, -1};
    }
    return Repl{nullptr, v.affine};
  });
}

TermPtr instantiate1(const Scope& scope, const TermPtr& value) {
  return instantiate(scope, {InstValue::of_term(value)});
}

TermPtr instantiate1_affine(const Scope& scope, int affine_index) {
  return instantiate(scope, {InstValue::of_affine(affine_index)});
}

namespace {
void collect(const TermPtr& t, int depth, VarSet& out) {
  if (t->kind == TermKind::Var && t->var >= depth) out.cartesian.insert(t->var - depth);
  if (t->avar >= depth) out.affine.insert(t->avar - depth);
  for (const Scope& s : t->kids) collect(s.body, depth + s.arity(), out);
}
}  // namespace

VarSet supports(const TermPtr& t) {
  VarSet out;
  collect(t, 0, out);
  return out;
}

Telescope restrict(const Telescope& gamma, int pos) {
  if (pos < 0 || pos >= gamma.size())
    fail(ErrorCode::UnboundVariable, "restriction position out of range");
  if (!gamma.at(pos).is_affine())
    fail(ErrorCode::PositionNotAffine,
         "restriction must target an affine entry (got '" + gamma.at(pos).name + "')",
         {}, telescope_sketch(gamma));
  Telescope out;
  for (int q = 0; q < gamma.size(); ++q) {
    if (q == pos) continue;
    const Entry& e = gamma.at(q);
    if (q > pos && !e.is_affine()) continue;
    if (e.is_affine())
      out.push_affine(e.name);
    else
      out.push_cartesian(e.name, e.type);
  }
  return out;
}

bool is_fresh(const Telescope& gamma, int pos, const TermPtr& t) {
  if (pos < 0 || pos >= gamma.size())
    fail(ErrorCode::UnboundVariable, "freshness position out of range");
  if (!gamma.at(pos).is_affine())
    fail(ErrorCode::PositionNotAffine,
         "freshness check must target an affine entry (got '" + gamma.at(pos).name + "')",
         {}, telescope_sketch(gamma));
  int ix = gamma.index_of(pos);
  VarSet vs = supports(t);
  if (vs.affine.count(ix)) return false;
  for (int j : vs.cartesian)
    if (j < ix) return false;  // smaller index = strictly to the right of x
  return true;
}

TermPtr capture(const Telescope& gamma, int pos, const TermPtr& t) {
  if (pos < 0 || pos >= gamma.size())
    fail(ErrorCode::UnboundVariable, "capture position out of range");
  if (!gamma.at(pos).is_affine())
    fail(ErrorCode::PositionNotAffine,
         "capture must target an affine entry (got '" + gamma.at(pos).name + "')",
         {}, telescope_sketch(gamma));
  int n = gamma.size();
  int ix = n - 1 - pos;

  // Positions of the restricted context, then the new binder on top.
  // new_pos[q] = position of old entry q inside restrict(gamma, pos).
  std::vector<int> new_pos(n, -1);
  int m = 0;
  for (int q = 0; q < n; ++q) {
    if (q == pos) continue;
    if (q > pos && !gamma.at(q).is_affine()) continue;
    new_pos[q] = m++;
  }

  TermPtr body = transform(t, 0, [&](int base, bool affine_slot) -> Repl {
    if (base == ix) {
      if (!affine_slot)
        fail(ErrorCode::KindMismatch, "affine entry referenced as a cartesian variable");
      return Repl{nullptr, 0};  // the new bridge binder
    }
    int q = n - 1 - base;
    if (new_pos[q] < 0)
      fail(ErrorCode::CaptureViolation,
           "cannot capture over '" + gamma.at(pos).name + "': term mentions cartesian entry '" +
               gamma.at(q).name + "' bound to its right",
           {}, telescope_sketch(gamma));
    // Inside the bridge body the context is restrict(gamma,pos) ++ [binder].
    return Repl{nullptr, (m + 1) - 1 - new_pos[q]};
  });
  return mk::bridge_lam(gamma.at(pos).name, body);
}

TermPtr unrestrict(const Telescope& gamma, int pos, const TermPtr& t) {
  if (pos < 0 || pos >= gamma.size())
    fail(ErrorCode::UnboundVariable, "unrestrict position out of range");
  if (!gamma.at(pos).is_affine())
    fail(ErrorCode::PositionNotAffine,
         "unrestrict must target an affine entry (got '" + gamma.at(pos).name + "')",
         {}, telescope_sketch(gamma));
  int n = gamma.size();

  // orig[r] = position inside gamma of the r-th entry of restrict(gamma, pos).
  std::vector<int> orig;
  for (int q = 0; q < n; ++q) {
    if (q == pos) continue;
    if (q > pos && !gamma.at(q).is_affine()) continue;
    orig.push_back(q);
  }
  int m = static_cast<int>(orig.size());

  return transform(t, 0, [&](int base, bool) -> Repl {
    if (base >= m)
      fail(ErrorCode::UnboundVariable, "unrestrict: index out of range for the restricted context");
    int r = m - 1 - base;
    return Repl{nullptr, n - 1 - orig[r]};
  });
}

TermPtr subst(const Telescope& gamma, const TermPtr& t, int pos, const TermPtr& s) {
  if (pos < 0 || pos >= gamma.size())
    fail(ErrorCode::UnboundVariable, "substitution position out of range");
  int ix = gamma.index_of(pos);
  bool target_affine = gamma.at(pos).is_affine();
  int replacement_affine = -1;
  if (target_affine) {
    // Only an affine variable reference may stand for an affine entry. We
    // accept a CName node as the spelling of that reference.
    if (s->kind == TermKind::CName)
      replacement_affine = s->avar;
    else
      fail(ErrorCode::KindMismatch,
           "cannot substitute a general term for affine entry '" + gamma.at(pos).name + "'",
           {}, telescope_sketch(gamma));
  }
  return transform(t, 0, [&](int base, bool affine_slot) -> Repl {
    if (base != ix) return Repl{nullptr, base};
    if (affine_slot) {
      if (!target_affine)
        fail(ErrorCode::KindMismatch, "cartesian entry referenced through an affine slot");
      return Repl{nullptr, replacement_affine};
    }
    if (target_affine)
      fail(ErrorCode::KindMismatch, "affine entry referenced as a cartesian variable");
    return Repl{s, -1};
  });
}

namespace {
bool scoped(const Telescope& gamma, const TermPtr& t, int depth,
            const std::vector<bool>& binder_affine) {
  auto entry_affine = [&](int idx) -> std::optional<bool> {
    if (idx < depth) return binder_affine[binder_affine.size() - 1 - idx];
    int base = idx - depth;
    if (base >= gamma.size()) return std::nullopt;
    return gamma.by_index(base).is_affine();
  };
  if (t->kind == TermKind::Var) {
    auto a = entry_affine(t->var);
    if (!a || *a) return false;
  }
  if (t->avar >= 0) {
    auto a = entry_affine(t->avar);
    if (!a || !*a) return false;
  }
  for (size_t i = 0; i < t->kids.size(); ++i) {
    const Scope& s = t->kids[i];
    std::vector<bool> ba = binder_affine;
    for (int b = 0; b < s.arity(); ++b)
      ba.push_back(scope_is_affine(t->kind, static_cast<int>(i)));
    if (!scoped(gamma, s.body, depth + s.arity(), ba)) return false;
  }
  return true;
}
}  // namespace

bool well_scoped(const Telescope& gamma, const TermPtr& t) {
  return scoped(gamma, t, 0, {});
}

std::string telescope_sketch(const Telescope& gamma) {
  std::string out = "(";
  for (int q = 0; q < gamma.size(); ++q) {
    if (q) out += ", ";
    out += gamma.at(q).name;
    out += gamma.at(q).is_affine() ? " : @I" : " : _";
  }
  out += ")";
  return out;
}

}  // namespace npt
