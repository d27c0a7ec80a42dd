#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "npt/diagnostics.hpp"

namespace npt {

// Core syntax. Terms are immutable after construction and shared freely.
//
// Variables are de Bruijn indices into one ordered telescope holding both
// cartesian entries (x : A) and affine entries (x : @I tag only). Index 0 is
// the innermost (rightmost) entry. Cartesian entries are referenced by Var
// nodes; affine entries are referenced only through the dedicated affine
// slots (`avar` below) of BridgeApp / CName / IndNm / GelType / GelIntro /
// Ext. Display names are metadata: alpha equality ignores them.
enum class TermKind {
  Var,        // cartesian variable
  Universe,   // U (type-in-type)
  Pi,         // kids: domain, codomain(1 binder)
  Lam,        // kids: domain, body(1 binder)
  App,        // kids: fn, arg
  BridgePi,   // kids: codomain(1 affine binder)
  BridgeLam,  // kids: body(1 affine binder)
  BridgeApp,  // kids: fn; avar = affine index
  Sigma,      // kids: domain, codomain(1 binder)
  Pair,       // kids: fst, snd
  Fst,        // kids: pair
  Snd,        // kids: pair
  NmType,     // Nm
  CName,      // name x; avar = affine index
  IndNm,      // avar = x; kids: scrutinee, motive(1: z), base, step(1: g)
  GelType,    // kids: content type; avar = affine index
  GelIntro,   // kids: content; avar = affine index
  Ung,        // kids: body(1 affine binder)
  Ext,        // kids: method, arg; avar = affine index
  Id,         // kids: type, lhs, rhs
  Refl,       // no kids (check-mode only)
  J,          // kids: motive(2 binders: b, e), base, proof
  DataRef,    // name; kids: parameters
  CtorApp,    // name; kids: parameters ++ arguments; nparams
  ElimApp,    // name; kids: parameters ++ [motive] ++ methods ++ [scrutinee]; nparams
  Global,     // name; reference to a signature entry
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// A subterm lying under `names.size()` binders of the parent node.
// names.back() is the innermost binder (index 0 inside body).
struct Scope {
  std::vector<std::string> names;
  TermPtr body;
  int arity() const { return static_cast<int>(names.size()); }
};

struct Term {
  TermKind kind;
  int var = -1;      // Var: de Bruijn index
  int avar = -1;     // affine slot: de Bruijn index of an affine entry
  int nparams = 0;   // CtorApp/ElimApp: leading kids that are data parameters
  std::string name{};  // display name / global / data / constructor name
  std::vector<Scope> kids{};
};

// True when kid `i` of a node of this kind binds an affine variable.
bool scope_is_affine(TermKind kind, int kid_index);

// Structural alpha equality: ignores display names, compares indices/kinds.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

// ---- construction helpers -------------------------------------------------

namespace mk {
TermPtr var(int index, std::string name = {});
TermPtr universe();
TermPtr pi(TermPtr domain, std::string binder, TermPtr codomain);
TermPtr arrow(TermPtr domain, TermPtr codomain);  // non-dependent Pi (shifts codomain)
TermPtr lam(TermPtr domain, std::string binder, TermPtr body);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr bridge_pi(std::string binder, TermPtr codomain);
TermPtr bridge_lam(std::string binder, TermPtr body);
TermPtr bridge_app(TermPtr fn, int affine_index);
TermPtr sigma(TermPtr domain, std::string binder, TermPtr codomain);
TermPtr pair(TermPtr fst, TermPtr snd);
TermPtr fst(TermPtr p);
TermPtr snd(TermPtr p);
TermPtr nm();
TermPtr cname(int affine_index);
TermPtr ind_nm(int affine_index, TermPtr scrutinee, std::string motive_binder, TermPtr motive,
               TermPtr base, std::string step_binder, TermPtr step);
TermPtr gel_type(TermPtr content_type, int affine_index);
TermPtr gel_intro(TermPtr content, int affine_index);
TermPtr ung(std::string binder, TermPtr body);
TermPtr ext(TermPtr method, int affine_index, TermPtr arg);
TermPtr id(TermPtr type, TermPtr lhs, TermPtr rhs);
TermPtr refl();
TermPtr j(std::string b_binder, std::string e_binder, TermPtr motive, TermPtr base, TermPtr proof);
TermPtr data_ref(std::string name, std::vector<TermPtr> params = {});
TermPtr ctor_app(std::string name, std::vector<TermPtr> params, std::vector<TermPtr> args);
TermPtr elim_app(std::string name, std::vector<TermPtr> params, TermPtr motive,
                 std::vector<TermPtr> methods, TermPtr scrutinee);
TermPtr global(std::string name);
}  // namespace mk

// ---- telescopes -----------------------------------------------------------

enum class EntryKind { Cartesian, Affine };

struct Entry {
  EntryKind kind;
  std::string name;
  TermPtr type;  // null for affine entries
  bool is_affine() const { return kind == EntryKind::Affine; }
};

// Ordered context; position 0 is the leftmost (outermost) entry. A de Bruijn
// index i in a term under telescope G refers to position G.size()-1-i.
class Telescope {
 public:
  Telescope() = default;

  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const Entry& at(int position) const { return entries_.at(position); }
  const Entry& by_index(int db_index) const { return entries_.at(size() - 1 - db_index); }
  int index_of(int position) const { return size() - 1 - position; }
  int position_of(int db_index) const { return size() - 1 - db_index; }

  void push_cartesian(std::string name, TermPtr type);
  void push_affine(std::string name);
  void pop();

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// Free-variable occurrence sets, as de Bruijn indices relative to the
// ambient telescope (binder-internal references are excluded).
struct VarSet {
  std::set<int> cartesian;
  std::set<int> affine;
  bool operator==(const VarSet& o) const = default;
};

}  // namespace npt
