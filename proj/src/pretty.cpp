#include <set>
#include <string>
#include <utility>
#include <vector>

#include "npt/core_ops.hpp"
#include "npt/datatypes.hpp"
#include "npt/surface.hpp"

namespace npt::surface {
namespace {

// Precedence levels, loosest first. A form prints parenthesized whenever the
// position demands a tighter level than the form provides.
enum Level : int {
  kTop = 0,    // arrows and right-extending binder forms survive
  kArrow = 1,  // operand of an arrow: applications survive, arrows wrap
  kApp = 2,    // head of an application
  kAtom = 3,   // argument position: everything but atoms wraps
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "def", "postulate", "data", "where", "with", "motive", "U",   "Nm",  "name", "gel",
      "Gel", "ung",       "ext",  "indNm", "nu",   "fst",    "snd", "Sig", "Id",   "refl",
      "J"};
  return kw;
}

class Printer {
 public:
  Printer(const Signature& sig, const Telescope& gamma) : sig_(sig) {
    // Seed the environment with uniquified display names for the open
    // telescope, outermost first.
    for (int p = 0; p < gamma.size(); ++p) env_.push_back(fresh(gamma.at(p).name));
  }

  std::string print(const TermPtr& t, int level) {
    switch (t->kind) {
      case TermKind::Var:
        return name_of(t->var);
      case TermKind::Universe:
        return "U";
      case TermKind::NmType:
        return "Nm";
      case TermKind::Global:
        return t->name;
      case TermKind::Refl:
        return "refl";
      case TermKind::CName:
        return wrap(level, kApp, "name " + name_of(t->avar));

      case TermKind::Pi: {
        std::string dom = print(t->kids[0].body, kArrow);
        if (auto cod = strengthen(t->kids[1].body, 0))
          return wrap(level, kTop, dom + " -> " + print(*cod, kTop));
        Binder b(*this, t->kids[1].names[0]);
        return wrap(level, kTop, "(" + b.name + " : " + print_under(t->kids[0].body, kTop, 1) +
                                     ") -> " + print(t->kids[1].body, kTop));
      }
      case TermKind::BridgePi: {
        if (auto cod = strengthen(t->kids[0].body, 0))
          return wrap(level, kTop, "@I -o " + print(*cod, kTop));
        Binder b(*this, t->kids[0].names[0]);
        return wrap(level, kTop, "(" + b.name + " : @I) -o " + print(t->kids[0].body, kTop));
      }
      case TermKind::Sigma: {
        Binder b(*this, t->kids[1].names[0]);
        return wrap(level, kTop, "Sig (" + b.name + " : " + print_under(t->kids[0].body, kTop, 1) +
                                     "). " + print(t->kids[1].body, kTop));
      }

      case TermKind::Lam: {
        Binder b(*this, t->kids[1].names[0]);
        return wrap(level, kTop, "\\(" + b.name + " : " + print_under(t->kids[0].body, kTop, 1) +
                                     "). " + print(t->kids[1].body, kTop));
      }
      case TermKind::BridgeLam: {
        Binder b(*this, t->kids[0].names[0]);
        return wrap(level, kTop, "\\(" + b.name + " : @I). " + print(t->kids[0].body, kTop));
      }

      case TermKind::App:
        return wrap(level, kApp,
                    print(t->kids[0].body, kApp) + " " + print(t->kids[1].body, kAtom));
      case TermKind::BridgeApp:
        return wrap(level, kApp, print(t->kids[0].body, kApp) + " " + name_of(t->avar));

      case TermKind::Pair:
        return "(" + print(t->kids[0].body, kTop) + " , " + print(t->kids[1].body, kTop) + ")";
      case TermKind::Fst:
        return wrap(level, kApp, "fst " + print(t->kids[0].body, kAtom));
      case TermKind::Snd:
        return wrap(level, kApp, "snd " + print(t->kids[0].body, kAtom));

      case TermKind::Id:
        return wrap(level, kApp, "Id " + print(t->kids[0].body, kAtom) + " " +
                                     print(t->kids[1].body, kAtom) + " " +
                                     print(t->kids[2].body, kAtom));
      case TermKind::J: {
        std::string base = print(t->kids[1].body, kAtom);
        std::string proof = print(t->kids[2].body, kAtom);
        Binder b(*this, t->kids[0].names[0]);
        Binder e(*this, t->kids[0].names[1]);
        return wrap(level, kTop, "J " + base + " " + proof + " with motive \\" + b.name + ". \\" +
                                     e.name + ". " + print(t->kids[0].body, kTop));
      }

      case TermKind::GelType:
        return wrap(level, kApp,
                    "Gel " + print(t->kids[0].body, kAtom) + " " + name_of(t->avar));
      case TermKind::GelIntro:
        return wrap(level, kApp,
                    "gel " + print(t->kids[0].body, kAtom) + " " + name_of(t->avar));
      case TermKind::Ung: {
        Binder b(*this, t->kids[0].names[0]);
        return wrap(level, kApp,
                    "ung (\\(" + b.name + " : @I). " + print(t->kids[0].body, kTop) + ")");
      }
      case TermKind::Ext:
        return wrap(level, kApp, "ext " + print(t->kids[0].body, kAtom) + " " + name_of(t->avar) +
                                     " " + print(t->kids[1].body, kAtom));

      case TermKind::IndNm: {
        std::string x = name_of(t->avar);
        std::string scrut = print(t->kids[0].body, kAtom);
        std::string base = print(t->kids[2].body, kAtom);
        std::string step;
        {
          Binder g(*this, t->kids[3].names[0]);
          step = "(\\" + g.name + ". " + print(t->kids[3].body, kTop) + ")";
        }
        Binder z(*this, t->kids[1].names[0]);
        return wrap(level, kTop, "indNm " + x + " " + scrut + " " + base + " " + step +
                                     " with motive \\" + z.name + ". " +
                                     print(t->kids[1].body, kTop));
      }

      case TermKind::DataRef: {
        std::string out = t->name;
        for (const Scope& k : t->kids) out += " " + print(k.body, kAtom);
        return t->kids.empty() ? out : wrap(level, kApp, out);
      }
      case TermKind::CtorApp: {
        // Parameters are elided; elaboration restores them from the expected
        // type.
        std::string out = t->name;
        bool any = false;
        for (std::size_t i = static_cast<std::size_t>(t->nparams); i < t->kids.size(); ++i) {
          out += " " + print(t->kids[i].body, kAtom);
          any = true;
        }
        return any ? wrap(level, kApp, out) : out;
      }
      case TermKind::ElimApp: {
        std::string out = t->name;
        for (const Scope& k : t->kids) out += " " + print(k.body, kAtom);
        return t->kids.empty() ? out : wrap(level, kApp, out);
      }
    }
    return "?";
  }

  // Print a subterm that lives `drop` binders up from the current
  // environment (used for binder annotations recorded before their binder).
  std::string print_under(const TermPtr& t, int level, int drop) {
    std::vector<std::string> saved(env_.end() - drop, env_.end());
    env_.erase(env_.end() - drop, env_.end());
    std::string out = print(t, level);
    env_.insert(env_.end(), saved.begin(), saved.end());
    return out;
  }

  std::string fresh(const std::string& display) {
    std::string candidate = display;
    if (candidate.empty() || candidate == "_") {
      for (int k = 0;; ++k) {
        candidate = "x" + std::to_string(k);
        if (!taken(candidate)) break;
      }
    } else {
      while (taken(candidate)) candidate += "'";
    }
    return candidate;
  }

 private:
  struct Binder {
    Printer& p;
    std::string name;
    Binder(Printer& p_, const std::string& display) : p(p_), name(p_.fresh(display)) {
      p.env_.push_back(name);
    }
    ~Binder() { p.env_.pop_back(); }
    Binder(const Binder&) = delete;
    Binder& operator=(const Binder&) = delete;
  };

  bool taken(const std::string& n) const {
    if (keywords().count(n)) return true;
    if (sig_.has(n)) return true;
    for (const std::string& e : env_)
      if (e == n) return true;
    return false;
  }

  std::string name_of(int db_index) const {
    int i = static_cast<int>(env_.size()) - 1 - db_index;
    if (i < 0) return "_oob" + std::to_string(db_index);
    return env_[static_cast<std::size_t>(i)];
  }

  static std::string wrap(int required, int provided, std::string s) {
    return required > provided ? "(" + std::move(s) + ")" : std::move(s);
  }

  const Signature& sig_;
  std::vector<std::string> env_;
};

}  // namespace

std::string pretty(const Signature& sig, const Telescope& gamma, const TermPtr& t) {
  return Printer(sig, gamma).print(t, kTop);
}

std::string pretty(const Signature& sig, const TermPtr& t) { return pretty(sig, {}, t); }

std::string pretty_telescope(const Signature& sig, const Telescope& gamma) {
  std::string out;
  Telescope prefix;
  for (int p = 0; p < gamma.size(); ++p) {
    const Entry& e = gamma.at(p);
    if (p > 0) out += " ";
    if (e.is_affine()) {
      out += "(" + e.name + " : @I)";
    } else {
      out += "(" + e.name + " : " + pretty(sig, prefix, e.type) + ")";
    }
    if (e.is_affine())
      prefix.push_affine(e.name);
    else
      prefix.push_cartesian(e.name, e.type);
  }
  return out;
}

std::string pretty_def(const Signature& sig, const Def& d) {
  std::string out;
  if (d.golden) out += "{-# golden #-}\n";
  if (d.is_postulate()) return out + "postulate " + d.name + " : " + pretty(sig, d.type);
  return out + "def " + d.name + " : " + pretty(sig, d.type) + " := " + pretty(sig, d.body);
}

std::string pretty_data(const Signature& sig, const DataDecl& d) {
  std::string out = "data " + d.name;
  Telescope params;
  for (const auto& [pn, pt] : d.params) {
    out += " (" + pn + " : " + pretty(sig, params, pt) + ")";
    params.push_cartesian(pn, pt);
  }
  out += " : U where";
  int np = static_cast<int>(d.params.size());
  for (const CtorSig& c : d.ctors) {
    int na = static_cast<int>(c.args.size());
    std::vector<TermPtr> self_params;
    for (int j = 0; j < np; ++j)
      self_params.push_back(mk::var(na + np - 1 - j, d.params[static_cast<std::size_t>(j)].first));
    TermPtr ct = mk::data_ref(d.name, self_params);
    for (int i = na - 1; i >= 0; --i)
      ct = mk::pi(c.args[static_cast<std::size_t>(i)].type,
                  c.args[static_cast<std::size_t>(i)].name, ct);
    out += "\n  | " + c.name + " : " + pretty(sig, params, ct);
  }
  return out;
}

}  // namespace npt::surface
