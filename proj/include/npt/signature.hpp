#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "npt/term.hpp"

namespace npt {

// Classification of a constructor argument. The positivity checker admits
// exactly these three shapes; everything else is rejected.
enum class ArgClass {
  Const,      // a type not mentioning the data type being declared
  Rec,        // the data type itself, at the declaration's own parameters
  BridgeRec,  // @I -o D params
};

struct CtorArg {
  std::string name;  // display name for the eliminator's method binders
  ArgClass cls = ArgClass::Const;
  // The argument type as written, in scope of the data parameters and the
  // previous constructor arguments.
  TermPtr type;
};

struct CtorSig {
  std::string name;
  std::string data;  // owning declaration
  std::vector<CtorArg> args;
};

struct DataDecl {
  std::string name;
  // Cartesian parameter telescope; each type is in scope of the previous
  // parameters.
  std::vector<std::pair<std::string, TermPtr>> params;
  std::vector<CtorSig> ctors;
  std::string elim_name;  // "elim" + name

  const CtorSig* find_ctor(const std::string& c) const {
    for (const auto& k : ctors)
      if (k.name == c) return &k;
    return nullptr;
  }
};

struct Def {
  std::string name;
  TermPtr type;
  TermPtr body;  // null for postulates
  bool golden = false;

  bool is_postulate() const { return body == nullptr; }
};

// A checked, append-only sequence of global declarations. Data declarations
// also claim their constructor names and the generated eliminator name.
class Signature {
 public:
  struct Item {
    enum class Kind { Def, Data } kind;
    std::string name;
  };

  bool has(const std::string& n) const;
  const Def* find_def(const std::string& n) const;
  const DataDecl* find_data(const std::string& n) const;
  const CtorSig* find_ctor(const std::string& n) const;
  const DataDecl* find_data_of_ctor(const std::string& n) const;
  const DataDecl* find_data_of_elim(const std::string& n) const;

  // Both throw DuplicateName if any claimed name is already taken.
  void add_def(Def d);
  void add_data(DataDecl d);

  const std::vector<Item>& items() const { return items_; }

 private:
  void claim(const std::string& n);

  std::vector<Item> items_;
  std::map<std::string, Def> defs_;
  std::map<std::string, DataDecl> datas_;
  std::map<std::string, std::string> ctor_owner_;
  std::map<std::string, std::string> elim_owner_;
};

}  // namespace npt
