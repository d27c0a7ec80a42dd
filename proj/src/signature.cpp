#include "npt/signature.hpp"

#include <set>

namespace npt {

bool Signature::has(const std::string& n) const {
  return defs_.count(n) || datas_.count(n) || ctor_owner_.count(n) || elim_owner_.count(n);
}

const Def* Signature::find_def(const std::string& n) const {
  auto it = defs_.find(n);
  return it == defs_.end() ? nullptr : &it->second;
}

const DataDecl* Signature::find_data(const std::string& n) const {
  auto it = datas_.find(n);
  return it == datas_.end() ? nullptr : &it->second;
}

const CtorSig* Signature::find_ctor(const std::string& n) const {
  const DataDecl* d = find_data_of_ctor(n);
  return d ? d->find_ctor(n) : nullptr;
}

const DataDecl* Signature::find_data_of_ctor(const std::string& n) const {
  auto it = ctor_owner_.find(n);
  return it == ctor_owner_.end() ? nullptr : &datas_.at(it->second);
}

const DataDecl* Signature::find_data_of_elim(const std::string& n) const {
  auto it = elim_owner_.find(n);
  return it == elim_owner_.end() ? nullptr : &datas_.at(it->second);
}

void Signature::claim(const std::string& n) {
  if (has(n)) fail(ErrorCode::DuplicateName, "duplicate global name '" + n + "'");
}

void Signature::add_def(Def d) {
  claim(d.name);
  items_.push_back({Item::Kind::Def, d.name});
  std::string n = d.name;
  defs_.emplace(std::move(n), std::move(d));
}

void Signature::add_data(DataDecl d) {
  std::set<std::string> fresh;
  auto take = [&](const std::string& n) {
    claim(n);
    if (!fresh.insert(n).second)
      fail(ErrorCode::DuplicateName, "duplicate global name '" + n + "'");
  };
  take(d.name);
  take(d.elim_name);
  for (const auto& c : d.ctors) take(c.name);

  items_.push_back({Item::Kind::Data, d.name});
  elim_owner_.emplace(d.elim_name, d.name);
  for (const auto& c : d.ctors) ctor_owner_.emplace(c.name, d.name);
  std::string n = d.name;
  datas_.emplace(std::move(n), std::move(d));
}

}  // namespace npt
