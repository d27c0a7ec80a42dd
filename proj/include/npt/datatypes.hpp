#pragma once

#include <optional>

#include "npt/signature.hpp"

namespace npt {

// Classify every constructor argument of `d` against the positivity grammar
// Const | Rec | BridgeRec, writing the classification into the arg specs.
// Any occurrence of the data type outside those shapes is rejected with
// NegativeOccurrence (self left of an arrow) or NestedOccurrence (self under
// any other type former). Parameter mismatches on Rec/BridgeRec shapes are
// NestedOccurrence as well.
void check_positivity(DataDecl& d);

// Pi-type of the data former itself: params -> U.
TermPtr data_former_type(const DataDecl& d);

// Pi-type of a fully applied constructor: params -> args -> D params.
TermPtr ctor_type(const DataDecl& d, const CtorSig& c);

// Pi-type of the generated dependent eliminator:
//   params -> (M : D params -> U) -> one method per constructor -> (s : D params) -> M s
// where a method takes the constructor arguments and then one induction
// hypothesis per Rec arg (M r) and per BridgeRec arg ((x:@I) -o M (g x)).
TermPtr eliminator_type(const DataDecl& d);

// Contract an eliminator application whose scrutinee is a constructor
// application of the right data type: the matching method applied to the
// constructor arguments, then the recursive calls. nullopt when the
// scrutinee is not a constructor application (stuck).
std::optional<TermPtr> iota_reduce(const Signature& sig, const TermPtr& elim);

}  // namespace npt
