#pragma once

#include <string>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/data.hpp"
#include "nullnrc/result.hpp"
#include "nullnrc/typing.hpp"

namespace nrc {

// Type translation for NRC_opt -> NRC: options become isnull/val records.
TyPtr opt_to_nrc_ty(const TyPtr& t);

// Type translation for NRC_null -> NRC_opt: every base type becomes an
// option of it.
TyPtr null_to_opt_ty(const TyPtr& t);

// A term producing default_value(t); contains no option constructs for
// option-free t.
TermPtr default_term(const TyPtr& t);

// A primitive lifted to option arguments: holes are the free variables
// $0..$n-1, filled by instantiate_lifted.
struct LiftedPrim {
  std::string base;
  int arity;
  TermPtr lifted;
};

LiftedPrim lift_prim(const PrimSig& sig);
TermPtr instantiate_lifted(const LiftedPrim& lp, const std::vector<TermPtr>& args);

// Translates a well-typed NRC_OPT term to plain NRC. The result contains
// no None/Some/Case and evaluates to the flattened value. Rejects queries
// over tables with nullable columns (their option-typed columns have no
// NRC table counterpart).
Result<TermPtr, std::string> opt_to_nrc(const TermPtr& m, const Schema& schema,
                                        const TyPtr& expected = nullptr);

// Translates a well-typed NRC_NULL term to NRC_OPT. The result contains no
// null/isnull and evaluates, against the option view of the same
// database, to the encoded value.
Result<TermPtr, std::string> null_to_opt(const TermPtr& m, const Schema& schema);

// Value encodings used by the translation correctness laws.
Value encode_null_value(const Value& v);                     // VNull -> none, c -> some c
Value flatten_opt_value(const Value& v, const TyPtr& ty);    // options -> isnull/val records

}  // namespace nrc
