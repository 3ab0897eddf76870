#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/result.hpp"
#include "nullnrc/surface.hpp"

namespace nrc {

// Per-field policy for possibly-null result fields.
struct FieldPolicy {
  enum class Kind { Optional, Required, Default };
  Kind kind = Kind::Optional;
  std::optional<Constant> default_value;  // set iff kind == Default
};

struct NullHandler {
  std::vector<std::pair<std::string, FieldPolicy>> policies;

  // Unmentioned fields default to Optional, the only lossless choice
  // without nullability tracking.
  FieldPolicy policy_for(const std::string& label) const;
};

// Parses `<label: policy, ...>` with policies `optional`, `required`,
// `default <literal>`; labels and Default literal types are validated
// against result_ty, a set of records of base types.
Result<NullHandler, ParseError> parse_handler(std::string_view src, const TyPtr& result_ty);

// Wraps q in a comprehension applying the handler on the database side:
// Required fields filter via !isnull, Default fields substitute via a
// base-typed conditional, Optional fields pass through.
Result<TermPtr, std::string> desugar_db_side(const NullHandler& h, const TermPtr& q,
                                             const TyPtr& q_ty);

// Applies the handler to evaluated rows on the host side: Required drops
// rows with a null field, Default substitutes, Optional wraps values in
// none/some.
Result<Value, std::string> decode_host_side(const NullHandler& h, const Value& rows,
                                            const TyPtr& result_ty);

// Host-facing row type after decoding: Optional fields become options.
TyPtr decoded_row_ty(const NullHandler& h, const TyPtr& result_ty);

}  // namespace nrc
