#include "nullnrc/handlers.hpp"

namespace nrc {

FieldPolicy NullHandler::policy_for(const std::string& label) const {
  for (const auto& [l, p] : policies)
    if (l == label) return p;
  return FieldPolicy{};  // Optional
}

namespace {

const std::vector<TyField>* row_fields(const TyPtr& result_ty) {
  if (!ty_is_relation(result_ty)) return nullptr;
  return &ty_as<Ty::Record>(ty_as<Ty::Set>(result_ty).elem).fields;
}

ParseError handler_err(const SourceSpan& span, std::string msg, std::string expected = "") {
  return ParseError{span, std::move(msg), std::move(expected)};
}

}  // namespace

Result<NullHandler, ParseError> parse_handler(std::string_view src, const TyPtr& result_ty) {
  const auto* fields = row_fields(result_ty);
  if (!fields)
    return handler_err(SourceSpan{}, "handlers apply to flat queries (sets of base-typed records)");

  auto toks_r = lex(src);
  if (!toks_r) return toks_r.error();
  const std::vector<Token>& toks = toks_r.value();
  size_t pos = 0;
  auto cur = [&]() -> const Token& { return toks[pos]; };
  auto is_sym = [&](const char* s) {
    return cur().kind == TokKind::Symbol && cur().text == s;
  };

  NullHandler h;
  // The empty handler "<>" arrives as the single not-equals token.
  if (is_sym("<>")) {
    pos++;
    if (cur().kind != TokKind::End)
      return handler_err(cur().span, "trailing input after handler", "end of input");
    return h;
  }
  if (!is_sym("<")) return handler_err(cur().span, "handler must start with '<'", "'<'");
  pos++;
  if (is_sym(">")) {
    pos++;
  } else {
    for (;;) {
      if (cur().kind != TokKind::Ident)
        return handler_err(cur().span, "expected a field label", "field label");
      std::string label = cur().text;
      SourceSpan label_span = cur().span;
      pos++;
      const TyField* field = nullptr;
      for (const auto& f : *fields)
        if (f.first == label) field = &f;
      if (!field) return handler_err(label_span, "unknown field '" + label + "'");
      for (const auto& [l, p] : h.policies)
        if (l == label) return handler_err(label_span, "duplicate field '" + label + "'");

      if (!is_sym(":")) return handler_err(cur().span, "expected ':' after field label", "':'");
      pos++;

      FieldPolicy policy;
      if (cur().kind != TokKind::Ident)
        return handler_err(cur().span, "expected a policy", "optional | required | default");
      std::string word = cur().text;
      SourceSpan policy_span = cur().span;
      pos++;
      if (word == "optional") {
        policy.kind = FieldPolicy::Kind::Optional;
      } else if (word == "required") {
        policy.kind = FieldPolicy::Kind::Required;
      } else if (word == "default") {
        policy.kind = FieldPolicy::Kind::Default;
        bool negate = false;
        if (is_sym("-")) {
          negate = true;
          pos++;
        }
        Constant c = Constant::make_int(0);
        if (cur().kind == TokKind::Int) {
          c = Constant::make_int(negate ? -cur().int_val : cur().int_val);
        } else if (cur().kind == TokKind::Float) {
          c = Constant::make_float(negate ? -cur().float_val : cur().float_val);
        } else if (negate) {
          return handler_err(cur().span, "expected a number after '-'", "number");
        } else if (cur().kind == TokKind::String) {
          c = Constant::make_string(cur().string_val);
        } else if (cur().kind == TokKind::Ident && (cur().text == "true" || cur().text == "false")) {
          c = Constant::make_bool(cur().text == "true");
        } else {
          return handler_err(cur().span, "expected a literal after 'default'", "literal");
        }
        pos++;
        BaseTy col_ty = ty_as<Ty::Base>(field->second).b;
        if (c.ty != col_ty)
          return handler_err(policy_span, "default for '" + label + "' has type " +
                                              base_ty_name(c.ty) + ", column is " +
                                              base_ty_name(col_ty));
        policy.default_value = std::move(c);
      } else {
        return handler_err(policy_span, "unknown policy '" + word + "'",
                           "optional | required | default");
      }
      h.policies.emplace_back(std::move(label), std::move(policy));

      if (is_sym(",")) {
        pos++;
        continue;
      }
      if (!is_sym(">")) return handler_err(cur().span, "expected ',' or '>'", "',' or '>'");
      pos++;
      break;
    }
  }
  if (cur().kind != TokKind::End)
    return handler_err(cur().span, "trailing input after handler", "end of input");
  return h;
}

Result<TermPtr, std::string> desugar_db_side(const NullHandler& h, const TermPtr& q,
                                             const TyPtr& q_ty) {
  using namespace term;
  const auto* fields = row_fields(q_ty);
  if (!fields) return std::string("desugar_db_side requires a flat query");

  std::string x = fresh_name("row", free_vars(q));
  std::vector<TermField> out_fields;
  TermPtr filter;
  for (const auto& [label, field_ty] : *fields) {
    FieldPolicy policy = h.policy_for(label);
    TermPtr cell = project(var(x), label);
    switch (policy.kind) {
      case FieldPolicy::Kind::Optional:
        out_fields.emplace_back(label, cell);
        break;
      case FieldPolicy::Kind::Required: {
        out_fields.emplace_back(label, cell);
        TermPtr keep = prim("not", {is_null(project(var(x), label))});
        filter = filter ? prim("and", {filter, keep}) : keep;
        break;
      }
      case FieldPolicy::Kind::Default:
        out_fields.emplace_back(
            label, if_(is_null(project(var(x), label)), cnst(*policy.default_value), cell));
        break;
    }
  }
  TermPtr body = single(record(std::move(out_fields)));
  if (filter) body = where(body, filter);
  return comp(body, x, q);
}

Result<Value, std::string> decode_host_side(const NullHandler& h, const Value& rows,
                                            const TyPtr& result_ty) {
  const auto* fields = row_fields(result_ty);
  if (!fields) return std::string("decode_host_side requires a flat result type");
  if (!vis<VSet>(rows)) return std::string("decode_host_side expects a set of rows");

  std::vector<Value> out;
  for (const Value& row : vas<VSet>(rows).elems) {
    if (!vis<VRecord>(row)) return std::string("decode_host_side expects record rows");
    std::vector<std::pair<std::string, Value>> decoded;
    bool drop = false;
    for (const auto& [label, cell] : vas<VRecord>(row).fields) {
      FieldPolicy policy = h.policy_for(label);
      bool is_null_cell = vis<VNull>(cell);
      switch (policy.kind) {
        case FieldPolicy::Kind::Optional:
          decoded.emplace_back(label, is_null_cell ? val::none() : val::some(cell));
          break;
        case FieldPolicy::Kind::Required:
          if (is_null_cell) drop = true;
          decoded.emplace_back(label, cell);
          break;
        case FieldPolicy::Kind::Default:
          decoded.emplace_back(label, is_null_cell ? val::cnst(*policy.default_value) : cell);
          break;
      }
      if (drop) break;
    }
    if (!drop) out.push_back(val::record(std::move(decoded)));
  }
  return val::set(std::move(out));
}

TyPtr decoded_row_ty(const NullHandler& h, const TyPtr& result_ty) {
  const auto* fields = row_fields(result_ty);
  if (!fields) return nullptr;
  std::vector<TyField> out;
  for (const auto& [label, field_ty] : *fields) {
    if (h.policy_for(label).kind == FieldPolicy::Kind::Optional)
      out.emplace_back(label, ty::option(field_ty));
    else
      out.emplace_back(label, field_ty);
  }
  return ty::record(std::move(out));
}

}  // namespace nrc
