#pragma once

#include <string>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/result.hpp"

namespace nrc {

struct ColumnDecl {
  std::string name;
  BaseTy ty;
  bool nullable = false;
};

struct TableDecl {
  std::string name;
  std::vector<ColumnDecl> columns;
};

struct Schema {
  std::vector<TableDecl> tables;

  const TableDecl* find_table(std::string_view name) const;
};

// Row type of a table as seen from a calculus mode: NRC_NULL keeps the
// declared base types (nulls implicit), NRC_OPT wraps nullable columns in
// an option, NRC sees plain base types (callers reject nullable tables in
// NRC mode; see typing).
TyPtr table_row_ty(const TableDecl& table, Mode mode);

struct Database {
  Schema schema;
  // Aligned with the schema's table order; each row aligned with the
  // table's column order. Row lists are canonical (deduped, sorted).
  std::vector<std::vector<std::vector<Value>>> rows;

  const std::vector<std::vector<Value>>* rows_of(std::string_view table) const;
};

struct LoadError {
  enum class Kind { MalformedDocument, DuplicateTable, TypeMismatch, NullInNonNullable };
  Kind kind;
  std::string detail;
};

struct LoadResult {
  Database db;
  std::vector<std::string> warnings;  // e.g. duplicate-row reports
};

Result<LoadResult, LoadError> load_database(std::string_view json_text);

}  // namespace nrc
