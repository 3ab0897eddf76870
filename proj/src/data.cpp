#include "nullnrc/data.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace nrc {

using json = nlohmann::ordered_json;

const TableDecl* Schema::find_table(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

TyPtr table_row_ty(const TableDecl& table, Mode mode) {
  std::vector<TyField> fields;
  for (const auto& col : table.columns) {
    TyPtr base = ty::base(col.ty);
    if (mode == Mode::NRC_OPT && col.nullable)
      fields.emplace_back(col.name, ty::option(std::move(base)));
    else
      fields.emplace_back(col.name, std::move(base));
  }
  return ty::record(std::move(fields));
}

const std::vector<std::vector<Value>>* Database::rows_of(std::string_view table) const {
  for (size_t i = 0; i < schema.tables.size(); i++)
    if (schema.tables[i].name == table) return &rows[i];
  return nullptr;
}

namespace {

LoadError mk_err(LoadError::Kind k, std::string detail) { return {k, std::move(detail)}; }

// Tracks object keys under the top-level "tables" object during parsing;
// nlohmann maps silently overwrite duplicate keys, so this is the only
// place duplicates are visible.
struct DuplicateTableDetector {
  int level = 0;
  std::vector<std::string> path;
  std::string pending_key;
  std::set<std::string> seen;
  std::string duplicate;

  bool on_event(json::parse_event_t event, const json& parsed) {
    switch (event) {
      case json::parse_event_t::key:
        pending_key = parsed.get<std::string>();
        if (level == 2 && path.size() == 2 && path[1] == "tables") {
          if (!seen.insert(pending_key).second && duplicate.empty()) duplicate = pending_key;
        }
        break;
      case json::parse_event_t::object_start:
      case json::parse_event_t::array_start:
        path.push_back(pending_key);
        pending_key.clear();
        level++;
        break;
      case json::parse_event_t::object_end:
      case json::parse_event_t::array_end:
        level--;
        path.pop_back();
        break;
      default:
        break;
    }
    return true;
  }
};

Result<Value, LoadError> cell_value(const json& cell, const ColumnDecl& col,
                                    const std::string& table, size_t row_index) {
  if (cell.is_null()) {
    if (!col.nullable)
      return mk_err(LoadError::Kind::NullInNonNullable,
                    "table '" + table + "': null in non-nullable column '" + col.name +
                        "' at row " + std::to_string(row_index));
    return val::null_();
  }
  switch (col.ty) {
    case BaseTy::Int:
      if (cell.is_number_integer() || cell.is_number_unsigned())
        return val::int_(cell.get<std::int64_t>());
      break;
    case BaseTy::Bool:
      if (cell.is_boolean()) return val::bool_(cell.get<bool>());
      break;
    case BaseTy::String:
      if (cell.is_string()) return val::str(cell.get<std::string>());
      break;
    case BaseTy::Float:
      if (cell.is_number()) return val::flt(cell.get<double>());
      break;
  }
  return mk_err(LoadError::Kind::TypeMismatch,
                "table '" + table + "': value " + cell.dump() + " does not match column '" +
                    col.name + "' of type " + base_ty_name(col.ty) + " at row " +
                    std::to_string(row_index));
}

int row_cmp(const std::vector<Value>& a, const std::vector<Value>& b) {
  for (size_t i = 0; i < a.size(); i++) {
    int c = value_cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

Result<LoadResult, LoadError> load_database(std::string_view json_text) {
  DuplicateTableDetector dup;
  json doc;
  try {
    doc = json::parse(json_text, [&dup](int, json::parse_event_t event, json& parsed) {
      return dup.on_event(event, parsed);
    });
  } catch (const json::parse_error& e) {
    return mk_err(LoadError::Kind::MalformedDocument, e.what());
  }
  if (!dup.duplicate.empty())
    return mk_err(LoadError::Kind::DuplicateTable, "duplicate table '" + dup.duplicate + "'");
  if (!doc.is_object() || !doc.contains("tables") || !doc["tables"].is_object())
    return mk_err(LoadError::Kind::MalformedDocument,
                  "expected a top-level object with a \"tables\" object");

  LoadResult out;
  for (const auto& [table_name, table_json] : doc["tables"].items()) {
    if (!table_json.is_object() || !table_json.contains("columns") ||
        !table_json["columns"].is_array())
      return mk_err(LoadError::Kind::MalformedDocument,
                    "table '" + table_name + "': expected an object with a \"columns\" array");
    TableDecl table;
    table.name = table_name;
    std::set<std::string> col_names;
    for (const auto& col_json : table_json["columns"]) {
      if (!col_json.is_object() || !col_json.contains("name") || !col_json["name"].is_string() ||
          !col_json.contains("type") || !col_json["type"].is_string())
        return mk_err(LoadError::Kind::MalformedDocument,
                      "table '" + table_name + "': columns need \"name\" and \"type\" strings");
      ColumnDecl col;
      col.name = col_json["name"].get<std::string>();
      auto ty = base_ty_from_name(col_json["type"].get<std::string>());
      if (!ty)
        return mk_err(LoadError::Kind::MalformedDocument,
                      "table '" + table_name + "': unknown column type " + col_json["type"].dump());
      col.ty = *ty;
      if (col_json.contains("nullable")) {
        if (!col_json["nullable"].is_boolean())
          return mk_err(LoadError::Kind::MalformedDocument,
                        "table '" + table_name + "': \"nullable\" must be a boolean");
        col.nullable = col_json["nullable"].get<bool>();
      }
      if (!col_names.insert(col.name).second)
        return mk_err(LoadError::Kind::MalformedDocument,
                      "table '" + table_name + "': duplicate column '" + col.name + "'");
      table.columns.push_back(std::move(col));
    }
    if (table.columns.empty())
      return mk_err(LoadError::Kind::MalformedDocument,
                    "table '" + table_name + "': needs at least one column");

    std::vector<std::vector<Value>> rows;
    if (table_json.contains("rows")) {
      if (!table_json["rows"].is_array())
        return mk_err(LoadError::Kind::MalformedDocument,
                      "table '" + table_name + "': \"rows\" must be an array");
      size_t row_index = 0;
      for (const auto& row_json : table_json["rows"]) {
        if (!row_json.is_array() || row_json.size() != table.columns.size())
          return mk_err(LoadError::Kind::MalformedDocument,
                        "table '" + table_name + "': row " + std::to_string(row_index) +
                            " must be an array of " + std::to_string(table.columns.size()) +
                            " values");
        std::vector<Value> row;
        for (size_t c = 0; c < table.columns.size(); c++) {
          auto v = cell_value(row_json[c], table.columns[c], table_name, row_index);
          if (!v) return v.error();
          row.push_back(std::move(v.value()));
        }
        rows.push_back(std::move(row));
        row_index++;
      }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return row_cmp(a, b) < 0; });
    size_t before = rows.size();
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [](const auto& a, const auto& b) { return row_cmp(a, b) == 0; }),
               rows.end());
    if (rows.size() != before)
      out.warnings.push_back("table '" + table_name + "': removed " +
                             std::to_string(before - rows.size()) + " duplicate row(s)");

    out.db.schema.tables.push_back(std::move(table));
    out.db.rows.push_back(std::move(rows));
  }
  return out;
}

}  // namespace nrc
