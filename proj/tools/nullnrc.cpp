#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nullnrc/eval.hpp"
#include "nullnrc/handlers.hpp"
#include "nullnrc/rewrite.hpp"
#include "nullnrc/sqlgen.hpp"
#include "nullnrc/surface.hpp"
#include "nullnrc/translate.hpp"
#include "nullnrc/typing.hpp"

namespace {

constexpr int kExitUser = 1;      // parse/type/load errors
constexpr int kExitInternal = 2;  // contract violations

struct CliConfig {
  std::string mode_name = "nrc_null";
  std::string db_path;
  std::string query_path;
  std::string handler_path;
  std::string out_path;
  std::string from_name;
  std::string to_name;
  int fuel = 10000;
  bool emit_only = false;
  bool warn_duplicates = false;
  bool json_output = false;
};

[[noreturn]] void die(const std::string& msg, int code = kExitUser) {
  std::cerr << "nullnrc: " << msg << "\n";
  std::exit(code);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const CliConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) die("cannot write '" + cfg.out_path + "'");
  out << text;
}

nrc::Mode parse_mode(const std::string& name) {
  auto m = nrc::mode_from_name(name);
  if (!m) die("unknown mode '" + name + "' (expected nrc, nrc_opt, nrc_null)");
  return *m;
}

nrc::TermPtr parse_query(const CliConfig& cfg) {
  auto r = nrc::parse_term(read_file(cfg.query_path));
  if (!r) die(nrc::format_parse_error(r.error()));
  return r.value();
}

nrc::LoadResult load_db(const CliConfig& cfg) {
  if (cfg.db_path.empty()) die("this command needs --db FILE");
  auto r = nrc::load_database(read_file(cfg.db_path));
  if (!r) die(r.error().detail);
  if (cfg.warn_duplicates)
    for (const auto& w : r.value().warnings) std::cerr << "nullnrc: warning: " << w << "\n";
  return std::move(r.value());
}

nlohmann::ordered_json value_to_json(const nrc::Value& v) {
  using nrc::vas;
  using nrc::vis;
  if (vis<nrc::VNull>(v)) return nullptr;
  if (vis<nrc::VNone>(v)) return nlohmann::ordered_json{{"none", true}};
  if (vis<nrc::VSome>(v))
    return nlohmann::ordered_json{{"some", value_to_json(*vas<nrc::VSome>(v).payload)}};
  if (vis<nrc::Constant>(v)) {
    const nrc::Constant& c = vas<nrc::Constant>(v);
    switch (c.ty) {
      case nrc::BaseTy::Int: return c.as_int();
      case nrc::BaseTy::Bool: return c.as_bool();
      case nrc::BaseTy::String: return c.as_string();
      case nrc::BaseTy::Float: return c.as_float();
    }
  }
  if (vis<nrc::VRecord>(v)) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [label, field] : vas<nrc::VRecord>(v).fields)
      obj[label] = value_to_json(field);
    return obj;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : vas<nrc::VSet>(v).elems) arr.push_back(value_to_json(e));
  return arr;
}

int fuel_from_env(int fallback) {
  const char* env = std::getenv("NULLNRC_FUEL");
  if (!env) return fallback;
  int v = std::atoi(env);
  return v > 0 ? v : fallback;
}

nrc::TyPtr check_query(nrc::Mode mode, const nrc::Schema& schema, const nrc::TermPtr& q) {
  nrc::TypeEnv env;
  auto ty = nrc::typecheck(mode, schema, env, q);
  if (!ty) die(nrc::format_type_error(ty.error()));
  return ty.value();
}

int cmd_check(const CliConfig& cfg, const nrc::Schema& schema) {
  nrc::TermPtr q = parse_query(cfg);
  nrc::TypeEnv env;
  auto ty = nrc::typecheck(parse_mode(cfg.mode_name), schema, env, q);
  if (!ty) die(nrc::format_type_error(ty.error()));
  write_output(cfg, nrc::pretty_ty(ty.value()) + "\n");
  return 0;
}

int cmd_eval(const CliConfig& cfg) {
  nrc::Mode mode = parse_mode(cfg.mode_name);
  nrc::LoadResult loaded = load_db(cfg);
  nrc::TermPtr q = parse_query(cfg);
  nrc::TyPtr ty = check_query(mode, loaded.db.schema, q);

  nrc::ValueEnv venv;
  auto v = nrc::eval(mode, loaded.db, venv, q);
  if (!v) {
    bool internal = v.error().kind == nrc::EvalError::Kind::StuckTerm ||
                    v.error().kind == nrc::EvalError::Kind::UnboundVar;
    die(nrc::format_eval_error(v.error()), internal ? kExitInternal : kExitUser);
  }
  nrc::Value result = v.value();

  if (!cfg.handler_path.empty()) {
    auto h = nrc::parse_handler(read_file(cfg.handler_path), ty);
    if (!h) die(nrc::format_parse_error(h.error()));
    auto decoded = nrc::decode_host_side(h.value(), result, ty);
    if (!decoded) die(decoded.error(), kExitInternal);
    result = decoded.value();
  }

  if (cfg.json_output)
    write_output(cfg, value_to_json(result).dump() + "\n");
  else
    write_output(cfg, nrc::pretty_value(result) + "\n");
  return 0;
}

int cmd_normalize(const CliConfig& cfg, const nrc::Schema& schema, bool print_trace) {
  nrc::Mode mode = parse_mode(cfg.mode_name);
  nrc::TermPtr q = parse_query(cfg);
  nrc::TyPtr ty = check_query(mode, schema, q);
  auto norm = nrc::normalize(mode, schema, q, cfg.fuel, ty);
  if (norm.fuel_exhausted) {
    std::cerr << "nullnrc: fuel exhausted after " << cfg.fuel
              << " steps; possible non-termination. Last steps:\n";
    size_t shown = std::min<size_t>(norm.trace.size(), 10);
    nrc::Trace tail(norm.trace.end() - shown, norm.trace.end());
    std::cerr << nrc::trace_to_text(tail);
    return kExitUser;
  }
  if (print_trace)
    write_output(cfg, nrc::trace_to_text(norm.trace));
  else
    write_output(cfg, nrc::pretty(norm.term) + "\n");
  return 0;
}

int cmd_translate(const CliConfig& cfg, const nrc::Schema& schema) {
  if (cfg.from_name.empty() || cfg.to_name.empty()) die("translate needs --from and --to");
  nrc::Mode from = parse_mode(cfg.from_name);
  nrc::Mode to = parse_mode(cfg.to_name);
  nrc::TermPtr q = parse_query(cfg);
  if (from == nrc::Mode::NRC_OPT && to == nrc::Mode::NRC) {
    auto r = nrc::opt_to_nrc(q, schema);
    if (!r) die(r.error());
    write_output(cfg, nrc::pretty(r.value()) + "\n");
    return 0;
  }
  if (from == nrc::Mode::NRC_NULL && to == nrc::Mode::NRC_OPT) {
    check_query(nrc::Mode::NRC_NULL, schema, q);
    auto r = nrc::null_to_opt(q, schema);
    if (!r) die(r.error());
    write_output(cfg, nrc::pretty(r.value()) + "\n");
    return 0;
  }
  die("unsupported translation pair (supported: nrc_opt -> nrc, nrc_null -> nrc_opt)");
}

int cmd_sql(const CliConfig& cfg) {
  nrc::Schema schema;
  nrc::Database db;
  nrc::LoadResult loaded;
  if (!cfg.db_path.empty()) {
    loaded = load_db(cfg);
    schema = loaded.db.schema;
    db = loaded.db;
  } else if (!cfg.emit_only) {
    die("sql needs --db FILE (or --emit-only with a table-free query)");
  }

  nrc::TermPtr q = parse_query(cfg);
  nrc::TyPtr ty = check_query(nrc::Mode::NRC_NULL, schema, q);
  if (!nrc::ty_is_relation(ty))
    die("query is not flat (expected a set of records of base values), got " + nrc::pretty_ty(ty));

  auto norm = nrc::normalize(nrc::Mode::NRC_NULL, schema, q, cfg.fuel, ty);
  if (norm.fuel_exhausted) die("fuel exhausted during normalization");
  if (!nrc::is_sql_normal_form(norm.term, schema, ty))
    die("query does not normalize to SQL normal form: " + nrc::pretty(norm.term));

  auto sql = nrc::to_sql(norm.term, schema, ty);
  if (!sql) die(sql.error());

  if (!cfg.emit_only) {
    nrc::ValueEnv venv;
    auto direct = nrc::eval(nrc::Mode::NRC_NULL, db, venv, q);
    if (!direct) die(nrc::format_eval_error(direct.error()));
    auto oracle = nrc::sql_oracle_eval(sql.value(), db);
    if (!oracle) die(oracle.error(), kExitInternal);
    if (!(direct.value() == oracle.value()))
      die("SQL oracle disagrees with direct evaluation:\n  eval:   " +
              nrc::pretty_value(direct.value()) + "\n  oracle: " +
              nrc::pretty_value(oracle.value()),
          kExitInternal);
  }
  write_output(cfg, nrc::render(sql.value()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested relational calculus with nulls: typechecker, evaluator, "
               "normalizer, translators, and SQL emitter"};
  app.require_subcommand(1);

  CliConfig cfg;
  cfg.fuel = fuel_from_env(10000);

  auto add_common = [&cfg](CLI::App* sub, bool with_mode = true) {
    sub->add_option("query", cfg.query_path, "query file")->required();
    if (with_mode)
      sub->add_option("--mode", cfg.mode_name, "calculus: nrc | nrc_opt | nrc_null")
          ->capture_default_str();
    sub->add_option("--db", cfg.db_path, "database JSON file");
    sub->add_option("--fuel", cfg.fuel, "rewrite step budget")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "write output to a file instead of stdout");
    sub->add_flag("--warn-duplicates", cfg.warn_duplicates, "report duplicate rows dropped on load");
  };

  CLI::App* check = app.add_subcommand("check", "typecheck a query and print its type");
  add_common(check);

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a query against a database");
  add_common(eval_cmd);
  eval_cmd->add_option("--handler", cfg.handler_path, "null handler file applied to the result");
  eval_cmd->add_flag("--json-output", cfg.json_output, "print the result value as JSON");

  CLI::App* normalize_cmd = app.add_subcommand("normalize", "normalize a query and print it");
  add_common(normalize_cmd);

  CLI::App* trace_cmd = app.add_subcommand("trace", "normalize a query and print the rewrite trace");
  add_common(trace_cmd);

  CLI::App* translate_cmd = app.add_subcommand("translate", "translate between calculi");
  add_common(translate_cmd, /*with_mode=*/false);
  translate_cmd->add_option("--from", cfg.from_name, "source calculus")->required();
  translate_cmd->add_option("--to", cfg.to_name, "target calculus")->required();

  CLI::App* sql_cmd = app.add_subcommand("sql", "normalize a flat query and emit SQL");
  add_common(sql_cmd, /*with_mode=*/false);
  sql_cmd->add_flag("--emit-only", cfg.emit_only, "skip the built-in oracle cross-check");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(eval_cmd)) return cmd_eval(cfg);
  if (app.got_subcommand(sql_cmd)) return cmd_sql(cfg);

  nrc::Schema schema;
  if (!cfg.db_path.empty()) schema = load_db(cfg).db.schema;
  if (app.got_subcommand(check)) return cmd_check(cfg, schema);
  if (app.got_subcommand(normalize_cmd)) return cmd_normalize(cfg, schema, false);
  if (app.got_subcommand(trace_cmd)) return cmd_normalize(cfg, schema, true);
  if (app.got_subcommand(translate_cmd)) return cmd_translate(cfg, schema);
  return kExitUser;
}
