#include "nullnrc/surface.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>

namespace nrc {

std::string format_parse_error(const ParseError& e) {
  std::ostringstream os;
  if (e.span.file) os << *e.span.file << ":";
  os << e.span.start.line << ":" << e.span.start.column << ": " << e.message;
  if (!e.expected.empty()) os << " (expected " << e.expected << ")";
  return os.str();
}

bool is_reserved_word(std::string_view w) {
  static const std::set<std::string, std::less<>> kReserved = {
      "if",   "then",  "else",   "for",  "yield", "where", "table", "empty",
      "isnull", "case", "of",    "none", "some",  "null",  "true",  "false"};
  return kReserved.count(w) > 0;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view src;
  size_t i = 0;
  int line = 1, col = 1;

  bool done() const { return i >= src.size(); }
  char peek(size_t k = 0) const { return i + k < src.size() ? src[i + k] : '\0'; }
  char advance() {
    char c = src[i++];
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    return c;
  }
  SourcePos pos() const { return {line, col}; }
};

ParseError err_at(SourcePos p, std::string msg, std::string expected = "") {
  return ParseError{SourceSpan{p, p, std::nullopt}, std::move(msg), std::move(expected)};
}

}  // namespace

Result<std::vector<Token>, ParseError> lex(std::string_view src) {
  std::vector<Token> toks;
  Cursor c{src};
  while (!c.done()) {
    char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      c.advance();
      continue;
    }
    if (ch == '#') {
      while (!c.done() && c.peek() != '\n') c.advance();
      continue;
    }
    SourcePos start = c.pos();
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string num;
      while (std::isdigit(static_cast<unsigned char>(c.peek()))) num += c.advance();
      bool is_float = false;
      if (c.peek() == '.' && std::isdigit(static_cast<unsigned char>(c.peek(1)))) {
        is_float = true;
        num += c.advance();
        while (std::isdigit(static_cast<unsigned char>(c.peek()))) num += c.advance();
      }
      if ((c.peek() == 'e' || c.peek() == 'E') &&
          (std::isdigit(static_cast<unsigned char>(c.peek(1))) ||
           ((c.peek(1) == '+' || c.peek(1) == '-') &&
            std::isdigit(static_cast<unsigned char>(c.peek(2)))))) {
        is_float = true;
        num += c.advance();
        if (c.peek() == '+' || c.peek() == '-') num += c.advance();
        while (std::isdigit(static_cast<unsigned char>(c.peek()))) num += c.advance();
      }
      Token t;
      t.span = {start, c.pos(), std::nullopt};
      if (is_float) {
        t.kind = TokKind::Float;
        t.float_val = std::strtod(num.c_str(), nullptr);
      } else {
        t.kind = TokKind::Int;
        t.int_val = std::strtoll(num.c_str(), nullptr, 10);
      }
      t.text = num;
      toks.push_back(std::move(t));
      continue;
    }
    if (ch == '"') {
      c.advance();
      std::string out;
      bool closed = false;
      while (!c.done()) {
        char d = c.advance();
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\') {
          if (c.done()) break;
          char e = c.advance();
          switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            default:
              return err_at(start, std::string("invalid escape '\\") + e + "' in string literal",
                            "one of \\\" \\\\ \\n \\t \\r");
          }
        } else if (d == '\n') {
          return err_at(start, "unterminated string literal", "closing '\"'");
        } else {
          out += d;
        }
      }
      if (!closed) return err_at(start, "unterminated string literal", "closing '\"'");
      Token t;
      t.kind = TokKind::String;
      t.string_val = std::move(out);
      t.span = {start, c.pos(), std::nullopt};
      toks.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_')
        word += c.advance();
      Token t;
      t.kind = TokKind::Ident;
      t.text = std::move(word);
      t.span = {start, c.pos(), std::nullopt};
      toks.push_back(std::move(t));
      continue;
    }
    // Symbols, longest match first.
    static const char* kTwo[] = {"<-", "->", "++", "&&", "||", "<=", ">=", "<>"};
    std::string sym;
    for (const char* s : kTwo) {
      if (c.peek() == s[0] && c.peek(1) == s[1]) {
        sym = s;
        break;
      }
    }
    if (!sym.empty()) {
      c.advance();
      c.advance();
    } else {
      static const std::string kOne = "()[]{},.=<>+-*/!|:";
      if (kOne.find(ch) == std::string::npos)
        return err_at(start, std::string("unexpected character '") + ch + "'");
      sym = std::string(1, c.advance());
    }
    Token t;
    t.kind = TokKind::Symbol;
    t.text = sym;
    t.span = {start, c.pos(), std::nullopt};
    toks.push_back(std::move(t));
  }
  Token end;
  end.kind = TokKind::End;
  end.span = {c.pos(), c.pos(), std::nullopt};
  toks.push_back(std::move(end));
  return toks;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Result<TermPtr, ParseError> run() {
    auto t = expr();
    if (!t) return t;
    if (!at_end()) return fail("trailing input after term", "end of input");
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  bool at_end() const { return cur().kind == TokKind::End; }
  bool is_sym(const char* s) const { return cur().kind == TokKind::Symbol && cur().text == s; }
  bool is_word(const char* w) const { return cur().kind == TokKind::Ident && cur().text == w; }
  void bump() { pos_++; }

  Result<TermPtr, ParseError> fail(std::string msg, std::string expected = "") const {
    return ParseError{cur().span, std::move(msg), std::move(expected)};
  }

  std::optional<ParseError> expect_sym(const char* s) {
    if (is_sym(s)) {
      bump();
      return std::nullopt;
    }
    return ParseError{cur().span, "unexpected " + describe(cur()), std::string("'") + s + "'"};
  }
  std::optional<ParseError> expect_word(const char* w) {
    if (is_word(w)) {
      bump();
      return std::nullopt;
    }
    return ParseError{cur().span, "unexpected " + describe(cur()), std::string("'") + w + "'"};
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokKind::Int:
      case TokKind::Float: return "number '" + t.text + "'";
      case TokKind::String: return "string literal";
      case TokKind::Ident: return "'" + t.text + "'";
      case TokKind::Symbol: return "'" + t.text + "'";
      case TokKind::End: return "end of input";
    }
    return "token";
  }

  Result<std::string, ParseError> ident(const char* what) {
    if (cur().kind != TokKind::Ident)
      return ParseError{cur().span, "unexpected " + describe(cur()), what};
    if (is_reserved_word(cur().text))
      return ParseError{cur().span, "reserved word '" + cur().text + "' cannot be used as " + what,
                        what};
    std::string name = cur().text;
    bump();
    return name;
  }

  // Record labels live in unambiguous positions (after '{'/',' and '.'),
  // so reserved words are fine there; the option-elimination translation
  // relies on the label "isnull" in particular.
  Result<std::string, ParseError> label_ident(const char* what) {
    if (cur().kind != TokKind::Ident)
      return ParseError{cur().span, "unexpected " + describe(cur()), what};
    std::string name = cur().text;
    bump();
    return name;
  }

  Result<TermPtr, ParseError> expr() { return where_chain(); }

  Result<TermPtr, ParseError> where_chain() {
    auto lhs = union_chain();
    if (!lhs) return lhs;
    TermPtr t = lhs.value();
    while (is_word("where")) {
      bump();
      auto rhs = union_chain();
      if (!rhs) return rhs;
      t = term::where(t, rhs.value());
    }
    return t;
  }

  Result<TermPtr, ParseError> union_chain() {
    auto lhs = or_chain();
    if (!lhs) return lhs;
    TermPtr t = lhs.value();
    while (is_sym("++")) {
      bump();
      auto rhs = or_chain();
      if (!rhs) return rhs;
      t = term::union_(t, rhs.value());
    }
    return t;
  }

  Result<TermPtr, ParseError> or_chain() {
    auto lhs = and_chain();
    if (!lhs) return lhs;
    TermPtr t = lhs.value();
    while (is_sym("||")) {
      bump();
      auto rhs = and_chain();
      if (!rhs) return rhs;
      t = term::prim("or", {t, rhs.value()});
    }
    return t;
  }

  Result<TermPtr, ParseError> and_chain() {
    auto lhs = cmp_expr();
    if (!lhs) return lhs;
    TermPtr t = lhs.value();
    while (is_sym("&&")) {
      bump();
      auto rhs = cmp_expr();
      if (!rhs) return rhs;
      t = term::prim("and", {t, rhs.value()});
    }
    return t;
  }

  Result<TermPtr, ParseError> cmp_expr() {
    auto lhs = add_expr();
    if (!lhs) return lhs;
    static const char* kCmp[] = {"=", "<>", "<", "<=", ">", ">="};
    for (const char* op : kCmp) {
      if (is_sym(op)) {
        bump();
        auto rhs = add_expr();
        if (!rhs) return rhs;
        return term::prim(op, {lhs.value(), rhs.value()});  // non-associative
      }
    }
    return lhs;
  }

  Result<TermPtr, ParseError> add_expr() {
    auto lhs = mul_expr();
    if (!lhs) return lhs;
    TermPtr t = lhs.value();
    while (is_sym("+") || is_sym("-")) {
      std::string op = cur().text;
      bump();
      auto rhs = mul_expr();
      if (!rhs) return rhs;
      t = term::prim(op, {t, rhs.value()});
    }
    return t;
  }

  Result<TermPtr, ParseError> mul_expr() {
    auto lhs = unary_expr();
    if (!lhs) return lhs;
    TermPtr t = lhs.value();
    while (is_sym("*") || is_sym("/")) {
      std::string op = cur().text;
      bump();
      auto rhs = unary_expr();
      if (!rhs) return rhs;
      t = term::prim(op, {t, rhs.value()});
    }
    return t;
  }

  Result<TermPtr, ParseError> unary_expr() {
    if (is_sym("!")) {
      bump();
      auto arg = unary_expr();
      if (!arg) return arg;
      return term::prim("not", {arg.value()});
    }
    if (is_sym("-")) {
      bump();
      if (cur().kind == TokKind::Int) {
        auto v = cur().int_val;
        bump();
        return term::int_(-v);
      }
      if (cur().kind == TokKind::Float) {
        auto v = cur().float_val;
        bump();
        return term::flt(-v);
      }
      return fail("'-' must be followed by a numeric literal here", "number");
    }
    if (is_word("some")) {
      bump();
      auto arg = unary_expr();
      if (!arg) return arg;
      return term::some(arg.value());
    }
    return postfix_expr();
  }

  Result<TermPtr, ParseError> postfix_expr() {
    auto base = primary();
    if (!base) return base;
    TermPtr t = base.value();
    while (is_sym(".")) {
      bump();
      auto label = label_ident("a field label");
      if (!label) return label.error();
      t = term::project(t, label.value());
    }
    return t;
  }

  Result<TermPtr, ParseError> primary() {
    const Token& tok = cur();
    switch (tok.kind) {
      case TokKind::Int: {
        auto v = tok.int_val;
        bump();
        return term::int_(v);
      }
      case TokKind::Float: {
        auto v = tok.float_val;
        bump();
        return term::flt(v);
      }
      case TokKind::String: {
        auto v = tok.string_val;
        bump();
        return term::str(std::move(v));
      }
      case TokKind::Symbol:
        if (tok.text == "(") {
          bump();
          auto inner = expr();
          if (!inner) return inner;
          if (auto e = expect_sym(")")) return *e;
          return inner;
        }
        if (tok.text == "[") {
          bump();
          if (is_sym("]")) {
            bump();
            return term::empty_set();
          }
          auto inner = expr();
          if (!inner) return inner;
          if (auto e = expect_sym("]")) return *e;
          return term::single(inner.value());
        }
        if (tok.text == "{") return record_cons();
        return fail("unexpected " + describe(tok), "a term");
      case TokKind::Ident: {
        if (tok.text == "true") {
          bump();
          return term::bool_(true);
        }
        if (tok.text == "false") {
          bump();
          return term::bool_(false);
        }
        if (tok.text == "null") {
          bump();
          return term::null_();
        }
        if (tok.text == "none") {
          bump();
          return term::none();
        }
        if (tok.text == "table") {
          bump();
          auto name = ident("a table name");
          if (!name) return name.error();
          return term::table(name.value());
        }
        if (tok.text == "empty") {
          bump();
          if (auto e = expect_sym("(")) return *e;
          auto inner = expr();
          if (!inner) return inner;
          if (auto e = expect_sym(")")) return *e;
          return term::is_empty(inner.value());
        }
        if (tok.text == "isnull") {
          bump();
          if (auto e = expect_sym("(")) return *e;
          auto inner = expr();
          if (!inner) return inner;
          if (auto e = expect_sym(")")) return *e;
          return term::is_null(inner.value());
        }
        if (tok.text == "if") return if_expr();
        if (tok.text == "for") return for_expr();
        if (tok.text == "case") return case_expr();
        auto name = ident("a variable");
        if (!name) return name.error();
        return term::var(name.value());
      }
      case TokKind::End:
        return fail("unexpected end of input", "a term");
    }
    return fail("unexpected token");
  }

  Result<TermPtr, ParseError> record_cons() {
    bump();  // '{'
    std::vector<TermField> fields;
    std::set<std::string> seen;
    if (is_sym("}")) {
      bump();
      return term::record({});
    }
    for (;;) {
      const Token& where_label = cur();
      auto label = label_ident("a field label");
      if (!label) return label.error();
      if (!seen.insert(label.value()).second)
        return ParseError{where_label.span, "duplicate record label '" + label.value() + "'",
                          "distinct labels"};
      if (auto e = expect_sym("=")) return *e;
      auto value = expr();
      if (!value) return value;
      fields.emplace_back(label.value(), value.value());
      if (is_sym(",")) {
        bump();
        continue;
      }
      if (auto e = expect_sym("}")) return *e;
      break;
    }
    return term::record(std::move(fields));
  }

  Result<TermPtr, ParseError> if_expr() {
    bump();  // 'if'
    auto c = expr();
    if (!c) return c;
    if (auto e = expect_word("then")) return *e;
    auto a = expr();
    if (!a) return a;
    if (auto e = expect_word("else")) return *e;
    auto b = expr();
    if (!b) return b;
    return term::if_(c.value(), a.value(), b.value());
  }

  Result<TermPtr, ParseError> for_expr() {
    bump();  // 'for'
    if (auto e = expect_sym("(")) return *e;
    std::vector<std::pair<std::string, TermPtr>> binders;
    for (;;) {
      auto name = ident("a binder");
      if (!name) return name.error();
      if (auto e = expect_sym("<-")) return *e;
      auto src = expr();
      if (!src) return src;
      binders.emplace_back(name.value(), src.value());
      if (is_sym(",")) {
        bump();
        continue;
      }
      break;
    }
    if (auto e = expect_sym(")")) return *e;

    if (is_word("where")) {
      bump();
      auto cond = expr();
      if (!cond) return cond;
      if (auto e = expect_word("yield")) return *e;
      auto body = expr();
      if (!body) return body;
      TermPtr t = term::where(term::single(body.value()), cond.value());
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        t = term::comp(t, it->first, it->second);
      return t;
    }
    if (is_word("yield")) {
      bump();
      auto body = expr();
      if (!body) return body;
      TermPtr t = term::single(body.value());
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        t = term::comp(t, it->first, it->second);
      return t;
    }
    // Bare set-typed head, delimited form only.
    auto head = postfix_expr();
    if (!head) return head;
    TermPtr t = head.value();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      t = term::comp(t, it->first, it->second);
    return t;
  }

  Result<TermPtr, ParseError> case_expr() {
    bump();  // 'case'
    auto scrut = expr();
    if (!scrut) return scrut;
    if (auto e = expect_word("of")) return *e;
    if (auto e = expect_sym("{")) return *e;
    if (auto e = expect_word("none")) return *e;
    if (auto e = expect_sym("->")) return *e;
    auto none_branch = expr();
    if (!none_branch) return none_branch;
    if (auto e = expect_sym("|")) return *e;
    if (auto e = expect_word("some")) return *e;
    auto binder = ident("a binder");
    if (!binder) return binder.error();
    if (auto e = expect_sym("->")) return *e;
    auto some_branch = expr();
    if (!some_branch) return some_branch;
    if (auto e = expect_sym("}")) return *e;
    return term::case_(scrut.value(), none_branch.value(), binder.value(), some_branch.value());
  }
};

}  // namespace

Result<TermPtr, ParseError> parse_term(std::string_view src) {
  auto toks = lex(src);
  if (!toks) return toks.error();
  Parser p(std::move(toks.value()));
  return p.run();
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

constexpr int kPrecExtend = 0;  // if / for (right-extending)
constexpr int kPrecWhere = 1;
constexpr int kPrecUnion = 2;
constexpr int kPrecOr = 3;
constexpr int kPrecAnd = 4;
constexpr int kPrecCmp = 5;
constexpr int kPrecAdd = 6;
constexpr int kPrecMul = 7;
constexpr int kPrecUnary = 8;
constexpr int kPrecPostfix = 9;
constexpr int kPrecAtom = 10;

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += ch;
    }
  }
  out += '"';
  return out;
}

struct BinOpInfo {
  const char* text;
  int prec;
  bool assoc;  // left-associative chains allowed
};

std::optional<BinOpInfo> binop_info(const std::string& op) {
  if (op == "or") return BinOpInfo{"||", kPrecOr, true};
  if (op == "and") return BinOpInfo{"&&", kPrecAnd, true};
  if (op == "=" || op == "<>" || op == "<" || op == "<=" || op == ">" || op == ">=")
    return BinOpInfo{nullptr, kPrecCmp, false};
  if (op == "+" || op == "-") return BinOpInfo{nullptr, kPrecAdd, true};
  if (op == "*" || op == "/") return BinOpInfo{nullptr, kPrecMul, true};
  return std::nullopt;
}

void print_term(const TermPtr& t, int parent_prec, std::string& out);

void print_at(int prec, int parent_prec, std::string& out, const std::string& text) {
  if (prec < parent_prec) {
    out += '(';
    out += text;
    out += ')';
  } else {
    out += text;
  }
}

std::string render(const TermPtr& t, int parent_prec) {
  std::string s;
  print_term(t, parent_prec, s);
  return s;
}

void print_term(const TermPtr& t, int parent_prec, std::string& out) {
  if (is<Term::Var>(t)) {
    out += as<Term::Var>(t).name;
    return;
  }
  if (is<Term::Const>(t)) {
    const Constant& c = as<Term::Const>(t).c;
    std::string text = pretty_constant(c);
    bool negative = (c.ty == BaseTy::Int && c.as_int() < 0) ||
                    (c.ty == BaseTy::Float && text.size() > 0 && text[0] == '-');
    print_at(negative ? kPrecUnary : kPrecAtom, parent_prec, out, text);
    return;
  }
  if (is<Term::Prim>(t)) {
    const auto& p = as<Term::Prim>(t);
    if (p.op == "not") {
      std::string text = "!" + render(p.args[0], kPrecUnary);
      print_at(kPrecUnary, parent_prec, out, text);
      return;
    }
    auto info = binop_info(p.op);
    const char* sym = info->text ? info->text : p.op.c_str();
    std::string text = render(p.args[0], info->assoc ? info->prec : info->prec + 1);
    text += ' ';
    text += sym;
    text += ' ';
    text += render(p.args[1], info->prec + 1);
    print_at(info->prec, parent_prec, out, text);
    return;
  }
  if (is<Term::RecordCons>(t)) {
    const auto& fields = as<Term::RecordCons>(t).fields;
    std::string text = "{";
    for (size_t i = 0; i < fields.size(); i++) {
      if (i) text += ", ";
      text += fields[i].first + " = " + render(fields[i].second, kPrecExtend);
    }
    text += "}";
    out += text;
    return;
  }
  if (is<Term::Project>(t)) {
    const auto& p = as<Term::Project>(t);
    std::string text = render(p.rec, kPrecPostfix) + "." + p.label;
    print_at(kPrecPostfix, parent_prec, out, text);
    return;
  }
  if (is<Term::EmptySet>(t)) {
    out += "[]";
    return;
  }
  if (is<Term::Singleton>(t)) {
    out += "[" + render(as<Term::Singleton>(t).elem, kPrecExtend) + "]";
    return;
  }
  if (is<Term::Union>(t)) {
    const auto& u = as<Term::Union>(t);
    std::string text = render(u.lhs, kPrecUnion) + " ++ " + render(u.rhs, kPrecUnion + 1);
    print_at(kPrecUnion, parent_prec, out, text);
    return;
  }
  if (is<Term::Comp>(t)) {
    const auto& c = as<Term::Comp>(t);
    std::string text = "for (" + c.var + " <- " + render(c.source, kPrecExtend) + ") ";
    if (is<Term::Singleton>(c.head)) {
      text += "yield " + render(as<Term::Singleton>(c.head).elem, kPrecExtend);
    } else if (is<Term::Where>(c.head) && is<Term::Singleton>(as<Term::Where>(c.head).body)) {
      const auto& w = as<Term::Where>(c.head);
      text += "where " + render(w.cond, kPrecExtend) + " yield " +
              render(as<Term::Singleton>(w.body).elem, kPrecExtend);
    } else {
      text += render(c.head, kPrecPostfix);
    }
    print_at(kPrecExtend, parent_prec, out, text);
    return;
  }
  if (is<Term::Where>(t)) {
    const auto& w = as<Term::Where>(t);
    std::string text = render(w.body, kPrecWhere) + " where " + render(w.cond, kPrecWhere + 1);
    print_at(kPrecWhere, parent_prec, out, text);
    return;
  }
  if (is<Term::IsEmpty>(t)) {
    out += "empty(" + render(as<Term::IsEmpty>(t).arg, kPrecExtend) + ")";
    return;
  }
  if (is<Term::If>(t)) {
    const auto& f = as<Term::If>(t);
    std::string text = "if " + render(f.cond, kPrecExtend) + " then " +
                       render(f.then_branch, kPrecExtend) + " else " +
                       render(f.else_branch, kPrecExtend);
    print_at(kPrecExtend, parent_prec, out, text);
    return;
  }
  if (is<Term::NoneLit>(t)) {
    out += "none";
    return;
  }
  if (is<Term::SomeLit>(t)) {
    std::string text = "some " + render(as<Term::SomeLit>(t).arg, kPrecUnary);
    print_at(kPrecUnary, parent_prec, out, text);
    return;
  }
  if (is<Term::Case>(t)) {
    const auto& c = as<Term::Case>(t);
    out += "case " + render(c.scrut, kPrecExtend) + " of { none -> " +
           render(c.none_branch, kPrecExtend) + " | some " + c.var + " -> " +
           render(c.some_branch, kPrecExtend) + " }";
    return;
  }
  if (is<Term::NullLit>(t)) {
    out += "null";
    return;
  }
  if (is<Term::IsNull>(t)) {
    out += "isnull(" + render(as<Term::IsNull>(t).arg, kPrecExtend) + ")";
    return;
  }
  if (is<Term::TableRef>(t)) {
    out += "table " + as<Term::TableRef>(t).name;
    return;
  }
}

}  // namespace

std::string pretty(const TermPtr& t) { return render(t, kPrecExtend); }

std::string pretty_constant(const Constant& c) {
  switch (c.ty) {
    case BaseTy::Int: return std::to_string(c.as_int());
    case BaseTy::Bool: return c.as_bool() ? "true" : "false";
    case BaseTy::String: return quote_string(c.as_string());
    case BaseTy::Float: return float_literal_text(c.as_float());
  }
  return "?";
}

std::string pretty_ty(const TyPtr& t) {
  if (!t) return "?";
  if (ty_is<Ty::Base>(t)) return base_ty_name(ty_as<Ty::Base>(t).b);
  if (ty_is<Ty::Var>(t)) return "?t" + std::to_string(ty_as<Ty::Var>(t).id);
  if (ty_is<Ty::Set>(t)) return "{" + pretty_ty(ty_as<Ty::Set>(t).elem) + "}";
  if (ty_is<Ty::Option>(t)) return pretty_ty(ty_as<Ty::Option>(t).inner) + "?";
  std::string s = "{";
  const auto& fields = ty_as<Ty::Record>(t).fields;
  for (size_t i = 0; i < fields.size(); i++) {
    if (i) s += ", ";
    s += fields[i].first + ": " + pretty_ty(fields[i].second);
  }
  return s + "}";
}

std::string pretty_value(const Value& v) {
  if (vis<VNull>(v)) return "null";
  if (vis<VNone>(v)) return "none";
  if (vis<Constant>(v)) return pretty_constant(vas<Constant>(v));
  if (vis<VSome>(v)) return "some " + pretty_value(*vas<VSome>(v).payload);
  if (vis<VRecord>(v)) {
    std::string s = "{";
    const auto& fields = vas<VRecord>(v).fields;
    for (size_t i = 0; i < fields.size(); i++) {
      if (i) s += ", ";
      s += fields[i].first + " = " + pretty_value(fields[i].second);
    }
    return s + "}";
  }
  std::string s = "[";
  const auto& elems = vas<VSet>(v).elems;
  for (size_t i = 0; i < elems.size(); i++) {
    if (i) s += ", ";
    s += pretty_value(elems[i]);
  }
  return s + "]";
}

}  // namespace nrc
