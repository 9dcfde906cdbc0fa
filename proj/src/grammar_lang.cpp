#include "lcnl/grammar_lang.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace lcnl {
namespace {

enum class Tok { Ident, String, Number, Punct, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "abstract", "concrete", "of",    "flags", "cat",    "fun",  "param",
    "lincat",   "lin",      "guess", "table", "lookup", "else", "Str",
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.type = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.type = Tok::Number;
        if (c == '-') t.text += advance();
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
          t.text += advance();
        }
      } else if (c == '"') {
        t.type = Tok::String;
        advance();
        for (;;) {
          if (pos_ >= src_.size() || src_[pos_] == '\n') fail(t, "unterminated string literal");
          char d = advance();
          if (d == '"') break;
          if (d == '\\' && pos_ < src_.size()) d = advance();
          t.text += d;
        }
      } else {
        t.type = Tok::Punct;
        for (std::string_view two : {"=>", "->", "++"}) {
          if (src_.substr(pos_, 2) == two) {
            t.text = std::string(two);
            advance();
            advance();
            break;
          }
        }
        if (t.text.empty()) {
          if (std::string_view("{}();:,=!.|[]").find(c) == std::string_view::npos) {
            fail(t, std::string("unexpected character '") + c + "'");
          }
          t.text = std::string(1, advance());
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw Error(ErrorKind::SyntaxError, std::to_string(at.line) + ":" + std::to_string(at.col), msg);
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.substr(pos_, 2) == "--") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Signature abstract_grammar() {
    expect_word("abstract");
    auto name = ident("grammar name");
    expect("{");
    std::string start;
    std::vector<std::string> cats;
    std::vector<FunDecl> funs;
    while (!at("}")) {
      if (accept_word("flags")) {
        while (is_plain_ident()) {
          auto flag = ident("flag name");
          expect("=");
          auto value = ident("flag value");
          expect(";");
          if (flag == "startcat") start = value;
        }
      } else if (accept_word("cat")) {
        do {
          do cats.push_back(ident("category"));
          while (accept(","));
          expect(";");
        } while (is_plain_ident());
      } else if (accept_word("fun")) {
        do fun_decls(funs);
        while (is_plain_ident());
      } else {
        fail("expected 'cat', 'fun' or 'flags'");
      }
    }
    expect("}");
    expect_end();

    Signature sig(name, start);
    std::vector<Diagnostic> diags;
    for (const auto& c : cats) {
      try {
        sig.add_category(c);
      } catch (const Error& e) {
        diags.insert(diags.end(), e.diagnostics().begin(), e.diagnostics().end());
      }
    }
    for (auto& f : funs) {
      try {
        sig.add_function(std::move(f));
      } catch (const Error& e) {
        diags.insert(diags.end(), e.diagnostics().begin(), e.diagnostics().end());
      }
    }
    if (start.empty()) diags.push_back({ErrorKind::UnknownCategory, "startcat", "missing 'flags startcat'"});
    else {
      auto more = sig.check();
      diags.insert(diags.end(), more.begin(), more.end());
    }
    if (!diags.empty()) throw Error(std::move(diags));
    return sig;
  }

  ConcreteGrammar concrete_grammar() {
    expect_word("concrete");
    auto name = ident("grammar name");
    expect_word("of");
    auto abs = ident("abstract name");
    expect("{");
    ConcreteGrammar conc(name, abs);
    while (!at("}")) {
      if (accept_word("param")) {
        do param_decl(conc);
        while (is_plain_ident());
      } else if (accept_word("lincat")) {
        do lincat_decl(conc);
        while (is_plain_ident());
      } else if (accept_word("lin")) {
        do lin_decl(conc);
        while (is_plain_ident());
      } else if (accept_word("guess")) {
        do guess_decl(conc);
        while (is_plain_ident());
      } else {
        fail("expected 'param', 'lincat', 'lin' or 'guess'");
      }
    }
    expect("}");
    expect_end();
    return conc;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    std::string got = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::SyntaxError, std::to_string(t.line) + ":" + std::to_string(t.col),
                msg + ", got " + got);
  }

  std::string where() const { return std::to_string(peek().line) + ":" + std::to_string(peek().col); }

  bool at(std::string_view punct) const { return peek().type == Tok::Punct && peek().text == punct; }
  bool at_word(std::string_view w) const { return peek().type == Tok::Ident && peek().text == w; }
  bool is_plain_ident() const { return peek().type == Tok::Ident && !kKeywords.contains(peek().text); }

  bool accept(std::string_view punct) {
    if (!at(punct)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!at_word(w)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "'");
  }
  void expect_end() {
    if (peek().type != Tok::End) fail("expected end of input");
  }
  std::string ident(const char* what) {
    if (!is_plain_ident()) fail(std::string("expected ") + what);
    return toks_[pos_++].text;
  }
  std::string string_lit() {
    if (peek().type != Tok::String) fail("expected a string literal");
    return toks_[pos_++].text;
  }

  void fun_decls(std::vector<FunDecl>& out) {
    std::vector<std::string> names;
    do names.push_back(ident("function name"));
    while (accept(","));
    expect(":");
    std::vector<std::string> cats;
    do cats.push_back(ident("category"));
    while (accept("->"));
    FunDecl proto;
    proto.result = cats.back();
    cats.pop_back();
    proto.args = std::move(cats);
    if (accept("[")) {
      do {
        auto key = ident("annotation");
        expect("=");
        if (key == "cost") {
          if (peek().type != Tok::Number) fail("expected a number");
          const auto& text = toks_[pos_].text;
          double v = 0;
          auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
          if (ec != std::errc() || p != text.data() + text.size()) fail("malformed number");
          ++pos_;
          proto.cost = v;
        } else if (key == "layer") {
          auto value = ident("layer");
          auto layer = parse_layer(value);
          if (!layer) {
            --pos_;
            fail("unknown layer (use cnl, host, chunk or neutral)");
          }
          proto.layer = *layer;
        } else {
          fail("unknown annotation '" + key + "'");
        }
      } while (accept(","));
      expect("]");
    }
    expect(";");
    for (auto& n : names) {
      FunDecl f = proto;
      f.name = std::move(n);
      out.push_back(std::move(f));
    }
  }

  void param_decl(ConcreteGrammar& conc) {
    auto loc = where();
    ParamDecl p;
    p.name = ident("param name");
    expect("=");
    do p.values.push_back(ident("param value"));
    while (accept("|"));
    expect(";");
    try {
      conc.add_param(std::move(p));
    } catch (const Error& e) {
      throw Error(e.kind(), loc, e.diagnostics().front().message);
    }
  }

  LinType lin_type() {
    LinType t;
    if (accept_word("Str")) {
      t = LinType::str();
    } else if (accept("{")) {
      std::vector<std::pair<std::string, LinType>> fields;
      while (!at("}")) {
        std::vector<std::string> names;
        do names.push_back(ident("field name"));
        while (accept(","));
        expect(":");
        auto ft = lin_type();
        for (auto& n : names) fields.emplace_back(std::move(n), ft);
        if (!accept(";")) break;
      }
      expect("}");
      t = LinType::record(std::move(fields));
    } else if (accept("(")) {
      t = lin_type();
      expect(")");
    } else {
      t = LinType::param_type(ident("type"));
    }
    if (accept("=>")) {
      if (t.kind != LinType::Kind::Param) fail("table keys must be parameter types");
      return LinType::table(t.param, lin_type());
    }
    return t;
  }

  void lincat_decl(ConcreteGrammar& conc) {
    std::vector<std::string> cats;
    do cats.push_back(ident("category"));
    while (accept(","));
    expect("=");
    auto t = lin_type();
    expect(";");
    for (const auto& c : cats) conc.set_lincat(c, t);
  }

  void lin_decl(ConcreteGrammar& conc) {
    LinRule rule;
    rule.fun = ident("function name");
    while (is_plain_ident()) rule.vars.push_back(ident("variable"));
    expect("=");
    vars_ = &rule.vars;
    rule.body = expr();
    vars_ = nullptr;
    expect(";");
    if (conc.linrule(rule.fun)) {
      throw Error(ErrorKind::DuplicateName, rule.fun, "linrule given twice");
    }
    conc.set_linrule(std::move(rule));
  }

  void guess_decl(ConcreteGrammar& conc) {
    GuessRule g;
    g.fun = ident("function name");
    expect("=");
    auto kind = ident("guess kind");
    if (kind == "name") g.kind = GuessKind::Name;
    else if (kind == "digits") g.kind = GuessKind::Digits;
    else if (kind == "any") g.kind = GuessKind::Any;
    else if (kind == "suffix") {
      g.kind = GuessKind::Suffix;
      while (peek().type == Tok::String) g.suffixes.push_back(string_lit());
      if (g.suffixes.empty()) fail("suffix guess needs at least one suffix");
    } else {
      --pos_;
      fail("unknown guess kind (use name, suffix, digits or any)");
    }
    expect(";");
    conc.set_guess(std::move(g));
  }

  int var_index(std::string_view name) const {
    if (!vars_) return -1;
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      if ((*vars_)[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  LinExprPtr expr() {
    auto e = selection();
    while (accept("++")) e = LinExpr::concat(e, selection());
    return e;
  }

  LinExprPtr selection() {
    auto e = postfix();
    while (accept("!")) e = LinExpr::select(e, postfix());
    return e;
  }

  LinExprPtr postfix() {
    auto e = atom();
    while (accept(".")) e = LinExpr::project(e, ident("field name"));
    return e;
  }

  LinExprPtr atom() {
    if (peek().type == Tok::String) return LinExpr::str(literal_tokens(string_lit()));
    if (accept("(")) {
      auto e = expr();
      expect(")");
      return e;
    }
    if (accept("{")) {
      std::vector<std::pair<std::string, LinExprPtr>> fields;
      while (!at("}")) {
        auto n = ident("field name");
        expect("=");
        fields.emplace_back(std::move(n), expr());
        if (!accept(";")) break;
      }
      expect("}");
      return LinExpr::record(std::move(fields));
    }
    if (accept_word("table")) {
      expect("{");
      std::vector<std::pair<std::string, LinExprPtr>> branches;
      while (!at("}")) {
        auto v = ident("parameter value");
        expect("=>");
        branches.emplace_back(std::move(v), expr());
        if (!accept(";")) break;
      }
      expect("}");
      return LinExpr::table(std::move(branches));
    }
    if (accept_word("lookup")) {
      auto var = ident("variable");
      LinExpr e;
      e.kind = LinExpr::Kind::Lookup;
      e.name = var;
      e.arg = var_index(var);
      expect("{");
      while (!at("}")) {
        e.labels.push_back(string_lit());
        expect("=>");
        e.children.push_back(expr());
        if (!accept(";")) break;
      }
      expect("}");
      expect_word("else");
      e.children.push_back(postfix());
      return std::make_shared<const LinExpr>(std::move(e));
    }
    auto name = ident("expression");
    if (int i = var_index(name); i >= 0) return LinExpr::arg_ref(i, name);
    return LinExpr::param(name);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::vector<std::string>* vars_ = nullptr;
};

}  // namespace

Signature parse_abstract(std::string_view source) { return Parser(source).abstract_grammar(); }

ConcreteGrammar read_concrete(std::string_view source) { return Parser(source).concrete_grammar(); }

ConcreteGrammar parse_concrete(std::string_view source, const Signature& sig) {
  auto conc = read_concrete(source);
  auto diags = validate_concrete(conc, sig);
  if (!diags.empty()) throw Error(std::move(diags));
  return conc;
}

}  // namespace lcnl
