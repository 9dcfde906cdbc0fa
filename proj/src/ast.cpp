#include "lcnl/ast.hpp"

#include <cctype>

namespace lcnl {

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::Semantic: return "semantic";
    case Layer::Syntactic: return "syntactic";
    case Layer::Word: return "word";
    case Layer::Neutral: return "neutral";
  }
  return "neutral";
}

std::optional<Layer> parse_layer(std::string_view text) {
  if (text == "cnl" || text == "semantic") return Layer::Semantic;
  if (text == "host" || text == "syntactic") return Layer::Syntactic;
  if (text == "chunk" || text == "word") return Layer::Word;
  if (text == "neutral") return Layer::Neutral;
  return std::nullopt;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

Signature::Signature(std::string name, std::string start_category)
    : name_(std::move(name)), start_(std::move(start_category)) {}

void Signature::add_category(const std::string& cat) {
  if (!is_identifier(cat)) throw Error(ErrorKind::SyntaxError, cat, "invalid category name");
  if (cat == kStringCat) throw Error(ErrorKind::DuplicateName, cat, "String is built in");
  if (!categories_.insert(cat).second) {
    throw Error(ErrorKind::DuplicateName, cat, "category declared twice");
  }
}

void Signature::add_function(FunDecl fun) {
  if (!is_identifier(fun.name)) throw Error(ErrorKind::SyntaxError, fun.name, "invalid function name");
  if (!(fun.cost >= 0.0)) {
    throw Error(ErrorKind::NegativeCost, fun.name, "cost must be non-negative");
  }
  if (functions_.contains(fun.name)) {
    throw Error(ErrorKind::DuplicateName, fun.name, "function declared twice");
  }
  auto name = fun.name;
  functions_.emplace(std::move(name), std::move(fun));
}

std::vector<Diagnostic> Signature::check() const {
  std::vector<Diagnostic> out;
  if (!categories_.contains(start_)) {
    out.push_back({ErrorKind::UnknownCategory, "startcat", "start category '" + start_ + "' not declared"});
  }
  for (const auto& [name, fun] : functions_) {
    for (const auto& a : fun.args) {
      if (a != kStringCat && !categories_.contains(a)) {
        out.push_back({ErrorKind::UnknownCategory, name, "argument category '" + a + "' not declared"});
      }
    }
    if (!categories_.contains(fun.result)) {
      out.push_back({ErrorKind::UnknownCategory, name, "result category '" + fun.result + "' not declared"});
    }
  }
  return out;
}

void Signature::validate() const {
  auto ds = check();
  if (!ds.empty()) throw Error(std::move(ds));
}

bool Signature::has_category(std::string_view cat) const { return categories_.contains(cat); }

const FunDecl* Signature::find(std::string_view fun) const {
  auto it = functions_.find(fun);
  return it == functions_.end() ? nullptr : &it->second;
}

const FunDecl& Signature::at(std::string_view fun) const {
  if (const auto* f = find(fun)) return *f;
  throw Error(ErrorKind::UnknownFunction, std::string(fun), "not declared");
}

std::vector<const FunDecl*> Signature::producers(std::string_view cat) const {
  std::vector<const FunDecl*> out;
  for (const auto& [name, fun] : functions_) {
    if (fun.result == cat) out.push_back(&fun);
  }
  return out;
}

Tree Tree::app(std::string fun, std::vector<Tree> children) {
  return Tree{std::move(fun), std::move(children), false};
}

Tree Tree::literal(std::string text) { return Tree{std::move(text), {}, true}; }

std::size_t Tree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::string path_string(const Path& path) {
  std::string out = "root";
  for (int i : path) out += "." + std::to_string(i);
  return out;
}

const Tree& subtree(const Tree& tree, const Path& path) {
  const Tree* t = &tree;
  for (int i : path) t = &t->children.at(static_cast<std::size_t>(i));
  return *t;
}

namespace {

// Returns the category of `t`, or nullopt when it cannot be determined.
std::optional<std::string> type_walk(const Tree& t, const Signature& sig, Path& path,
                                     std::vector<Diagnostic>& out) {
  if (t.is_literal) return std::string(kStringCat);
  const FunDecl* fun = sig.find(t.fun);
  if (!fun) {
    out.push_back({ErrorKind::UnknownFunction, path_string(path), "'" + t.fun + "' not declared"});
  } else if (fun->arity() != t.children.size()) {
    out.push_back({ErrorKind::ArityMismatch, path_string(path),
                   "'" + t.fun + "' expects " + std::to_string(fun->arity()) + " arguments, got " +
                       std::to_string(t.children.size())});
  }
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    auto got = type_walk(t.children[i], sig, path, out);
    if (fun && fun->arity() == t.children.size() && got && *got != fun->args[i]) {
      out.push_back({ErrorKind::CategoryMismatch, path_string(path),
                     "expected " + fun->args[i] + ", got " + *got});
    }
    path.pop_back();
  }
  if (!fun) return std::nullopt;
  return fun->result;
}

}  // namespace

std::vector<Diagnostic> type_errors(const Tree& tree, const Signature& sig) {
  std::vector<Diagnostic> out;
  Path path;
  if (tree.is_literal) {
    out.push_back({ErrorKind::CategoryMismatch, "root", "string literal outside a String argument"});
    return out;
  }
  type_walk(tree, sig, path, out);
  return out;
}

TypedTree check_tree(const Tree& tree, const Signature& sig) {
  auto errors = type_errors(tree, sig);
  if (!errors.empty()) throw Error(std::move(errors));
  return TypedTree{tree, sig.at(tree.fun).result};
}

double tree_cost(const Tree& tree, const Signature& sig) {
  if (tree.is_literal) return 0.0;
  double total = sig.at(tree.fun).cost;
  for (const auto& c : tree.children) total += tree_cost(c, sig);
  return total;
}

namespace {

void write_tree(const Tree& t, std::string& out) {
  if (t.is_literal) {
    out += '"';
    for (char c : t.fun) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
    return;
  }
  if (t.children.empty()) {
    out += t.fun;
    return;
  }
  out += '(';
  out += t.fun;
  for (const auto& c : t.children) {
    out += ' ';
    write_tree(c, out);
  }
  out += ')';
}

class TreeReader {
 public:
  explicit TreeReader(std::string_view text) : text_(text) {}

  Tree read_all() {
    skip_ws();
    Tree t = read();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, "offset " + std::to_string(pos_), msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string read_name() {
    auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    auto name = std::string(text_.substr(start, pos_ - start));
    if (!is_identifier(name)) {
      pos_ = start;
      fail("expected a function name");
    }
    return name;
  }

  Tree read() {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '"') return read_literal();
    if (c == '(') {
      ++pos_;
      skip_ws();
      Tree t = Tree::app(read_name());
      for (;;) {
        skip_ws();
        if (pos_ >= text_.size()) fail("unclosed '('");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        t.children.push_back(read());
      }
      return t;
    }
    return Tree::app(read_name());
  }

  Tree read_literal() {
    ++pos_;
    std::string s;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        ++pos_;
        if (pos_ >= text_.size()) break;
      }
      s += text_[pos_++];
    }
    if (pos_ >= text_.size()) fail("unterminated string literal");
    ++pos_;
    return Tree::literal(std::move(s));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_tree(const Tree& tree) {
  std::string out;
  write_tree(tree, out);
  return out;
}

Tree read_tree(std::string_view text) { return TreeReader(text).read_all(); }

TypedTree parse_tree(std::string_view text, const Signature& sig) {
  return check_tree(read_tree(text), sig);
}

}  // namespace lcnl
