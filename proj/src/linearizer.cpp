#include "lcnl/linearizer.hpp"

#include <algorithm>

namespace lcnl {

const LinValue* LinValue::field(std::string_view name) const {
  for (const auto& [n, v] : fields) {
    if (n == name) return &v;
  }
  return nullptr;
}

namespace {

[[noreturn]] void broken(const std::string& msg) {
  throw Error(ErrorKind::LinTypeError, "", "evaluation on unvalidated input: " + msg);
}

}  // namespace

LinValue evaluate(const LinExpr& e, const EvalEnv& env) {
  using K = LinExpr::Kind;
  LinValue out;
  switch (e.kind) {
    case K::StrLit:
      out.kind = LinValue::Kind::Str;
      for (const auto& tok : e.tokens) out.items.push_back(Item{tok, env.path, -1, -1});
      return out;
    case K::Concat: {
      out = evaluate(*e.children[0], env);
      auto right = evaluate(*e.children[1], env);
      out.items.insert(out.items.end(), std::make_move_iterator(right.items.begin()),
                       std::make_move_iterator(right.items.end()));
      return out;
    }
    case K::Arg:
      if (e.arg < 0 || static_cast<std::size_t>(e.arg) >= env.args.size()) broken("argument index");
      return *env.args[static_cast<std::size_t>(e.arg)];
    case K::Project: {
      auto rec = evaluate(*e.children[0], env);
      const auto* f = rec.field(e.name);
      if (!f) broken("missing field " + e.name);
      return *f;
    }
    case K::Select: {
      auto tbl = evaluate(*e.children[0], env);
      auto key = evaluate(*e.children[1], env);
      const auto* p = env.conc.param(tbl.param);
      int i = p ? p->index_of(key.value) : -1;
      if (i < 0 || static_cast<std::size_t>(i) >= tbl.cells.size()) broken("bad selection " + key.value);
      return std::move(tbl.cells[static_cast<std::size_t>(i)]);
    }
    case K::ParamLit:
      out.kind = LinValue::Kind::Param;
      out.value = e.name;
      return out;
    case K::RecordLit: {
      out.kind = LinValue::Kind::Record;
      for (std::size_t i = 0; i < e.labels.size(); ++i) {
        out.fields.emplace_back(e.labels[i], evaluate(*e.children[i], env));
      }
      std::sort(out.fields.begin(), out.fields.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      return out;
    }
    case K::TableLit: {
      const auto* p = env.conc.param_of_value(e.labels.front());
      if (!p) broken("unknown value " + e.labels.front());
      out.kind = LinValue::Kind::Table;
      out.param = p->name;
      out.cells.resize(p->values.size());
      for (std::size_t i = 0; i < e.labels.size(); ++i) {
        int idx = p->index_of(e.labels[i]);
        out.cells[static_cast<std::size_t>(idx)] = evaluate(*e.children[i], env);
      }
      return out;
    }
    case K::Lookup: {
      const auto& key = env.keys.at(static_cast<std::size_t>(e.arg));
      if (key) {
        for (std::size_t i = 0; i + 1 < e.children.size(); ++i) {
          if (e.labels[i] == *key) return evaluate(*e.children[i], env);
        }
      }
      return evaluate(*e.children.back(), env);
    }
  }
  return out;
}

namespace {

LinValue eval_node(const Tree& t, const ConcreteGrammar& conc, Path& path) {
  if (t.is_literal) {
    LinValue v;
    v.items.push_back(Item{t.fun, path, -1, -1});
    return v;
  }
  std::vector<LinValue> children;
  children.reserve(t.children.size());
  EvalEnv env{conc, {}, {}, path};
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    children.push_back(eval_node(t.children[i], conc, path));
    path.pop_back();
    env.keys.push_back(t.children[i].is_literal ? std::optional<std::string>(t.children[i].fun)
                                                : std::nullopt);
  }
  for (const auto& c : children) env.args.push_back(&c);
  const auto* rule = conc.linrule(t.fun);
  if (!rule) throw Error(ErrorKind::MissingLinRule, t.fun, "no linrule in " + conc.name());
  return evaluate(*rule->body, env);
}

}  // namespace

LinValue eval_lin(const TypedTree& tree, const ConcreteGrammar& conc) {
  Path path;
  return eval_node(tree.tree, conc, path);
}

const LinValue& start_field(const LinValue& v, const std::string& category) {
  if (v.kind == LinValue::Kind::Str) return v;
  if (v.kind == LinValue::Kind::Record) {
    if (const auto* s = v.field("s"); s && s->kind == LinValue::Kind::Str) return *s;
  }
  throw Error(ErrorKind::NoStartField, category, "lincat has no Str field 's'");
}

std::vector<ProvToken> linearize(const TypedTree& tree, const ConcreteGrammar& conc) {
  auto value = eval_lin(tree, conc);
  const auto& s = start_field(value, tree.category);
  std::vector<ProvToken> out;
  out.reserve(s.items.size());
  for (const auto& item : s.items) out.push_back(ProvToken{item.token, item.path});
  return out;
}

std::vector<std::string> linearize_tokens(const TypedTree& tree, const ConcreteGrammar& conc) {
  std::vector<std::string> out;
  for (auto& t : linearize(tree, conc)) out.push_back(std::move(t.token));
  return out;
}

bool is_punctuation_token(std::string_view token) {
  return token == "." || token == "?" || token == "!" || token == ",";
}

int utf8_length(std::string_view s) {
  int n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

Detokenized detokenize(const std::vector<std::string>& tokens) {
  Detokenized out;
  int pos = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !is_punctuation_token(tokens[i])) {
      out.text += ' ';
      ++pos;
    }
    int len = utf8_length(tokens[i]);
    out.spans.push_back(CharSpan{pos, pos + len});
    out.text += tokens[i];
    pos += len;
  }
  return out;
}

Detokenized detokenize(const std::vector<ProvToken>& tokens) {
  std::vector<std::string> plain;
  plain.reserve(tokens.size());
  for (const auto& t : tokens) plain.push_back(t.token);
  return detokenize(plain);
}

}  // namespace lcnl
