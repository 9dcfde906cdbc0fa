#include "lcnl/concrete.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace lcnl {

int ParamDecl::index_of(std::string_view value) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == value) return static_cast<int>(i);
  }
  return -1;
}

LinType LinType::str() { return LinType{}; }

LinType LinType::param_type(std::string name) {
  LinType t;
  t.kind = Kind::Param;
  t.param = std::move(name);
  return t;
}

LinType LinType::record(std::vector<std::pair<std::string, LinType>> fields) {
  LinType t;
  t.kind = Kind::Record;
  std::sort(fields.begin(), fields.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  t.fields = std::move(fields);
  return t;
}

LinType LinType::table(std::string key, LinType value) {
  LinType t;
  t.kind = Kind::Table;
  t.param = std::move(key);
  t.value.push_back(std::move(value));
  return t;
}

const LinType* LinType::field(std::string_view name) const {
  for (const auto& [n, t] : fields) {
    if (n == name) return &t;
  }
  return nullptr;
}

std::string LinType::str_repr() const {
  switch (kind) {
    case Kind::Str: return "Str";
    case Kind::Param: return param;
    case Kind::Table: return "(" + param + " => " + value.front().str_repr() + ")";
    case Kind::Record: {
      std::string out = "{";
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += " ;";
        out += " " + fields[i].first + " : " + fields[i].second.str_repr();
      }
      return out + " }";
    }
  }
  return "?";
}

namespace {

LinExprPtr make(LinExpr e) { return std::make_shared<const LinExpr>(std::move(e)); }

}  // namespace

LinExprPtr LinExpr::str(std::vector<std::string> tokens) {
  LinExpr e;
  e.kind = Kind::StrLit;
  e.tokens = std::move(tokens);
  return make(std::move(e));
}

LinExprPtr LinExpr::concat(LinExprPtr a, LinExprPtr b) {
  LinExpr e;
  e.kind = Kind::Concat;
  e.children = {std::move(a), std::move(b)};
  return make(std::move(e));
}

LinExprPtr LinExpr::arg_ref(int index, std::string var) {
  LinExpr e;
  e.kind = Kind::Arg;
  e.arg = index;
  e.name = std::move(var);
  return make(std::move(e));
}

LinExprPtr LinExpr::project(LinExprPtr inner, std::string field) {
  LinExpr e;
  e.kind = Kind::Project;
  e.name = std::move(field);
  e.children = {std::move(inner)};
  return make(std::move(e));
}

LinExprPtr LinExpr::select(LinExprPtr table, LinExprPtr key) {
  LinExpr e;
  e.kind = Kind::Select;
  e.children = {std::move(table), std::move(key)};
  return make(std::move(e));
}

LinExprPtr LinExpr::param(std::string value) {
  LinExpr e;
  e.kind = Kind::ParamLit;
  e.name = std::move(value);
  return make(std::move(e));
}

LinExprPtr LinExpr::record(std::vector<std::pair<std::string, LinExprPtr>> fields) {
  LinExpr e;
  e.kind = Kind::RecordLit;
  for (auto& [n, v] : fields) {
    e.labels.push_back(n);
    e.children.push_back(std::move(v));
  }
  return make(std::move(e));
}

LinExprPtr LinExpr::table(std::vector<std::pair<std::string, LinExprPtr>> branches) {
  LinExpr e;
  e.kind = Kind::TableLit;
  for (auto& [n, v] : branches) {
    e.labels.push_back(n);
    e.children.push_back(std::move(v));
  }
  return make(std::move(e));
}

std::vector<std::string> literal_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

ConcreteGrammar::ConcreteGrammar(std::string name, std::string abstract_name)
    : name_(std::move(name)), abstract_name_(std::move(abstract_name)) {}

void ConcreteGrammar::add_param(ParamDecl p) {
  if (params_.contains(p.name)) throw Error(ErrorKind::DuplicateName, p.name, "param declared twice");
  if (p.values.empty()) throw Error(ErrorKind::SyntaxError, p.name, "param needs at least one value");
  std::set<std::string> seen;
  for (const auto& v : p.values) {
    if (!seen.insert(v).second || value_owner_.contains(v)) {
      throw Error(ErrorKind::DuplicateName, p.name, "param value '" + v + "' declared twice");
    }
  }
  for (const auto& v : p.values) value_owner_[v] = p.name;
  auto name = p.name;
  params_.emplace(std::move(name), std::move(p));
}

void ConcreteGrammar::set_lincat(const std::string& cat, LinType type) { lincats_[cat] = std::move(type); }

void ConcreteGrammar::set_linrule(LinRule rule) {
  auto name = rule.fun;
  linrules_[name] = std::move(rule);
}

void ConcreteGrammar::set_guess(GuessRule rule) {
  auto name = rule.fun;
  guesses_[name] = std::move(rule);
}

const ParamDecl* ConcreteGrammar::param(std::string_view name) const {
  auto it = params_.find(name);
  return it == params_.end() ? nullptr : &it->second;
}

const ParamDecl* ConcreteGrammar::param_of_value(std::string_view value) const {
  auto it = value_owner_.find(value);
  return it == value_owner_.end() ? nullptr : param(it->second);
}

const LinType* ConcreteGrammar::lincat(std::string_view cat) const {
  auto it = lincats_.find(cat);
  return it == lincats_.end() ? nullptr : &it->second;
}

const LinRule* ConcreteGrammar::linrule(std::string_view fun) const {
  auto it = linrules_.find(fun);
  return it == linrules_.end() ? nullptr : &it->second;
}

const GuessRule* ConcreteGrammar::guess(std::string_view fun) const {
  auto it = guesses_.find(fun);
  return it == guesses_.end() ? nullptr : &it->second;
}

LinType ConcreteGrammar::arg_type(std::string_view cat) const {
  if (cat == kStringCat) return LinType::str();
  if (const auto* t = lincat(cat)) return *t;
  return LinType::str();
}

namespace {

struct TypeCtx {
  const FunDecl& fun;
  const ConcreteGrammar& conc;
  std::vector<Diagnostic>& diags;
  std::vector<std::string> path;

  void error(const std::string& msg) {
    std::string where = fun.name + ":";
    for (const auto& step : path) where += "/" + step;
    if (path.empty()) where += "/";
    diags.push_back({ErrorKind::LinTypeError, where, msg});
  }
};

struct Step {
  TypeCtx& ctx;
  Step(TypeCtx& c, std::string s) : ctx(c) { ctx.path.push_back(std::move(s)); }
  ~Step() { ctx.path.pop_back(); }
};

std::optional<LinType> infer(const LinExpr& e, TypeCtx& ctx) {
  using K = LinExpr::Kind;
  switch (e.kind) {
    case K::StrLit:
      return LinType::str();
    case K::Concat: {
      bool ok = true;
      for (std::size_t i = 0; i < 2; ++i) {
        Step s(ctx, "++[" + std::to_string(i) + "]");
        auto t = infer(*e.children[i], ctx);
        if (t && t->kind != LinType::Kind::Str) {
          ctx.error("concatenation needs Str, got " + t->str_repr());
          ok = false;
        }
        ok = ok && t.has_value();
      }
      if (!ok) return std::nullopt;
      return LinType::str();
    }
    case K::Arg: {
      if (e.arg < 0 || static_cast<std::size_t>(e.arg) >= ctx.fun.arity()) {
        ctx.error("argument '" + e.name + "' out of range");
        return std::nullopt;
      }
      const auto& cat = ctx.fun.args[static_cast<std::size_t>(e.arg)];
      if (cat != kStringCat && !ctx.conc.lincat(cat)) return std::nullopt;  // reported as MissingLincat
      return ctx.conc.arg_type(cat);
    }
    case K::Project: {
      auto t = infer(*e.children[0], ctx);
      if (!t) return std::nullopt;
      Step s(ctx, "." + e.name);
      if (t->kind != LinType::Kind::Record) {
        ctx.error("projection ." + e.name + " on non-record " + t->str_repr());
        return std::nullopt;
      }
      const auto* f = t->field(e.name);
      if (!f) {
        ctx.error("no field '" + e.name + "' in " + t->str_repr());
        return std::nullopt;
      }
      return *f;
    }
    case K::Select: {
      std::optional<LinType> tt, kt;
      {
        Step s(ctx, "!tbl");
        tt = infer(*e.children[0], ctx);
      }
      {
        Step s(ctx, "!key");
        kt = infer(*e.children[1], ctx);
      }
      if (!tt || !kt) return std::nullopt;
      Step s(ctx, "!");
      if (tt->kind != LinType::Kind::Table) {
        ctx.error("selection from non-table " + tt->str_repr());
        return std::nullopt;
      }
      if (kt->kind != LinType::Kind::Param || kt->param != tt->param) {
        ctx.error("table over " + tt->param + " selected with " + kt->str_repr());
        return std::nullopt;
      }
      return tt->value.front();
    }
    case K::ParamLit: {
      const auto* p = ctx.conc.param_of_value(e.name);
      if (!p) {
        Step s(ctx, e.name);
        ctx.error("unknown identifier '" + e.name + "'");
        return std::nullopt;
      }
      return LinType::param_type(p->name);
    }
    case K::RecordLit: {
      std::vector<std::pair<std::string, LinType>> fields;
      std::set<std::string> seen;
      bool ok = true;
      for (std::size_t i = 0; i < e.labels.size(); ++i) {
        Step s(ctx, e.labels[i]);
        if (!seen.insert(e.labels[i]).second) {
          ctx.error("field '" + e.labels[i] + "' given twice");
          ok = false;
          continue;
        }
        auto t = infer(*e.children[i], ctx);
        if (!t) {
          ok = false;
          continue;
        }
        fields.emplace_back(e.labels[i], std::move(*t));
      }
      if (!ok) return std::nullopt;
      return LinType::record(std::move(fields));
    }
    case K::TableLit: {
      if (e.labels.empty()) {
        ctx.error("empty table");
        return std::nullopt;
      }
      const auto* p = ctx.conc.param_of_value(e.labels.front());
      if (!p) {
        Step s(ctx, "table[" + e.labels.front() + "]");
        ctx.error("unknown parameter value '" + e.labels.front() + "'");
        return std::nullopt;
      }
      bool ok = true;
      std::optional<LinType> elem;
      std::set<std::string> seen;
      for (std::size_t i = 0; i < e.labels.size(); ++i) {
        Step s(ctx, "table[" + e.labels[i] + "]");
        if (p->index_of(e.labels[i]) < 0) {
          ctx.error("'" + e.labels[i] + "' is not a value of " + p->name);
          ok = false;
          continue;
        }
        if (!seen.insert(e.labels[i]).second) {
          ctx.error("duplicate branch '" + e.labels[i] + "'");
          ok = false;
          continue;
        }
        auto t = infer(*e.children[i], ctx);
        if (!t) {
          ok = false;
          continue;
        }
        if (elem && !(*elem == *t)) {
          ctx.error("branch type " + t->str_repr() + " differs from " + elem->str_repr());
          ok = false;
        }
        if (!elem) elem = std::move(t);
      }
      for (const auto& v : p->values) {
        if (!seen.contains(v)) {
          Step s(ctx, "table");
          ctx.error("missing branch for " + p->name + " value '" + v + "'");
          ok = false;
        }
      }
      if (!ok || !elem) return std::nullopt;
      return LinType::table(p->name, std::move(*elem));
    }
    case K::Lookup: {
      Step s(ctx, "lookup");
      if (e.arg < 0 || static_cast<std::size_t>(e.arg) >= ctx.fun.arity() ||
          ctx.fun.args[static_cast<std::size_t>(e.arg)] != kStringCat) {
        ctx.error("lookup subject '" + e.name + "' is not a String argument");
        return std::nullopt;
      }
      std::optional<LinType> result;
      bool ok = true;
      std::set<std::string> seen;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        bool fallback = i + 1 == e.children.size();
        Step b(ctx, fallback ? std::string("else") : "\"" + e.labels[i] + "\"");
        if (!fallback && !seen.insert(e.labels[i]).second) {
          ctx.error("duplicate key");
          ok = false;
        }
        auto t = infer(*e.children[i], ctx);
        if (!t) {
          ok = false;
          continue;
        }
        if (result && !(*result == *t)) {
          ctx.error("branch type " + t->str_repr() + " differs from " + result->str_repr());
          ok = false;
        }
        if (!result) result = std::move(t);
      }
      if (!ok) return std::nullopt;
      return result;
    }
  }
  return std::nullopt;
}

void check_type_refs(const LinType& t, const ConcreteGrammar& conc, const std::string& where,
                     std::vector<Diagnostic>& diags) {
  switch (t.kind) {
    case LinType::Kind::Str: return;
    case LinType::Kind::Param:
    case LinType::Kind::Table:
      if (!conc.param(t.param)) {
        diags.push_back({ErrorKind::LinTypeError, where, "unknown param type '" + t.param + "'"});
      }
      if (t.kind == LinType::Kind::Table) check_type_refs(t.value.front(), conc, where, diags);
      return;
    case LinType::Kind::Record: {
      std::set<std::string> seen;
      for (const auto& [n, ft] : t.fields) {
        if (!seen.insert(n).second) {
          diags.push_back({ErrorKind::LinTypeError, where, "duplicate field '" + n + "'"});
        }
        check_type_refs(ft, conc, where, diags);
      }
      return;
    }
  }
}

}  // namespace

std::optional<LinType> infer_type(const LinExpr& expr, const FunDecl& fun, const ConcreteGrammar& conc,
                                  std::vector<Diagnostic>& diags) {
  TypeCtx ctx{fun, conc, diags, {}};
  return infer(expr, ctx);
}

std::vector<Diagnostic> check_linrule(const LinRule& rule, const FunDecl& fun, const ConcreteGrammar& conc) {
  std::vector<Diagnostic> diags;
  if (rule.vars.size() != fun.arity()) {
    diags.push_back({ErrorKind::ArityMismatch, fun.name,
                     "linrule binds " + std::to_string(rule.vars.size()) + " variables, function has " +
                         std::to_string(fun.arity()) + " arguments"});
    return diags;
  }
  TypeCtx ctx{fun, conc, diags, {}};
  auto got = infer(*rule.body, ctx);
  const auto* want = conc.lincat(fun.result);
  if (got && want && !(*got == *want)) {
    diags.push_back({ErrorKind::LinTypeError, fun.name + ":/",
                     "expected " + want->str_repr() + ", got " + got->str_repr()});
  }
  return diags;
}

std::vector<Diagnostic> validate_concrete(const ConcreteGrammar& conc, const Signature& sig) {
  std::vector<Diagnostic> diags;
  for (const auto& cat : sig.categories()) {
    if (!conc.lincat(cat)) diags.push_back({ErrorKind::MissingLincat, cat, "no lincat"});
  }
  for (const auto& [cat, type] : conc.lincats()) {
    if (!sig.has_category(cat)) {
      diags.push_back({ErrorKind::UnknownCategory, cat, "lincat for undeclared category"});
    }
    check_type_refs(type, conc, "lincat " + cat, diags);
  }
  for (const auto& [name, fun] : sig.functions()) {
    const auto* rule = conc.linrule(name);
    if (!rule) {
      diags.push_back({ErrorKind::MissingLinRule, name, "no linrule"});
      continue;
    }
    auto more = check_linrule(*rule, fun, conc);
    diags.insert(diags.end(), more.begin(), more.end());
  }
  for (const auto& [name, rule] : conc.linrules()) {
    if (!sig.find(name)) diags.push_back({ErrorKind::UnknownFunction, name, "linrule for undeclared function"});
  }
  for (const auto& [name, g] : conc.guesses()) {
    const auto* fun = sig.find(name);
    if (!fun) {
      diags.push_back({ErrorKind::UnknownFunction, name, "guess rule for undeclared function"});
    } else if (fun->arity() != 1 || fun->args.front() != kStringCat) {
      diags.push_back({ErrorKind::CategoryMismatch, name, "guess rules need a function String -> C"});
    }
  }
  return diags;
}

}  // namespace lcnl
