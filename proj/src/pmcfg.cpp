#include "lcnl/pmcfg.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <functional>

namespace lcnl {

std::string PNonterminal::str() const {
  std::string out = category;
  if (!assignment.empty()) {
    out += "{";
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (i) out += ",";
      out += assignment[i];
    }
    out += "}";
  }
  return out;
}

std::optional<int> ParsingGrammar::find_nonterminal(const PNonterminal& nt) const {
  auto it = nt_index_.find(nt);
  if (it == nt_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> ParsingGrammar::nonterminals_of(std::string_view category) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nts_.size(); ++i) {
    if (nts_[i].category == category) out.push_back(static_cast<int>(i));
  }
  return out;
}

const CategoryLayout& ParsingGrammar::layout(std::string_view category) const {
  auto it = layouts_.find(category);
  if (it == layouts_.end()) throw Error(ErrorKind::UnknownCategory, std::string(category), "no layout");
  return it->second;
}

int ParsingGrammar::min_length(int nt, int comp) const {
  return min_len_[static_cast<std::size_t>(nt)][static_cast<std::size_t>(comp)];
}

int ParsingGrammar::intern(PNonterminal nt) {
  auto it = nt_index_.find(nt);
  if (it != nt_index_.end()) return it->second;
  int id = static_cast<int>(nts_.size());
  nt_index_.emplace(nt, id);
  nts_.push_back(std::move(nt));
  by_lhs_.emplace_back();
  return id;
}

namespace {

void build_layout(const LinType& t, const ConcreteGrammar& conc, const std::string& prefix, CategoryLayout& out) {
  switch (t.kind) {
    case LinType::Kind::Str:
      if (prefix == "s" || prefix.empty()) out.start_component = static_cast<int>(out.str_components.size());
      out.str_components.push_back(prefix);
      return;
    case LinType::Kind::Param:
      out.param_components.push_back(prefix);
      out.param_types.push_back(t.param);
      return;
    case LinType::Kind::Record:
      for (const auto& [name, ft] : t.fields) {
        build_layout(ft, conc, prefix.empty() ? name : prefix + "." + name, out);
      }
      return;
    case LinType::Kind::Table:
      for (const auto& v : conc.param(t.param)->values) build_layout(t.value.front(), conc, prefix + "!" + v, out);
      return;
  }
}

// Builds an argument value whose Str leaves refer to the argument's components.
LinValue symbolic(const LinType& t, const ConcreteGrammar& conc, int arg, const std::vector<std::string>& assignment,
                  int& comp, std::size_t& param) {
  LinValue v;
  switch (t.kind) {
    case LinType::Kind::Str:
      v.kind = LinValue::Kind::Str;
      v.items.push_back(Item{"", {}, arg, comp++});
      return v;
    case LinType::Kind::Param:
      v.kind = LinValue::Kind::Param;
      v.value = assignment[param++];
      return v;
    case LinType::Kind::Record:
      v.kind = LinValue::Kind::Record;
      for (const auto& [name, ft] : t.fields) v.fields.emplace_back(name, symbolic(ft, conc, arg, assignment, comp, param));
      return v;
    case LinType::Kind::Table: {
      v.kind = LinValue::Kind::Table;
      v.param = t.param;
      for (std::size_t i = 0; i < conc.param(t.param)->values.size(); ++i) {
        v.cells.push_back(symbolic(t.value.front(), conc, arg, assignment, comp, param));
      }
      return v;
    }
  }
  return v;
}

void flatten(const LinValue& v, std::vector<std::vector<Item>>& comps, std::vector<std::string>& assignment) {
  switch (v.kind) {
    case LinValue::Kind::Str: comps.push_back(v.items); return;
    case LinValue::Kind::Param: assignment.push_back(v.value); return;
    case LinValue::Kind::Record:
      for (const auto& [n, f] : v.fields) flatten(f, comps, assignment);
      return;
    case LinValue::Kind::Table:
      for (const auto& c : v.cells) flatten(c, comps, assignment);
      return;
  }
}

std::vector<std::vector<std::string>> all_assignments(const CategoryLayout& layout, const ConcreteGrammar& conc) {
  std::vector<std::vector<std::string>> out{{}};
  for (const auto& type : layout.param_types) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : out) {
      for (const auto& v : conc.param(type)->values) {
        auto a = prefix;
        a.push_back(v);
        next.push_back(std::move(a));
      }
    }
    out = std::move(next);
  }
  return out;
}

void collect_lookup_keys(const LinExpr& e, int arg, std::set<std::string>& keys) {
  if (e.kind == LinExpr::Kind::Lookup && e.arg == arg) {
    for (std::size_t i = 0; i + 1 < e.children.size(); ++i) keys.insert(e.labels[i]);
  }
  for (const auto& c : e.children) collect_lookup_keys(*c, arg, keys);
}

}  // namespace

ParsingGrammar compile(const Signature& sig, const ConcreteGrammar& conc, std::size_t cap) {
  ParsingGrammar pg;
  pg.sig_ = sig;
  pg.conc_ = conc;

  std::map<std::string, std::vector<std::vector<std::string>>> assignments;
  for (const auto& cat : sig.categories()) {
    const auto* lc = conc.lincat(cat);
    if (!lc) throw Error(ErrorKind::MissingLincat, cat, "no lincat in " + conc.name());
    CategoryLayout layout;
    build_layout(*lc, conc, "", layout);
    assignments[cat] = all_assignments(layout, conc);
    pg.layouts_[cat] = std::move(layout);
  }

  std::size_t instantiations = 0;
  for (const auto& [name, fun] : sig.functions()) {
    const auto* rule = conc.linrule(name);
    if (!rule) throw Error(ErrorKind::MissingLinRule, name, "no linrule in " + conc.name());

    // Per argument: candidate (assignment, fixed key) variants.
    struct Variant {
      std::vector<std::string> assignment;
      std::optional<std::string> key;
    };
    std::vector<std::vector<Variant>> choices;
    std::vector<std::vector<std::string>> excluded(fun.arity());
    for (std::size_t i = 0; i < fun.arity(); ++i) {
      std::vector<Variant> vs;
      if (fun.args[i] == kStringCat) {
        std::set<std::string> keys;
        collect_lookup_keys(*rule->body, static_cast<int>(i), keys);
        for (const auto& k : keys) vs.push_back({{}, k});
        vs.push_back({{}, std::nullopt});
        excluded[i].assign(keys.begin(), keys.end());
      } else {
        for (const auto& a : assignments.at(fun.args[i])) vs.push_back({a, std::nullopt});
      }
      choices.push_back(std::move(vs));
    }

    std::vector<std::size_t> pick(fun.arity(), 0);
    for (;;) {
      if (++instantiations > cap) {
        throw Error(ErrorKind::ParamExplosion, name,
                    "more than " + std::to_string(cap) + " parameter instantiations");
      }
      std::vector<LinValue> args;
      args.reserve(fun.arity());
      EvalEnv env{conc, {}, {}, {}};
      PProduction prod;
      prod.fun = name;
      prod.cost = fun.cost;
      for (std::size_t i = 0; i < fun.arity(); ++i) {
        const auto& v = choices[i][pick[i]];
        RhsSlot slot;
        if (fun.args[i] == kStringCat) {
          LinValue sv;
          if (v.key) sv.items.push_back(Item{*v.key, {}, -1, -1});
          else {
            sv.items.push_back(Item{"", {}, static_cast<int>(i), 0});
            prod.excluded = excluded[i];
            if (const auto* g = conc.guess(name)) prod.guess = *g;
          }
          args.push_back(std::move(sv));
          slot.fixed = v.key;
        } else {
          int comp = 0;
          std::size_t param = 0;
          args.push_back(symbolic(*conc.lincat(fun.args[i]), conc, static_cast<int>(i), v.assignment, comp, param));
          slot.nt = pg.intern(PNonterminal{fun.args[i], v.assignment});
        }
        env.keys.push_back(v.key);
        prod.rhs.push_back(std::move(slot));
      }
      for (const auto& a : args) env.args.push_back(&a);

      auto value = evaluate(*rule->body, env);
      std::vector<std::string> lhs_assignment;
      flatten(value, prod.components, lhs_assignment);
      prod.lhs = pg.intern(PNonterminal{fun.result, std::move(lhs_assignment)});
      for (auto& comp : prod.components) {
        for (auto& item : comp) {
          item.path.clear();
          if (!item.is_arg()) pg.literals_.insert(item.token);
        }
      }
      pg.by_lhs_[static_cast<std::size_t>(prod.lhs)].push_back(static_cast<int>(pg.prods_.size()));
      pg.prods_.push_back(std::move(prod));

      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }

  // Minimal component lengths by fixed point.
  pg.min_len_.assign(pg.nts_.size(), {});
  for (std::size_t n = 0; n < pg.nts_.size(); ++n) {
    pg.min_len_[n].assign(pg.layout(pg.nts_[n].category).str_components.size(), INT_MAX);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : pg.prods_) {
      for (std::size_t c = 0; c < p.components.size(); ++c) {
        long total = 0;
        for (const auto& item : p.components[c]) {
          if (!item.is_arg()) total += 1;
          else if (p.rhs[static_cast<std::size_t>(item.arg)].is_string()) total += 1;
          else {
            int m = pg.min_len_[static_cast<std::size_t>(p.rhs[static_cast<std::size_t>(item.arg)].nt)]
                               [static_cast<std::size_t>(item.comp)];
            if (m == INT_MAX) {
              total = INT_MAX;
              break;
            }
            total += m;
          }
        }
        auto& slot = pg.min_len_[static_cast<std::size_t>(p.lhs)][c];
        if (total < slot) {
          slot = static_cast<int>(total);
          changed = true;
        }
      }
    }
  }
  return pg;
}

std::optional<std::vector<std::string>> replay(const ParsingGrammar& pg, const Tree& tree) {
  struct Derived {
    int nt;
    std::vector<std::vector<std::string>> comps;
  };
  std::function<std::optional<Derived>(const Tree&)> go = [&](const Tree& t) -> std::optional<Derived> {
    std::vector<std::optional<Derived>> kids;
    for (const auto& c : t.children) {
      if (c.is_literal) kids.emplace_back(std::nullopt);
      else {
        auto d = go(c);
        if (!d) return std::nullopt;
        kids.push_back(std::move(d));
      }
    }
    for (const auto& p : pg.productions()) {
      if (p.fun != t.fun || p.rhs.size() != t.children.size()) continue;
      bool ok = true;
      for (std::size_t i = 0; i < p.rhs.size() && ok; ++i) {
        const auto& slot = p.rhs[i];
        if (slot.is_string()) {
          const auto& text = t.children[i].fun;
          if (slot.fixed) ok = *slot.fixed == text;
          else ok = std::find(p.excluded.begin(), p.excluded.end(), text) == p.excluded.end();
        } else {
          ok = kids[i] && kids[i]->nt == slot.nt;
        }
      }
      if (!ok) continue;
      Derived d{p.lhs, {}};
      for (const auto& comp : p.components) {
        std::vector<std::string> out;
        for (const auto& item : comp) {
          if (!item.is_arg()) out.push_back(item.token);
          else if (p.rhs[static_cast<std::size_t>(item.arg)].is_string()) {
            out.push_back(t.children[static_cast<std::size_t>(item.arg)].fun);
          } else {
            const auto& sub = kids[static_cast<std::size_t>(item.arg)]->comps[static_cast<std::size_t>(item.comp)];
            out.insert(out.end(), sub.begin(), sub.end());
          }
        }
        d.comps.push_back(std::move(out));
      }
      return d;
    }
    return std::nullopt;
  };
  auto root = go(tree);
  if (!root) return std::nullopt;
  const auto& layout = pg.layout(pg.nonterminals()[static_cast<std::size_t>(root->nt)].category);
  if (layout.start_component < 0) return std::nullopt;
  return root->comps[static_cast<std::size_t>(layout.start_component)];
}

std::vector<TokenOffset> tokenize_with_offsets(std::string_view text) {
  std::vector<TokenOffset> out;
  std::size_t i = 0;
  int cp = 0;  // code point offset of text[i]
  auto is_cont = [](char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++cp;
      continue;
    }
    std::size_t j = i;
    int cpj = cp;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) {
      if (!is_cont(text[j])) ++cpj;
      ++j;
    }
    // Peel trailing punctuation off the word.
    std::size_t word_end = j;
    while (word_end > i && is_punctuation_token(text.substr(word_end - 1, 1))) --word_end;
    int word_cp_end = cpj - static_cast<int>(j - word_end);
    if (word_end > i) {
      out.push_back({std::string(text.substr(i, word_end - i)), cp, word_cp_end});
    }
    for (std::size_t k = word_end; k < j; ++k) {
      int off = word_cp_end + static_cast<int>(k - word_end);
      out.push_back({std::string(1, text[k]), off, off + 1});
    }
    i = j;
    cp = cpj;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_offsets(text)) out.push_back(std::move(t.token));
  return out;
}

bool guess_accepts(const ParsingGrammar& pg, const PProduction& prod, std::string_view token, std::size_t position) {
  if (!prod.guess || token.empty()) return false;
  if (std::find(prod.excluded.begin(), prod.excluded.end(), token) != prod.excluded.end()) return false;
  switch (prod.guess->kind) {
    case GuessKind::Any:
      return true;
    case GuessKind::Digits:
      return std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    case GuessKind::Name:
      return position > 0 && !pg.is_literal(token) && std::isupper(static_cast<unsigned char>(token.front()));
    case GuessKind::Suffix:
      if (pg.is_literal(token)) return false;
      for (const auto& s : prod.guess->suffixes) {
        if (token.size() > s.size() && token.ends_with(s)) return true;
      }
      return false;
  }
  return false;
}

std::vector<Hypothesis> oov_hypotheses(const ParsingGrammar& pg, std::string_view token, bool sentence_initial) {
  std::vector<Hypothesis> out;
  std::size_t position = sentence_initial ? 0 : 1;
  for (const auto& p : pg.productions()) {
    if (p.rhs.size() != 1 || !p.rhs.front().is_string() || p.rhs.front().fixed) continue;
    if (!guess_accepts(pg, p, token, position)) continue;
    out.push_back(Hypothesis{pg.nonterminals()[static_cast<std::size_t>(p.lhs)], p.fun, p.cost});
  }
  return out;
}

std::pair<long long, std::string> rank_key(double cost, const Tree& tree) {
  return {std::llround(cost * 1e6), serialize_tree(tree)};
}

}  // namespace lcnl
