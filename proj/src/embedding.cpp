#include "lcnl/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace lcnl {

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::UseCnl: return "UseCNL";
    case Generator::UseHost: return "UseHost";
    case Generator::Chunk: return "Chunk";
    case Generator::ChunkCnl: return "ChunkCNL";
    case Generator::OneChunk: return "OneChunk";
    case Generator::ConsChunk: return "ConsChunk";
    case Generator::UseChunks: return "UseChunks";
    case Generator::UnknownWord: return "UnknownWord";
    case Generator::ChunkUnknown: return "ChunkUnknown";
    case Generator::Coercion: return "Coercion";
  }
  return "?";
}

std::vector<std::string> LayeredGrammar::languages() const {
  std::vector<std::string> out;
  for (const auto& [id, c] : concretes) out.push_back(id);
  return out;
}

std::optional<std::string> cost_policy_violation(const EmbeddingConfig& cfg) {
  const auto& c = cfg.costs;
  for (auto [name, v] : {std::pair{"useCnl", c.use_cnl}, {"useHost", c.use_host}, {"perChunk", c.per_chunk},
                         {"coercion", c.coercion}, {"unknownWord", c.unknown_word}}) {
    if (!(v >= 0.0)) return std::string(name) + " >= 0 violated";
  }
  if (!(c.use_cnl < c.use_host)) return std::string("useCnl < useHost violated");
  if (!(c.per_chunk > c.use_host)) return std::string("perChunk > useHost violated");
  return std::nullopt;
}

void validate_cost_policy(const EmbeddingConfig& cfg) {
  if (auto v = cost_policy_violation(cfg)) throw Error(ErrorKind::InvalidCostPolicy, "costs", *v);
}

std::string coercion_name(const std::string& from, const std::string& to) {
  std::string out;
  for (char c : from) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  out += "2";
  for (char c : to) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> find_cycle(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b];
  }
  std::map<std::string, int> color;  // 0 white, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::vector<std::string> cycle;
  std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
    color[v] = 1;
    stack.push_back(v);
    for (const auto& w : adj[v]) {
      if (color[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        cycle.push_back(w);
        return true;
      }
      if (color[w] == 0 && dfs(w)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (const auto& [v, _] : adj) {
    if (color[v] == 0 && dfs(v)) return cycle;
  }
  return {};
}

namespace {

LinType record_s() { return LinType::record({{"s", LinType::str()}}); }

LinExprPtr arg(int i) { return LinExpr::arg_ref(i, "x" + std::to_string(i)); }

// Expression yielding a plain Str from an argument of lincat `t`: the `s`
// field, selecting the first value of any table on the way.
std::optional<LinExprPtr> string_of(LinExprPtr e, const LinType& t, const ConcreteGrammar& conc) {
  const LinType* cur = &t;
  if (cur->kind == LinType::Kind::Record) {
    cur = t.field("s");
    if (!cur) return std::nullopt;
    e = LinExpr::project(e, "s");
  }
  while (cur->kind == LinType::Kind::Table) {
    e = LinExpr::select(e, LinExpr::param(conc.param(cur->param)->values.front()));
    cur = &cur->value.front();
  }
  if (cur->kind != LinType::Kind::Str) return std::nullopt;
  return e;
}

LinRule wrap_rule(const std::string& fun, std::vector<std::string> vars, LinExprPtr s) {
  return LinRule{fun, std::move(vars), LinExpr::record({{"s", std::move(s)}})};
}

void merge_concrete(ConcreteGrammar& into, const ConcreteGrammar& from, const std::string& lang) {
  for (const auto& [name, p] : from.params()) {
    if (const auto* have = into.param(name)) {
      if (!(*have == p)) throw Error(ErrorKind::LincatClash, "param " + name + " (" + lang + ")", "param declared differently");
      continue;
    }
    try {
      into.add_param(p);
    } catch (const Error& e) {
      throw Error(ErrorKind::LincatClash, "param " + name + " (" + lang + ")", e.diagnostics().front().message);
    }
  }
  for (const auto& [cat, t] : from.lincats()) {
    if (const auto* have = into.lincat(cat)) {
      if (!(*have == t)) {
        throw Error(ErrorKind::LincatClash, cat + " (" + lang + ")",
                    "lincats differ: " + have->str_repr() + " vs " + t.str_repr());
      }
      continue;
    }
    into.set_lincat(cat, t);
  }
  for (const auto& [fun, r] : from.linrules()) into.set_linrule(r);
  for (const auto& [fun, g] : from.guesses()) into.set_guess(g);
}

}  // namespace

LayeredGrammar embed(const GrammarSet& cnl, const GrammarSet& host, const EmbeddingConfig& cfg) {
  validate_cost_policy(cfg);
  LayeredGrammar lg;
  lg.config = cfg;
  lg.config.coercions.clear();

  const auto& cs = cnl.signature;
  const auto& hs = host.signature;
  if (!cs.has_category(cfg.cnl_start)) throw Error(ErrorKind::UnknownCategory, cfg.cnl_start, "CNL start category");
  if (!hs.has_category(cfg.host_start)) throw Error(ErrorKind::UnknownCategory, cfg.host_start, "host start category");

  Signature sig("Layered", std::string(kLayeredStart));
  std::set<std::string> generated_cats{std::string(kLayeredStart)};
  if (!cfg.chunk_categories.empty()) {
    generated_cats.insert({std::string(kChunkCat), std::string(kChunkListCat), std::string(kUnknownCat)});
  }
  for (const auto* part : {&cs, &hs}) {
    for (const auto& c : part->categories()) {
      if (generated_cats.contains(c)) throw Error(ErrorKind::NameClash, c, "category reserved for the layered grammar");
      if (!sig.has_category(c)) sig.add_category(c);
    }
  }
  for (const auto& c : generated_cats) sig.add_category(c);
  for (const auto* part : {&cs, &hs}) {
    for (const auto& [name, f] : part->functions()) {
      if (sig.find(name)) {
        const auto& other = sig.at(name);
        throw Error(ErrorKind::NameClash, name,
                    "declared in both grammars (" + other.result + " and " + f.result + ")");
      }
      sig.add_function(f);
    }
  }

  auto gen = [&](const std::string& name, std::vector<std::string> args, std::string result, double cost,
                 Layer layer, Generator kind) {
    if (sig.find(name)) throw Error(ErrorKind::NameClash, name, "clashes with a generated function");
    sig.add_function(FunDecl{name, std::move(args), std::move(result), cost, layer});
    lg.provenance[name] = kind;
  };
  const std::string S(kLayeredStart), Chunk(kChunkCat), List(kChunkListCat), Unknown(kUnknownCat);
  const auto& k = cfg.costs;
  gen("UseCNL", {cfg.cnl_start}, S, k.use_cnl, Layer::Semantic, Generator::UseCnl);
  gen("UseHost", {cfg.host_start}, S, k.use_host, Layer::Syntactic, Generator::UseHost);
  if (!cfg.chunk_categories.empty()) {
    for (const auto& c : cfg.chunk_categories) {
      if (!hs.has_category(c)) throw Error(ErrorKind::UnknownCategory, c, "chunk category not in host grammar");
      gen("Chunk" + (c == cfg.host_start ? std::string("S") : c), {c}, Chunk, k.per_chunk, Layer::Word, Generator::Chunk);
    }
    gen("ChunkCNL", {cfg.cnl_start}, Chunk, k.per_chunk, Layer::Semantic, Generator::ChunkCnl);
    gen("OneChunk", {Chunk}, List, 0.0, Layer::Neutral, Generator::OneChunk);
    gen("ConsChunk", {Chunk, List}, List, 0.0, Layer::Neutral, Generator::ConsChunk);
    gen("UseChunks", {List}, S, 0.0, Layer::Word, Generator::UseChunks);
    gen(std::string(kUnknownWordFun), {std::string(kStringCat)}, Unknown, k.unknown_word, Layer::Word, Generator::UnknownWord);
    gen(std::string(kChunkUnknownFun), {Unknown}, Chunk, k.per_chunk, Layer::Word, Generator::ChunkUnknown);
  }
  sig.validate();

  for (const auto& [lang, cc] : cnl.concretes) {
    if (!host.concretes.contains(lang)) throw Error(ErrorKind::UnknownLanguage, lang, "missing from host grammar");
  }
  for (const auto& [lang, hc] : host.concretes) {
    auto cit = cnl.concretes.find(lang);
    if (cit == cnl.concretes.end()) throw Error(ErrorKind::UnknownLanguage, lang, "missing from CNL grammar");
    ConcreteGrammar conc("Layered" + lang, "Layered");
    merge_concrete(conc, cit->second, lang);
    merge_concrete(conc, hc, lang);
    for (const auto& c : generated_cats) conc.set_lincat(c, record_s());

    auto start_of = [&](const std::string& cat) {
      auto e = string_of(arg(0), *conc.lincat(cat), conc);
      if (!e) throw Error(ErrorKind::NoStartField, cat + " (" + lang + ")", "needs a Str field 's'");
      return *e;
    };
    conc.set_linrule(wrap_rule("UseCNL", {"x0"}, start_of(cfg.cnl_start)));
    conc.set_linrule(wrap_rule("UseHost", {"x0"}, start_of(cfg.host_start)));
    if (!cfg.chunk_categories.empty()) {
      for (const auto& c : cfg.chunk_categories) {
        auto name = "Chunk" + (c == cfg.host_start ? std::string("S") : c);
        auto e = string_of(arg(0), *conc.lincat(c), conc);
        if (!e) throw Error(ErrorKind::LincatIncompatible, c + " (" + lang + ")", "chunk category needs a field 's'");
        conc.set_linrule(wrap_rule(name, {"x0"}, *e));
      }
      conc.set_linrule(wrap_rule("ChunkCNL", {"x0"}, start_of(cfg.cnl_start)));
      conc.set_linrule(wrap_rule("OneChunk", {"x0"}, LinExpr::project(arg(0), "s")));
      conc.set_linrule(wrap_rule("ConsChunk", {"x0", "x1"},
                                 LinExpr::concat(LinExpr::project(arg(0), "s"), LinExpr::project(arg(1), "s"))));
      conc.set_linrule(wrap_rule("UseChunks", {"x0"}, LinExpr::project(arg(0), "s")));
      conc.set_linrule(wrap_rule(std::string(kUnknownWordFun), {"x0"}, arg(0)));
      conc.set_linrule(wrap_rule(std::string(kChunkUnknownFun), {"x0"}, LinExpr::project(arg(0), "s")));
      conc.set_guess(GuessRule{std::string(kUnknownWordFun), GuessKind::Any, {}});
    }
    auto diags = validate_concrete(conc, sig);
    if (!diags.empty()) {
      for (auto& d : diags) d.where += " (" + lang + ")";
      throw Error(std::move(diags));
    }
    lg.concretes.emplace(lang, std::move(conc));
  }
  lg.signature = std::move(sig);
  return lg;
}

namespace {

// Identity-style linrule when every field of `to` exists in `from` with the
// same type.
std::optional<LinExprPtr> field_copy(const LinType& from, const LinType& to) {
  if (from == to) return arg(0);
  if (to.kind == LinType::Kind::Str) {
    if (from.kind == LinType::Kind::Record) {
      const auto* s = from.field("s");
      if (s && s->kind == LinType::Kind::Str) return LinExpr::project(arg(0), "s");
    }
    return std::nullopt;
  }
  if (to.kind != LinType::Kind::Record || from.kind != LinType::Kind::Record) return std::nullopt;
  std::vector<std::pair<std::string, LinExprPtr>> fields;
  for (const auto& [name, t] : to.fields) {
    const auto* f = from.field(name);
    if (!f || !(*f == t)) return std::nullopt;
    fields.emplace_back(name, LinExpr::project(arg(0), name));
  }
  return LinExpr::record(std::move(fields));
}

}  // namespace

LayeredGrammar add_coercions(LayeredGrammar lg, const std::vector<std::pair<std::string, std::string>>& pairs,
                             const std::map<std::string, ConcreteGrammar>& glue) {
  for (const auto& [from, to] : pairs) {
    for (const auto& c : {from, to}) {
      if (!lg.signature.has_category(c)) throw Error(ErrorKind::UnknownCategory, c, "coercion category not declared");
    }
  }
  auto edges = lg.coercion_edges;
  edges.insert(edges.end(), pairs.begin(), pairs.end());
  if (auto cycle = find_cycle(edges); !cycle.empty()) {
    std::string path;
    for (const auto& c : cycle) path += (path.empty() ? "" : " -> ") + c;
    throw Error(ErrorKind::CoercionCycle, path, "coercions must not form a cycle");
  }

  for (const auto& [from, to] : pairs) {
    auto name = coercion_name(from, to);
    if (lg.signature.find(name)) throw Error(ErrorKind::NameClash, name, "coercion name already used");
    FunDecl decl{name, {from}, to, lg.config.costs.coercion, Layer::Neutral};
    lg.signature.add_function(decl);
    lg.provenance[name] = Generator::Coercion;
    for (auto& [lang, conc] : lg.concretes) {
      auto git = glue.find(lang);
      const LinRule* supplied = git == glue.end() ? nullptr : git->second.linrule(name);
      if (supplied) {
        auto diags = check_linrule(*supplied, decl, conc);
        if (!diags.empty()) {
          for (auto& d : diags) d.where += " (" + lang + ")";
          throw Error(std::move(diags));
        }
        conc.set_linrule(*supplied);
        continue;
      }
      auto body = field_copy(*conc.lincat(from), *conc.lincat(to));
      if (!body) {
        throw Error(ErrorKind::LincatIncompatible, from + " -> " + to + " (" + lang + ")",
                    "lincats are not field compatible and no linrule was supplied");
      }
      conc.set_linrule(LinRule{name, {"x0"}, *body});
    }
    lg.coercion_edges.emplace_back(from, to);
    lg.config.coercions.emplace_back(from, to);
  }
  return lg;
}

}  // namespace lcnl
