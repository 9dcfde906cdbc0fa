#include <algorithm>

#include "doctest.h"
#include "lcnl/embedding.hpp"
#include "lcnl/grammar_lang.hpp"
#include "support.hpp"

using namespace lcnl;

namespace {

GrammarSet grammar_set(const std::string& abs, const std::string& conc) {
  GrammarSet g;
  g.signature = parse_abstract(abs);
  g.concretes.emplace("eng", parse_concrete(conc, g.signature));
  return g;
}

GrammarSet cnl(bool gendered_shared = false) {
  return grammar_set(R"(abstract C { flags startcat = S_CNL ; cat S_CNL ; P ; Shared ;
      fun say : P -> S_CNL [cost=0.1, layer=cnl] ;
      fun bob : P [layer=cnl] ;
      fun sh : Shared ; })",
                     std::string("concrete CE of C { param G = Masc | Fem ;\n lincat S_CNL = {s : Str} ; P = {s : Str ; g : G} ;\n") +
                         (gendered_shared ? "lincat Shared = {s : Str ; g : G} ; lin sh = {s = \"x\" ; g = Fem} ;"
                                          : "lincat Shared = {s : Str} ; lin sh = {s = \"x\"} ;") +
                         R"(lin say p = {s = p.s ++ "rocks"} ;
      lin bob = {s = "Bob" ; g = Masc} ; })");
}

GrammarSet host(const std::string& extra = "", const std::string& extra_conc = "") {
  return grammar_set("abstract H { flags startcat = S_Host ; cat S_Host ; NP ; Shared ;" + extra + R"(
      fun run : NP -> S_Host [layer=host] ;
      fun bob_NP : NP [layer=host] ;
      fun sh2 : Shared ; })",
                     R"(concrete HE of H { lincat S_Host = {s : Str} ; NP = {s : Str} ; Shared = {s : Str} ;
      lin run np = {s = np.s ++ "runs"} ;
      lin bob_NP = {s = "Bob"} ;
      lin sh2 = {s = "y"} ;)" + extra_conc + "}");
}

EmbeddingConfig config(std::vector<std::string> chunks = {"S_Host", "NP"}) {
  EmbeddingConfig cfg;
  cfg.chunk_categories = std::move(chunks);
  return cfg;
}

Error caught(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error thrown");
  return Error(ErrorKind::PackError, "", "");
}

}  // namespace

TEST_CASE("embed generates markers and the chunk layer") {
  auto lg = embed(cnl(), host(), config());
  const auto& sig = lg.signature;
  CHECK(sig.start() == "S");
  CHECK(sig.at("UseCNL").args == std::vector<std::string>{"S_CNL"});
  CHECK(sig.at("UseCNL").cost == doctest::Approx(0.1));
  CHECK(sig.at("UseHost").cost == doctest::Approx(1.0));
  CHECK(sig.at("ChunkS").args == std::vector<std::string>{"S_Host"});
  CHECK(sig.at("ChunkNP").cost == doctest::Approx(10.0));
  CHECK(sig.at("ChunkNP").layer == Layer::Word);
  CHECK(sig.at("ChunkCNL").layer == Layer::Semantic);
  for (const char* f : {"OneChunk", "ConsChunk", "UseChunks", "UnknownWord", "ChunkUnknown"}) {
    CHECK_MESSAGE(sig.find(f) != nullptr, f);
  }
  CHECK(lg.provenance.at("ChunkNP") == Generator::Chunk);
  CHECK(lg.provenance.at("UseHost") == Generator::UseHost);
  CHECK_FALSE(lg.provenance.contains("run"));
  // original functions keep their cost and layer
  CHECK(sig.at("say") == cnl().signature.at("say"));
  CHECK(sig.at("run") == host().signature.at("run"));
}

TEST_CASE("embed without chunk categories adds only the markers") {
  auto lg = embed(cnl(), host(), config({}));
  CHECK_FALSE(lg.chunks_enabled());
  CHECK(lg.signature.find("UseCNL"));
  CHECK(lg.signature.find("UseHost"));
  CHECK_FALSE(lg.signature.has_category("Chunk"));
  CHECK(lg.signature.find("UnknownWord") == nullptr);
  CHECK(lg.signature.functions().size() == cnl().signature.functions().size() + host().signature.functions().size() + 2);
}

TEST_CASE("embed reports clashes") {
  auto e = caught([] { embed(cnl(), host("fun bob : NP ;", "lin bob = {s = \"b\"} ;"), config()); });
  CHECK(e.kind() == ErrorKind::NameClash);
  CHECK(e.diagnostics()[0].where == "bob");
  e = caught([] { embed(cnl(), host("cat Chunk ;", "lincat Chunk = {s : Str} ;"), config()); });
  CHECK(e.kind() == ErrorKind::NameClash);
  e = caught([] { embed(cnl(true), host(), config()); });
  CHECK(e.kind() == ErrorKind::LincatClash);
  e = caught([] {
    auto cfg = config();
    cfg.host_start = "Missing";
    embed(cnl(), host(), cfg);
  });
  CHECK(e.kind() == ErrorKind::UnknownCategory);
}

TEST_CASE("cost policy") {
  EmbeddingConfig cfg;
  CHECK_FALSE(cost_policy_violation(cfg));
  cfg.costs.use_cnl = 1.0;
  CHECK(*cost_policy_violation(cfg) == "useCnl < useHost violated");
  cfg.costs.use_cnl = 0.1;
  cfg.costs.per_chunk = 0.5;
  CHECK(*cost_policy_violation(cfg) == "perChunk > useHost violated");
  cfg.costs.per_chunk = 10;
  cfg.costs.coercion = -1;
  CHECK(*cost_policy_violation(cfg) == "coercion >= 0 violated");
  auto e = caught([&] { validate_cost_policy(cfg); });
  CHECK(e.kind() == ErrorKind::InvalidCostPolicy);
}

TEST_CASE("coercions") {
  auto lg = embed(cnl(), host(), config());
  SUBCASE("incompatible lincats need a linrule") {
    auto e = caught([&] { add_coercions(lg, {{"NP", "P"}}); });
    CHECK(e.kind() == ErrorKind::LincatIncompatible);
  }
  SUBCASE("field copy") {
    auto with = add_coercions(lg, {{"P", "NP"}});
    const auto& f = with.signature.at("p2np");
    CHECK(f.args == std::vector<std::string>{"P"});
    CHECK(f.result == "NP");
    CHECK(f.cost == doctest::Approx(0.5));
    CHECK(with.provenance.at("p2np") == Generator::Coercion);
    auto t = parse_tree("(UseHost (run (p2np bob)))", with.signature);
    CHECK(linearize_tokens(t, with.concretes.at("eng")) == std::vector<std::string>{"Bob", "runs"});
  }
  SUBCASE("glue rule") {
    std::map<std::string, ConcreteGrammar> glue;
    glue.emplace("eng", read_concrete(R"(concrete G of Layered { lin np2p x = {s = x.s ; g = Fem} ; })"));
    auto with = add_coercions(lg, {{"NP", "P"}}, glue);
    auto t = parse_tree("(UseCNL (say (np2p bob_NP)))", with.signature);
    CHECK(linearize_tokens(t, with.concretes.at("eng")) == std::vector<std::string>{"Bob", "rocks"});
  }
  SUBCASE("cycles") {
    auto e = caught([&] { add_coercions(lg, {{"NP", "P"}, {"P", "NP"}}); });
    CHECK(e.kind() == ErrorKind::CoercionCycle);
    CHECK(e.diagnostics()[0].where == "NP -> P -> NP");
    e = caught([&] { add_coercions(lg, {{"NP", "P"}, {"P", "Shared"}, {"Shared", "NP"}}); });
    CHECK(e.kind() == ErrorKind::CoercionCycle);
    CHECK(e.diagnostics()[0].where == "NP -> P -> Shared -> NP");
    // a cycle closed across two calls
    auto once = add_coercions(lg, {{"P", "NP"}});
    e = caught([&] { add_coercions(once, {{"NP", "P"}}); });
    CHECK(e.kind() == ErrorKind::CoercionCycle);
  }
  SUBCASE("unknown category") {
    auto e = caught([&] { add_coercions(lg, {{"NP", "Nope"}}); });
    CHECK(e.kind() == ErrorKind::UnknownCategory);
  }
}

TEST_CASE("find_cycle") {
  CHECK(find_cycle({{"A", "B"}, {"B", "C"}}).empty());
  auto c = find_cycle({{"A", "B"}, {"B", "C"}, {"C", "B"}});
  REQUIRE(c.size() == 3);
  CHECK(c.front() == c.back());
  CHECK(find_cycle({{"A", "A"}}) == std::vector<std::string>{"A", "A"});
}

TEST_CASE("demo layered grammar") {
  const auto& lg = testsupport::demo().grammar();
  CHECK(lg.signature.find("np2person"));
  CHECK(lg.signature.find("fact2cl"));
  CHECK(lg.languages() == std::vector<std::string>{"eng", "fra"});
}
