// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "lcnl/grammar_lang.hpp"
#include "random_grammar.hpp"
#include "support.hpp"

using namespace lcnl;
using testsupport::demo;

namespace {

struct Failed {
  std::string why;
};

void expect(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

bool fully(const std::vector<ConfidenceSpan>& spans, int length, SpanLayer layer) {
  return spans.size() == 1 && spans[0].start == 0 && spans[0].end == length && spans[0].layer == layer;
}

int cps(const std::string& s) {
  int n = 0;
  for (char c : s) n += (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  return n;
}

std::string c1() {
  const std::string src = "John does not believe that the queen is sixty-five years old";
  auto t0 = std::chrono::steady_clock::now();
  auto r = demo().translate(src, "eng", "fra");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string want = "John ne croit pas que la reine ait soixante-cinq ans";
  expect(r.target == want, "target was '" + r.target + "'");
  auto at = r.tree.find("(fact2cl (aged (np2person ");
  expect(at != std::string::npos, "no fact2cl/aged/np2person subterm in " + r.tree);
  expect(r.tree.find("(mkNumeral \"65\"))))", at) != std::string::npos, "numeral is not 65 in " + r.tree);
  int region = cps("John ne croit pas que la reine ");
  bool semantic = false;
  for (const auto& s : r.spans) {
    if (s.layer == SpanLayer::Semantic && s.start <= region && s.end >= cps(want)) semantic = true;
  }
  expect(semantic, "'ait soixante-cinq ans' is not inside a SEMANTIC span");
  expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  std::ostringstream os;
  os << secs * 1000 << " ms";
  return os.str();
}

std::string c2() {
  const std::string en = "John is sixty-five years old", fr = "John a soixante-cinq ans";
  auto a = demo().translate(en, "eng", "fra");
  expect(a.target == fr, "eng->fra gave '" + a.target + "'");
  expect(fully(a.spans, cps(fr), SpanLayer::Semantic) && fully(a.source_spans, cps(en), SpanLayer::Semantic),
         "eng->fra not fully SEMANTIC");
  auto b = demo().translate(fr, "fra", "eng");
  expect(b.target == en, "fra->eng gave '" + b.target + "'");
  expect(fully(b.spans, cps(en), SpanLayer::Semantic) && fully(b.source_spans, cps(fr), SpanLayer::Semantic),
         "fra->eng not fully SEMANTIC");
  auto q = read_tree(R"((UseCNL (questS (quest (aged John (mkNumeral "65"))))))");
  auto qs = demo().linearize_text(q, "eng");
  expect(qs == "is John sixty-five years old?", "quest gave '" + qs + "'");
  return "both directions, quest: " + qs;
}

std::string c3() {
  int n = 0;
  for (const auto& e : testsupport::demo_pack().corpora.at("cnl")) {
    auto r = demo().parse(e.text, e.lang, 1);
    expect(!r.trees.empty() && r.trees[0].tree.fun == "UseCNL", e.lang + " '" + e.text + "' is not UseCNL-rooted");
    ++n;
  }
  expect(n >= 30, "suite has only " + std::to_string(n) + " sentences");
  return std::to_string(n) + "/" + std::to_string(n) + " UseCNL-rooted";
}

std::string c4() {
  auto p = demo().parse("this old city", "eng", 50);
  expect(!p.trees.empty(), "no parse");
  const auto& best = p.trees[0].tree;
  expect(best.fun == "UseChunks" && best.children[0].fun == "OneChunk" && best.children[0].children[0].fun == "ChunkNP",
         "rank-1 is " + serialize_tree(best));
  const std::string three =
      "(UseChunks (ConsChunk (ChunkDet this_Det) (ConsChunk (ChunkAP (mkAP old_A)) (OneChunk (ChunkN city_N)))))";
  for (const auto& t : p.trees) {
    if (serialize_tree(t.tree) == three) {
      expect(t.cost > p.trees[0].cost, "3-chunk analysis not costlier");
      std::ostringstream os;
      os << "ChunkNP " << p.trees[0].cost << " < 3 chunks " << t.cost;
      return os.str();
    }
  }
  throw Failed{"3-chunk analysis missing from the 50-best list"};
}

// Every literal token of the compiled grammar, inflected forms included.
std::vector<std::string> lexicon(const std::string& lang) {
  std::set<std::string> words;
  for (const auto& p : demo().parsing_grammar(lang).productions()) {
    for (const auto& comp : p.components) {
      for (const auto& item : comp) {
        if (!item.is_arg()) words.insert(item.token);
      }
    }
  }
  return {words.begin(), words.end()};
}

std::string fuzz_text(std::mt19937& rng, const std::vector<std::string>& lex, std::size_t max_len) {
  static const std::vector<std::string> oov = {"Kraslava", "blorks", "walked", "zyx", "Quuxton", "florped"};
  static const std::vector<std::string> junk = {"@@@", "#", "%%", "42", "1999", "&", "~~", "--", "'", "7a"};
  std::string text;
  auto n = 1 + rng() % max_len;
  for (std::size_t i = 0; i < n; ++i) {
    auto roll = rng() % 10;
    const auto& pool = roll < 6 ? lex : roll < 8 ? oov : junk;
    text += (i ? " " : "") + pool[rng() % pool.size()];
  }
  return text;
}

std::string c5() {
  std::mt19937 rng(5005);
  auto en = lexicon("eng"), fr = lexicon("fra");
  int parsed = 0;
  for (int i = 0; i < 1000; ++i) {
    bool eng = rng() % 2;
    auto text = fuzz_text(rng, eng ? en : fr, 15);
    auto lang = eng ? "eng" : "fra";
    try {
      auto r = demo().parse(text, lang, 1);
      expect(!r.trees.empty(), std::string(lang) + " '" + text + "' has no parse");
    } catch (const Error& e) {
      throw Failed{std::string(lang) + " '" + text + "': " + e.what()};
    }
    ++parsed;
  }
  return std::to_string(parsed) + "/1000 parsed";
}

std::string c6() {
  const auto& sig = demo().grammar().signature;
  testsupport::TreeGen gen(sig, testsupport::no_guessers, testsupport::demo_leaf);
  std::mt19937 rng(6006);
  std::size_t worst_k = 0;
  for (int i = 0; i < 200; ++i) {
    auto lang = i % 2 ? "fra" : "eng";
    auto t = gen.gen(sig.start(), 7, rng);
    auto text = demo().linearize_text(t, lang);
    bool found = false;
    for (std::size_t k : {10, 100, 1000}) {
      auto r = demo().parse(text, lang, k);
      for (const auto& p : r.trees) found = found || p.tree == t;
      if (found) {
        worst_k = std::max(worst_k, k);
        break;
      }
    }
    expect(found, std::string(lang) + " '" + text + "' does not recover " + serialize_tree(t));
  }
  for (const auto& e : testsupport::demo_pack().corpora.at("cnl")) {
    auto r = demo().parse(e.text, e.lang, 1);
    expect(!r.trees.empty() && serialize_tree(r.trees[0].tree) == e.expected, "CNL rank-1 differs for '" + e.text + "'");
  }
  return "200/200 trees recovered (k <= " + std::to_string(worst_k) + "), CNL rank-1 exact";
}

std::string c7() {
  std::mt19937 rng(7007);
  int inputs = 0, nonempty = 0;
  for (int i = 0; i < 200; ++i) {
    auto g = oracle::random_grammar(rng);
    auto pg = compile(g.sig, g.conc);
    for (int j = 0; j < 3; ++j) {
      auto in = oracle::random_input(g, rng);
      auto want = oracle::enumerate(g, in);
      auto got = parse(pg, in, "C0", {.k = 2000});
      bool same = got.trees.size() == want.size();
      for (std::size_t n = 0; same && n < want.size(); ++n) {
        same = serialize_tree(got.trees[n].tree) == want[n].first &&
               rank_key(got.trees[n].cost, got.trees[n].tree).first == rank_key(want[n].second, got.trees[n].tree).first;
      }
      expect(same, "mismatch on grammar\n" + g.abstract_src + g.concrete_src);
      ++inputs;
      nonempty += !want.empty();
    }
  }
  return "200 grammars, " + std::to_string(inputs) + " inputs (" + std::to_string(nonempty) + " with parses) match";
}

std::string cycle_path(const LayeredGrammar& lg, const std::vector<std::pair<std::string, std::string>>& pairs) {
  try {
    add_coercions(lg, pairs);
  } catch (const Error& e) {
    expect(e.kind() == ErrorKind::CoercionCycle, std::string("wrong error: ") + e.what());
    return e.diagnostics().at(0).where;
  }
  throw Failed{"cycle accepted"};
}

std::string c8() {
  const auto& lg = demo().grammar();
  // the demo already has NP -> Person and Fact -> Cl
  auto two = cycle_path(lg, {{"Person", "NP"}});
  expect(two == "NP -> Person -> NP", "2-cycle reported as '" + two + "'");
  auto three = cycle_path(lg, {{"Cl", "VP"}, {"VP", "Fact"}});
  expect(three == "Cl -> VP -> Fact -> Cl", "3-cycle reported as '" + three + "'");
  expect(find_cycle({{"A", "B"}, {"B", "C"}, {"A", "C"}}).empty(), "DAG reported as cyclic");
  expect(lg.coercion_edges.size() == 2, "demo coercions not accepted");
  return "'" + two + "', '" + three + "'; acyclic demo accepted";
}

std::string c9() {
  std::mt19937 rng(9009);
  auto en = lexicon("eng"), fr = lexicon("fra");
  for (int i = 0; i < 500; ++i) {
    bool eng = rng() % 2;
    auto src = eng ? "eng" : "fra", tgt = eng ? "fra" : "eng";
    auto r = demo().translate(fuzz_text(rng, eng ? en : fr, 12), src, tgt, 1);
    auto why = testsupport::partition_error(r.target, r.spans);
    expect(why.empty(), "target '" + r.target + "': " + why);
    why = testsupport::partition_error(r.source, r.source_spans);
    expect(why.empty(), "source '" + r.source + "': " + why);
    auto tree = read_tree(r.tree);
    auto toks = demo().linearize(tree, tgt);
    auto layers = token_layers(demo().grammar(), tree, toks);
    expect(layers.size() == toks.size(), "token without exactly one layer in '" + r.target + "'");
  }
  return "500/500 partitions";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"flagship translation", c1}, {"CNL rules", c2},          {"CNL priority", c3},
      {"chunk preference", c4},     {"robust totality", c5},    {"reversibility", c6},
      {"oracle equivalence", c7},   {"coercion acyclicity", c8}, {"span partition", c9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string verdict, detail;
    try {
      detail = criteria[i].second();
      verdict = "PASS";
    } catch (const Failed& f) {
      verdict = "FAIL";
      detail = f.why;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("exception: ") + e.what();
    }
    failures += verdict == "FAIL";
    std::printf("%s %zu %s: %s\n", verdict.c_str(), i + 1, criteria[i].first.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
