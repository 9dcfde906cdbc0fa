#include <random>

#include "doctest.h"
#include "lcnl/api.hpp"
#include "support.hpp"

using namespace lcnl;
using testsupport::demo;

namespace {

std::vector<ConfidenceSpan> spans(std::initializer_list<std::tuple<int, int, SpanLayer>> xs) {
  std::vector<ConfidenceSpan> out;
  for (auto [s, e, l] : xs) out.push_back({s, e, l});
  return out;
}

constexpr auto SEM = SpanLayer::Semantic;
constexpr auto SYN = SpanLayer::Syntactic;
constexpr auto WORD = SpanLayer::Word;
constexpr auto UNK = SpanLayer::Unknown;

void check_partition(const std::string& text, const std::vector<ConfidenceSpan>& ss) {
  auto why = testsupport::partition_error(text, ss);
  CHECK_MESSAGE(why.empty(), text, ": ", why);
}

}  // namespace

TEST_CASE("flagship translation") {
  auto r = demo().translate("John does not believe that the queen is sixty-five years old", "eng", "fra");
  CHECK(r.target == "John ne croit pas que la reine ait soixante-cinq ans");
  CHECK(r.tree.find(R"((fact2cl (aged (np2person (mkNP the_Det queen_N)) (mkNumeral "65"))))") != std::string::npos);
  CHECK(r.spans == spans({{0, 21, SYN}, {22, 52, SEM}}));
  CHECK(r.source_spans == spans({{0, 26, SYN}, {27, 60, SEM}}));
  CHECK(r.chunk_boundaries.empty());
  CHECK(r.alternatives.size() == 4);
}

TEST_CASE("CNL facts and questions") {
  auto r = demo().translate("John is sixty-five years old", "eng", "fra");
  CHECK(r.target == "John a soixante-cinq ans");
  CHECK(r.spans == spans({{0, 24, SEM}}));
  r = demo().translate("John a soixante-cinq ans", "fra", "eng");
  CHECK(r.target == "John is sixty-five years old");
  CHECK(r.source_spans == spans({{0, 24, SEM}}));
  r = demo().translate("est-ce que John a soixante-cinq ans?", "fra", "eng");
  CHECK(r.target == "is John sixty-five years old?");
  CHECK(r.tree.rfind("(UseCNL (questS (quest", 0) == 0);
}

TEST_CASE("digits copied from a literal are word level") {
  auto r = demo().translate("John is 70 years old", "eng", "fra");
  CHECK(r.target == "John a 70 ans");
  CHECK(r.spans == spans({{0, 6, SEM}, {7, 9, WORD}, {10, 13, SEM}}));
}

TEST_CASE("chunks and unknown words") {
  auto r = demo().translate("@@@ city", "eng", "fra");
  CHECK(r.target == "@@@ ville");
  CHECK(r.spans == spans({{0, 3, UNK}, {4, 9, WORD}}));
  CHECK(r.chunk_boundaries == std::vector<CharSpan>{{0, 3}, {4, 8}});
  auto a = demo().annotate_source("this old city", "eng");
  CHECK(a.spans == spans({{0, 13, WORD}}));
  CHECK(a.chunk_boundaries == std::vector<CharSpan>{{0, 13}});
  CHECK(a.cost == doctest::Approx(16.0));
}

TEST_CASE("chunk preference") {
  auto p = demo().parse("this old city", "eng", 50);
  REQUIRE_FALSE(p.trees.empty());
  CHECK(serialize_tree(p.trees[0].tree) == "(UseChunks (OneChunk (ChunkNP (mkNP this_Det (modN (mkAP old_A) city_N)))))");
  const std::string three = "(UseChunks (ConsChunk (ChunkDet this_Det) (ConsChunk (ChunkAP (mkAP old_A)) (OneChunk (ChunkN city_N)))))";
  bool found = false;
  for (const auto& t : p.trees) {
    if (serialize_tree(t.tree) == three) {
      found = true;
      CHECK(t.cost > p.trees[0].cost);
    }
  }
  CHECK(found);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(demo().translate("John", "deu", "fra"), Error);
  try {
    demo().translate("John sleeps", "eng", "xx");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownLanguage);
  }
  auto strict = load_pack(LCNL_DEMO_PACK, {.chunks = false});
  Translator t(strict.grammar);
  CHECK(t.translate("John sleeps", "eng", "fra").target == "John dort");
  try {
    t.translate("@@@ city", "eng", "fra");
    FAIL("expected NoParse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoParse);
  }
}

TEST_CASE("spans partition fuzzed translations") {
  std::mt19937 rng(21);
  const std::vector<std::string> words = {"John", "the", "queen", "is", "65", "sixty-five", "years", "old", "not",
                                          "believes", "that", "city", "@@@", "blorks", "Kraslava", "?", "la",
                                          "reine", "ville", "élégante", "a", "ans"};
  for (int i = 0; i < 80; ++i) {
    std::string text;
    int n = 1 + static_cast<int>(rng() % 10);
    for (int j = 0; j < n; ++j) text += (j ? " " : "") + words[rng() % words.size()];
    auto src = rng() % 2 ? "eng" : "fra";
    auto r = demo().translate(text, src, src == std::string("eng") ? "fra" : "eng", 3);
    check_partition(r.target, r.spans);
    check_partition(r.source, r.source_spans);
    for (std::size_t j = 1; j < r.spans.size(); ++j) CHECK(r.spans[j - 1].layer != r.spans[j].layer);
  }
}

TEST_CASE("translation is deterministic") {
  Translator other(testsupport::demo_pack().grammar);
  for (const char* text : {"John does not believe that the queen is sixty-five years old", "this old city",
                           "@@@ Kraslava blorks the", "Mary is one year old"}) {
    auto a = translation_json(demo().translate(text, "eng", "fra"), true);
    CHECK(a == translation_json(demo().translate(text, "eng", "fra"), true));
    CHECK(a == translation_json(other.translate(text, "eng", "fra"), true));
  }
}

TEST_CASE("CNL corpus round trips through French") {
  for (const auto& e : testsupport::demo_pack().corpora.at("cnl")) {
    if (e.lang != "eng") continue;
    auto fr = demo().translate(e.text, "eng", "fra");
    auto back = demo().translate(fr.target, "fra", "eng");
    CHECK(back.target == e.text);
    CHECK(back.tree == fr.tree);
  }
}
