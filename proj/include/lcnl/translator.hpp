#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcnl/embedding.hpp"
#include "lcnl/pmcfg.hpp"

namespace lcnl {

enum class SpanLayer { Semantic, Syntactic, Word, Unknown };

std::string_view to_string(SpanLayer layer);

struct ConfidenceSpan {
  int start = 0;  // code points
  int end = 0;
  SpanLayer layer = SpanLayer::Word;
  bool operator==(const ConfidenceSpan&) const = default;
};

struct Alternative {
  std::string target;
  double cost = 0.0;
  std::string tree;
};

struct TranslationResult {
  std::string source;
  std::string target;
  std::string tree;
  double cost = 0.0;
  std::vector<ConfidenceSpan> spans;
  std::vector<ConfidenceSpan> source_spans;
  std::vector<CharSpan> chunk_boundaries;
  std::vector<Alternative> alternatives;
};

struct SourceAnnotation {
  std::vector<ConfidenceSpan> spans;
  std::vector<CharSpan> chunk_boundaries;
  std::string tree;
  double cost = 0.0;
};

/// Layer of every token of a linearization: the tag of the nearest
/// non-neutral node on its path, Word for text copied from a String leaf,
/// or Unknown below an unknown-word node.
std::vector<SpanLayer> token_layers(const LayeredGrammar& lg, const Tree& tree,
                                    const std::vector<ProvToken>& tokens);

/// Adjacent tokens of one layer merged into a single span.
std::vector<ConfidenceSpan> merge_spans(const std::vector<CharSpan>& token_spans,
                                        const std::vector<SpanLayer>& layers);

/// Owns a layered grammar and one compiled parsing grammar per language.
/// Immutable after construction; all methods are safe to call concurrently.
class Translator {
 public:
  explicit Translator(LayeredGrammar lg);

  const LayeredGrammar& grammar() const { return lg_; }
  const ParsingGrammar& parsing_grammar(const std::string& lang) const;
  std::vector<std::string> languages() const { return lg_.languages(); }

  /// k-best analyses rooted in the layered start category.
  ParseResult parse(const std::string& text, const std::string& lang, std::size_t k = 5) const;

  std::vector<ProvToken> linearize(const Tree& tree, const std::string& lang) const;
  std::string linearize_text(const Tree& tree, const std::string& lang) const;

  TranslationResult translate(const std::string& text, const std::string& src, const std::string& tgt,
                              std::size_t k = 5) const;
  SourceAnnotation annotate_source(const std::string& text, const std::string& src, std::size_t k = 1) const;

 private:
  const ConcreteGrammar& concrete(const std::string& lang) const;
  ParseResult parse_or_throw(const std::string& text, const std::string& lang, std::size_t k) const;
  SourceAnnotation annotate(const std::string& text, const std::string& lang, const ParsedTree& best) const;

  LayeredGrammar lg_;
  std::map<std::string, ParsingGrammar> compiled_;
};

}  // namespace lcnl
