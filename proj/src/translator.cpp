#include "lcnl/translator.hpp"

#include <algorithm>

namespace lcnl {

std::string_view to_string(SpanLayer layer) {
  switch (layer) {
    case SpanLayer::Semantic: return "SEMANTIC";
    case SpanLayer::Syntactic: return "SYNTACTIC";
    case SpanLayer::Word: return "WORD";
    case SpanLayer::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

SpanLayer from_tag(Layer l) {
  switch (l) {
    case Layer::Semantic: return SpanLayer::Semantic;
    case Layer::Syntactic: return SpanLayer::Syntactic;
    default: return SpanLayer::Word;
  }
}

bool is_unknown_fun(const std::string& fun) {
  return fun == kUnknownWordFun || fun == kChunkUnknownFun;
}

bool is_chunk_node(const LayeredGrammar& lg, const Tree& t) {
  if (t.is_literal) return false;
  auto it = lg.provenance.find(t.fun);
  if (it == lg.provenance.end()) return false;
  return it->second == Generator::Chunk || it->second == Generator::ChunkCnl ||
         it->second == Generator::ChunkUnknown;
}

bool has_prefix(const Path& path, const Path& prefix) {
  return path.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

void collect_chunks(const LayeredGrammar& lg, const Tree& t, Path& at, std::vector<Path>& out) {
  if (is_chunk_node(lg, t)) {
    out.push_back(at);
    return;
  }
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    at.push_back(static_cast<int>(i));
    collect_chunks(lg, t.children[i], at, out);
    at.pop_back();
  }
}

}  // namespace

std::vector<SpanLayer> token_layers(const LayeredGrammar& lg, const Tree& tree,
                                    const std::vector<ProvToken>& tokens) {
  std::vector<SpanLayer> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    std::optional<SpanLayer> layer;
    bool unknown = false;
    const Tree* node = &tree;
    for (std::size_t depth = 0;; ++depth) {
      if (!node->is_literal) {
        if (is_unknown_fun(node->fun)) unknown = true;
        if (const auto* f = lg.signature.find(node->fun); f && f->layer != Layer::Neutral) {
          layer = from_tag(f->layer);
        }
      }
      if (depth == tok.path.size()) {
        // text copied from a String leaf was guessed, not looked up
        if (node->is_literal) layer = SpanLayer::Word;
        break;
      }
      node = &node->children[static_cast<std::size_t>(tok.path[depth])];
    }
    out.push_back(unknown ? SpanLayer::Unknown : layer.value_or(SpanLayer::Word));
  }
  return out;
}

std::vector<ConfidenceSpan> merge_spans(const std::vector<CharSpan>& token_spans,
                                        const std::vector<SpanLayer>& layers) {
  std::vector<ConfidenceSpan> out;
  for (std::size_t i = 0; i < token_spans.size(); ++i) {
    if (!out.empty() && out.back().layer == layers[i]) {
      out.back().end = token_spans[i].end;
    } else {
      out.push_back({token_spans[i].start, token_spans[i].end, layers[i]});
    }
  }
  return out;
}

Translator::Translator(LayeredGrammar lg) : lg_(std::move(lg)) {
  for (const auto& [lang, conc] : lg_.concretes) compiled_.emplace(lang, compile(lg_.signature, conc));
}

const ParsingGrammar& Translator::parsing_grammar(const std::string& lang) const {
  auto it = compiled_.find(lang);
  if (it == compiled_.end()) throw Error(ErrorKind::UnknownLanguage, lang, "no concrete syntax for this language");
  return it->second;
}

const ConcreteGrammar& Translator::concrete(const std::string& lang) const {
  auto it = lg_.concretes.find(lang);
  if (it == lg_.concretes.end()) throw Error(ErrorKind::UnknownLanguage, lang, "no concrete syntax for this language");
  return it->second;
}

ParseResult Translator::parse(const std::string& text, const std::string& lang, std::size_t k) const {
  const auto& pg = parsing_grammar(lang);
  ParseOptions opt;
  opt.k = std::max<std::size_t>(k, 1);
  return lcnl::parse(pg, tokenize(text), lg_.signature.start(), opt);
}

ParseResult Translator::parse_or_throw(const std::string& text, const std::string& lang, std::size_t k) const {
  auto res = parse(text, lang, k);
  if (res.trees.empty()) throw Error(ErrorKind::NoParse, lang, "no analysis for input");
  return res;
}

std::vector<ProvToken> Translator::linearize(const Tree& tree, const std::string& lang) const {
  return lcnl::linearize(TypedTree{tree, lg_.signature.at(tree.fun).result}, concrete(lang));
}

std::string Translator::linearize_text(const Tree& tree, const std::string& lang) const {
  return detokenize(linearize(tree, lang)).text;
}

SourceAnnotation Translator::annotate(const std::string& text, const std::string& lang,
                                      const ParsedTree& best) const {
  SourceAnnotation out;
  out.tree = serialize_tree(best.tree);
  out.cost = best.cost;
  auto offsets = tokenize_with_offsets(text);
  auto toks = linearize(best.tree, lang);
  if (toks.size() != offsets.size()) {
    throw Error(ErrorKind::NoParse, lang, "analysis does not cover the input");
  }
  std::vector<CharSpan> spans;
  for (const auto& o : offsets) spans.push_back({o.start, o.end});
  out.spans = merge_spans(spans, token_layers(lg_, best.tree, toks));

  std::vector<Path> chunks;
  Path at;
  collect_chunks(lg_, best.tree, at, chunks);
  for (const auto& c : chunks) {
    std::optional<CharSpan> b;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (!has_prefix(toks[i].path, c)) continue;
      if (!b) b = spans[i];
      b->start = std::min(b->start, spans[i].start);
      b->end = std::max(b->end, spans[i].end);
    }
    if (b) out.chunk_boundaries.push_back(*b);
  }
  std::sort(out.chunk_boundaries.begin(), out.chunk_boundaries.end(),
            [](const CharSpan& a, const CharSpan& b) { return a.start < b.start; });
  return out;
}

SourceAnnotation Translator::annotate_source(const std::string& text, const std::string& src, std::size_t k) const {
  auto res = parse_or_throw(text, src, k);
  return annotate(text, src, res.trees.front());
}

TranslationResult Translator::translate(const std::string& text, const std::string& src, const std::string& tgt,
                                        std::size_t k) const {
  concrete(tgt);
  auto res = parse_or_throw(text, src, k);
  const auto& best = res.trees.front();

  TranslationResult out;
  out.source = text;
  auto toks = linearize(best.tree, tgt);
  auto surface = detokenize(toks);
  out.target = surface.text;
  out.spans = merge_spans(surface.spans, token_layers(lg_, best.tree, toks));

  auto ann = annotate(text, src, best);
  out.tree = ann.tree;
  out.cost = best.cost;
  out.source_spans = std::move(ann.spans);
  out.chunk_boundaries = std::move(ann.chunk_boundaries);
  for (std::size_t i = 1; i < res.trees.size(); ++i) {
    const auto& t = res.trees[i];
    out.alternatives.push_back({linearize_text(t.tree, tgt), t.cost, serialize_tree(t.tree)});
  }
  return out;
}

}  // namespace lcnl
