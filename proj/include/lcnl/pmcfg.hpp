#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lcnl/ast.hpp"
#include "lcnl/concrete.hpp"
#include "lcnl/linearizer.hpp"

namespace lcnl {

/// A category specialised to concrete values of its parameter fields.
struct PNonterminal {
  std::string category;
  std::vector<std::string> assignment;

  std::string str() const;
  auto operator<=>(const PNonterminal&) const = default;
};

/// One position on the right-hand side of a production.
struct RhsSlot {
  int nt = -1;                        // nonterminal id, -1 for a String argument
  std::optional<std::string> fixed;   // String argument bound to a lookup key
  bool is_string() const { return nt < 0; }
};

/// Specialised production. Each Str component of the left-hand side is a
/// sequence of literal tokens and references to argument components.
struct PProduction {
  int lhs = -1;
  std::string fun;
  std::vector<RhsSlot> rhs;
  std::vector<std::vector<Item>> components;
  double cost = 0.0;
  /// For an open String argument: lookup keys it must not take.
  std::vector<std::string> excluded;
  std::optional<GuessRule> guess;
};

/// Str and parameter leaves of a lincat, in canonical order.
struct CategoryLayout {
  std::vector<std::string> str_components;    // e.g. "s!PPos!Decl"
  std::vector<std::string> param_components;  // e.g. "n"
  std::vector<std::string> param_types;
  int start_component = -1;                   // index of `s` (or the whole Str)
};

class ParsingGrammar {
 public:
  const Signature& signature() const { return sig_; }
  const ConcreteGrammar& concrete() const { return conc_; }

  const std::vector<PNonterminal>& nonterminals() const { return nts_; }
  const std::vector<PProduction>& productions() const { return prods_; }
  const std::vector<int>& productions_of(int nt) const { return by_lhs_[static_cast<std::size_t>(nt)]; }
  std::optional<int> find_nonterminal(const PNonterminal& nt) const;
  std::vector<int> nonterminals_of(std::string_view category) const;
  const CategoryLayout& layout(std::string_view category) const;

  /// Minimal token length of component `comp` over all derivations of `nt`.
  int min_length(int nt, int comp) const;
  bool is_literal(std::string_view token) const { return literals_.contains(token); }
  std::size_t production_count() const { return prods_.size(); }

 private:
  friend ParsingGrammar compile(const Signature&, const ConcreteGrammar&, std::size_t);

  int intern(PNonterminal nt);

  Signature sig_;
  ConcreteGrammar conc_;
  std::vector<PNonterminal> nts_;
  std::map<PNonterminal, int> nt_index_;
  std::map<std::string, CategoryLayout, std::less<>> layouts_;
  std::vector<PProduction> prods_;
  std::vector<std::vector<int>> by_lhs_;
  std::vector<std::vector<int>> min_len_;
  std::set<std::string, std::less<>> literals_;
};

inline constexpr std::size_t kDefaultInstantiationCap = 100000;

/// Specialises every linrule over all parameter assignments of its
/// arguments. Throws ParamExplosion past `cap` instantiations.
ParsingGrammar compile(const Signature& sig, const ConcreteGrammar& conc,
                       std::size_t cap = kDefaultInstantiationCap);

/// Derives the start component of `tree` by replaying productions. Returns
/// nullopt if some node has no matching production.
std::optional<std::vector<std::string>> replay(const ParsingGrammar& pg, const Tree& tree);

/// Whitespace split with trailing `.?!,` separated into their own tokens.
std::vector<std::string> tokenize(std::string_view text);

struct TokenOffset {
  std::string token;
  int start = 0;  // code points
  int end = 0;
};
std::vector<TokenOffset> tokenize_with_offsets(std::string_view text);

/// Whether the open String slot of `prod` accepts `token` at `position`.
bool guess_accepts(const ParsingGrammar& pg, const PProduction& prod, std::string_view token,
                   std::size_t position);

struct Hypothesis {
  PNonterminal nonterminal;
  std::string fun;
  double cost = 0.0;
};

/// Lexical hypotheses for a token: proper names, suffix guesses and the
/// unknown-word fallback, as declared by the grammar's guess rules.
std::vector<Hypothesis> oov_hypotheses(const ParsingGrammar& pg, std::string_view token,
                                       bool sentence_initial);

struct ParsedTree {
  Tree tree;
  double cost = 0.0;
};

struct ChartStats {
  std::size_t goals = 0;
  std::size_t edges = 0;
  std::size_t pops = 0;
};

struct ParseResult {
  std::vector<ParsedTree> trees;
  ChartStats stats;
};

struct ParseOptions {
  std::size_t k = 5;
  std::size_t max_pops = 2'000'000;
};

/// Ranking key shared by the parser and its tests: cost in micro-units, then
/// the canonical serialisation.
std::pair<long long, std::string> rank_key(double cost, const Tree& tree);

/// k-best complete analyses of `tokens` rooted in `start`, cost ascending,
/// ties broken by serialisation.
ParseResult parse(const ParsingGrammar& pg, const std::vector<std::string>& tokens,
                  std::string_view start, const ParseOptions& options = {});

}  // namespace lcnl
