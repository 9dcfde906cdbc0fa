#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcnl/ast.hpp"
#include "lcnl/concrete.hpp"

namespace lcnl {

/// Element of a Str value. During linearization `token` is a surface token
/// and `path` the node that produced it. During grammar compilation an item
/// may instead stand for component `comp` of argument `arg`.
struct Item {
  std::string token;
  Path path;
  int arg = -1;
  int comp = -1;

  bool is_arg() const { return arg >= 0; }
  bool operator==(const Item&) const = default;
};

/// Value of a linearization; its shape mirrors a LinType.
struct LinValue {
  enum class Kind { Str, Param, Record, Table };

  Kind kind = Kind::Str;
  std::vector<Item> items;                               // Str
  std::string value;                                     // Param
  std::vector<std::pair<std::string, LinValue>> fields;  // Record, sorted by name
  std::string param;                                     // Table key type
  std::vector<LinValue> cells;                           // Table, in value order

  const LinValue* field(std::string_view name) const;
  bool operator==(const LinValue&) const = default;
};

/// Evaluation context of one rule application.
struct EvalEnv {
  const ConcreteGrammar& conc;
  std::vector<const LinValue*> args;
  /// Literal text of String arguments; nullopt for other arguments and for
  /// String arguments left open during compilation.
  std::vector<std::optional<std::string>> keys;
  /// Attribution for literals emitted by the rule.
  Path path;
};

/// Evaluates one expression. Inputs are assumed validated.
LinValue evaluate(const LinExpr& expr, const EvalEnv& env);

/// Bottom-up evaluation of every linrule in the tree.
LinValue eval_lin(const TypedTree& tree, const ConcreteGrammar& conc);

struct ProvToken {
  std::string token;
  Path path;
  bool operator==(const ProvToken&) const = default;
};

/// The start field of a lincat: `s` of a record, or the whole Str.
/// Throws NoStartField.
const LinValue& start_field(const LinValue& v, const std::string& category);

std::vector<ProvToken> linearize(const TypedTree& tree, const ConcreteGrammar& conc);
std::vector<std::string> linearize_tokens(const TypedTree& tree, const ConcreteGrammar& conc);

struct CharSpan {
  int start = 0;
  int end = 0;
  bool operator==(const CharSpan&) const = default;
};

struct Detokenized {
  std::string text;
  std::vector<CharSpan> spans;  // one per input token, in code points
};

bool is_punctuation_token(std::string_view token);
/// Number of code points in a UTF-8 string.
int utf8_length(std::string_view s);

Detokenized detokenize(const std::vector<ProvToken>& tokens);
Detokenized detokenize(const std::vector<std::string>& tokens);

}  // namespace lcnl
