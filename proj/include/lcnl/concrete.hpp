#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lcnl/ast.hpp"

namespace lcnl {

/// Finite parameter type, e.g. `param Number = Sg | Pl`.
struct ParamDecl {
  std::string name;
  std::vector<std::string> values;

  int index_of(std::string_view value) const;
  bool operator==(const ParamDecl&) const = default;
};

/// Type of a linearization: Str, a parameter, a record or a finite table.
/// Record fields are kept sorted by name, so field order in the source
/// never matters.
struct LinType {
  enum class Kind { Str, Param, Record, Table };

  Kind kind = Kind::Str;
  std::string param;                                    // Param value type, Table key
  std::vector<std::pair<std::string, LinType>> fields;  // Record
  std::vector<LinType> value;                           // Table: exactly one element

  static LinType str();
  static LinType param_type(std::string name);
  static LinType record(std::vector<std::pair<std::string, LinType>> fields);
  static LinType table(std::string key, LinType value);

  const LinType* field(std::string_view name) const;
  std::string str_repr() const;
  bool operator==(const LinType&) const = default;
};

struct LinExpr;
using LinExprPtr = std::shared_ptr<const LinExpr>;

/// Linearization expression. One node type; `kind` says which members apply.
struct LinExpr {
  enum class Kind {
    StrLit,     // tokens
    Concat,     // children[0] ++ children[1]
    Arg,        // arg (index into the rule's argument list), name = variable
    Project,    // children[0] . name
    Select,     // children[0] ! children[1]
    TableLit,   // labels[i] => children[i]
    ParamLit,   // name
    RecordLit,  // labels[i] = children[i]
    Lookup,     // lookup arg { labels[i] => children[i] } else children.back()
  };

  Kind kind = Kind::StrLit;
  std::vector<std::string> tokens;
  int arg = -1;
  std::string name;
  std::vector<LinExprPtr> children;
  std::vector<std::string> labels;

  static LinExprPtr str(std::vector<std::string> tokens);
  static LinExprPtr concat(LinExprPtr a, LinExprPtr b);
  static LinExprPtr arg_ref(int index, std::string var);
  static LinExprPtr project(LinExprPtr e, std::string field);
  static LinExprPtr select(LinExprPtr table, LinExprPtr key);
  static LinExprPtr param(std::string value);
  static LinExprPtr record(std::vector<std::pair<std::string, LinExprPtr>> fields);
  static LinExprPtr table(std::vector<std::pair<std::string, LinExprPtr>> branches);
};

/// Splits a string literal on whitespace into tokens.
std::vector<std::string> literal_tokens(std::string_view text);

struct LinRule {
  std::string fun;
  std::vector<std::string> vars;
  LinExprPtr body;
};

/// Which out-of-vocabulary tokens a one-argument String function accepts
/// during parsing.
enum class GuessKind { Name, Suffix, Digits, Any };

struct GuessRule {
  std::string fun;
  GuessKind kind = GuessKind::Any;
  std::vector<std::string> suffixes;
};

/// One language's concrete syntax for a signature.
class ConcreteGrammar {
 public:
  ConcreteGrammar() = default;
  ConcreteGrammar(std::string name, std::string abstract_name);

  const std::string& name() const { return name_; }
  const std::string& abstract_name() const { return abstract_name_; }

  /// Throws DuplicateName when the parameter or one of its values exists.
  void add_param(ParamDecl p);
  void set_lincat(const std::string& cat, LinType type);
  void set_linrule(LinRule rule);
  void set_guess(GuessRule rule);

  const std::map<std::string, ParamDecl, std::less<>>& params() const { return params_; }
  const std::map<std::string, LinType, std::less<>>& lincats() const { return lincats_; }
  const std::map<std::string, LinRule, std::less<>>& linrules() const { return linrules_; }
  const std::map<std::string, GuessRule, std::less<>>& guesses() const { return guesses_; }

  const ParamDecl* param(std::string_view name) const;
  /// The parameter type a value belongs to, or nullptr.
  const ParamDecl* param_of_value(std::string_view value) const;
  const LinType* lincat(std::string_view cat) const;
  const LinRule* linrule(std::string_view fun) const;
  const GuessRule* guess(std::string_view fun) const;

  /// Lincat of an argument position; the built-in String is Str.
  LinType arg_type(std::string_view cat) const;

 private:
  std::string name_;
  std::string abstract_name_;
  std::map<std::string, ParamDecl, std::less<>> params_;
  std::map<std::string, std::string, std::less<>> value_owner_;
  std::map<std::string, LinType, std::less<>> lincats_;
  std::map<std::string, LinRule, std::less<>> linrules_;
  std::map<std::string, GuessRule, std::less<>> guesses_;
};

/// Type of `expr` in the context of function `fun`, or nullopt after
/// appending findings to `diags`.
std::optional<LinType> infer_type(const LinExpr& expr, const FunDecl& fun,
                                  const ConcreteGrammar& conc, std::vector<Diagnostic>& diags);

/// Checks one linrule against its declaration.
std::vector<Diagnostic> check_linrule(const LinRule& rule, const FunDecl& fun,
                                      const ConcreteGrammar& conc);

/// Totality and typing of `conc` over `sig`. Returns every failure found.
std::vector<Diagnostic> validate_concrete(const ConcreteGrammar& conc, const Signature& sig);

}  // namespace lcnl
