#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lcnl {

enum class ErrorKind {
  // tree typing
  UnknownFunction,
  ArityMismatch,
  CategoryMismatch,
  // grammar sources
  SyntaxError,
  DuplicateName,
  UnknownCategory,
  NegativeCost,
  MissingLincat,
  MissingLinRule,
  LinTypeError,
  // linearization / compilation
  NoStartField,
  ParamExplosion,
  // embedding
  LincatClash,
  NameClash,
  InvalidCostPolicy,
  CoercionCycle,
  LincatIncompatible,
  // runtime
  UnknownLanguage,
  NoParse,
  PackError,
};

std::string_view to_string(ErrorKind kind);

/// One finding. `where` is a locator whose meaning depends on the kind
/// (a tree path, "file:line:col", a function name, ...).
struct Diagnostic {
  ErrorKind kind;
  std::string where;
  std::string message;

  std::string str() const;
};

/// The single exception type thrown by the library. Validation-style
/// operations attach every finding, not only the first one.
class Error : public std::runtime_error {
 public:
  explicit Error(Diagnostic d);
  explicit Error(std::vector<Diagnostic> ds);
  Error(ErrorKind kind, std::string where, std::string message);

  ErrorKind kind() const { return diags_.front().kind; }
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

}  // namespace lcnl
