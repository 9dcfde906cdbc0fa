#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lcnl/error.hpp"

namespace lcnl {

/// Built-in argument type whose values are string-literal leaves.
inline constexpr std::string_view kStringCat = "String";

/// Confidence level attached to a function. Neutral inherits from the nearest
/// tagged ancestor.
enum class Layer { Semantic, Syntactic, Word, Neutral };

std::string_view to_string(Layer layer);
std::optional<Layer> parse_layer(std::string_view text);

bool is_identifier(std::string_view s);

struct FunDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  double cost = 1.0;
  Layer layer = Layer::Neutral;

  std::size_t arity() const { return args.size(); }
  bool operator==(const FunDecl&) const = default;
};

/// Categories and typed functions: the interlingua.
class Signature {
 public:
  Signature() = default;
  Signature(std::string name, std::string start_category);

  /// Throws DuplicateName on a repeated category.
  void add_category(const std::string& cat);
  /// Throws DuplicateName or NegativeCost. Category references are checked by
  /// validate() so declarations may arrive in any order.
  void add_function(FunDecl fun);
  /// Every referenced category declared and the start category present.
  std::vector<Diagnostic> check() const;
  void validate() const;

  const std::string& name() const { return name_; }
  const std::string& start() const { return start_; }
  void set_start(std::string cat) { start_ = std::move(cat); }

  bool has_category(std::string_view cat) const;
  const FunDecl* find(std::string_view fun) const;
  const FunDecl& at(std::string_view fun) const;

  const std::set<std::string, std::less<>>& categories() const { return categories_; }
  const std::map<std::string, FunDecl, std::less<>>& functions() const { return functions_; }
  /// Functions whose result is `cat`, in name order.
  std::vector<const FunDecl*> producers(std::string_view cat) const;

  bool operator==(const Signature&) const = default;

 private:
  std::string name_;
  std::string start_;
  std::set<std::string, std::less<>> categories_;
  std::map<std::string, FunDecl, std::less<>> functions_;
};

/// Function application term. A literal leaf carries its text in `fun`.
struct Tree {
  std::string fun;
  std::vector<Tree> children;
  bool is_literal = false;

  static Tree app(std::string fun, std::vector<Tree> children = {});
  static Tree literal(std::string text);

  std::size_t size() const;
  bool operator==(const Tree&) const = default;
};

/// Child indices from the root.
using Path = std::vector<int>;

std::string path_string(const Path& path);
const Tree& subtree(const Tree& tree, const Path& path);

/// A tree known to be well typed, together with its root category.
struct TypedTree {
  Tree tree;
  std::string category;
};

/// All typing failures of `tree`, empty when well typed.
std::vector<Diagnostic> type_errors(const Tree& tree, const Signature& sig);
/// Throws an Error listing every failure.
TypedTree check_tree(const Tree& tree, const Signature& sig);

double tree_cost(const Tree& tree, const Signature& sig);
inline double tree_cost(const TypedTree& tree, const Signature& sig) {
  return tree_cost(tree.tree, sig);
}

/// Fully parenthesised prefix form, e.g. `(aged John (mkNumeral "65"))`.
std::string serialize_tree(const Tree& tree);
/// Inverse of serialize_tree, without typing. Throws SyntaxError(offset).
Tree read_tree(std::string_view text);
/// read_tree followed by check_tree.
TypedTree parse_tree(std::string_view text, const Signature& sig);

}  // namespace lcnl
