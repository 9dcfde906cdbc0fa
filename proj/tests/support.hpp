#pragma once

#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "lcnl/pack.hpp"
#include "lcnl/translator.hpp"

namespace testsupport {

inline const lcnl::GrammarPack& demo_pack() {
  static const lcnl::GrammarPack pack = lcnl::load_pack(LCNL_DEMO_PACK);
  return pack;
}

inline const lcnl::Translator& demo() {
  static const lcnl::Translator t(demo_pack().grammar);
  return t;
}

/// Random well-typed trees. `allow` filters functions; `leaf` supplies the
/// text of String arguments.
class TreeGen {
 public:
  using Allow = std::function<bool(const lcnl::FunDecl&)>;
  using Leaf = std::function<std::string(const lcnl::FunDecl&, std::mt19937&)>;

  TreeGen(const lcnl::Signature& sig, Allow allow, Leaf leaf)
      : sig_(sig), allow_(std::move(allow)), leaf_(std::move(leaf)) {
    const int inf = std::numeric_limits<int>::max() / 2;
    for (const auto& c : sig_.categories()) depth_[c] = inf;
    depth_[std::string(lcnl::kStringCat)] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [name, f] : sig_.functions()) {
        if (!allow_(f)) continue;
        int d = 0;
        for (const auto& a : f.args) d = std::max(d, depth_[a]);
        if (d >= inf) continue;
        if (d + 1 < depth_[f.result]) {
          depth_[f.result] = d + 1;
          changed = true;
        }
      }
    }
  }

  bool reachable(const std::string& cat) const { return depth_.at(cat) < std::numeric_limits<int>::max() / 2; }

  lcnl::Tree gen(const std::string& cat, int budget, std::mt19937& rng) const {
    std::vector<const lcnl::FunDecl*> options;
    for (const auto* f : sig_.producers(cat)) {
      if (!allow_(*f)) continue;
      int d = 0;
      for (const auto& a : f->args) d = std::max(d, depth_.at(a));
      if (d + 1 <= std::max(budget, depth_.at(cat))) options.push_back(f);
    }
    const auto* f = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    lcnl::Tree t = lcnl::Tree::app(f->name);
    for (const auto& a : f->args) {
      if (a == lcnl::kStringCat) {
        t.children.push_back(lcnl::Tree::literal(leaf_(*f, rng)));
      } else {
        t.children.push_back(gen(a, budget - 1, rng));
      }
    }
    return t;
  }

 private:
  const lcnl::Signature& sig_;
  Allow allow_;
  Leaf leaf_;
  std::map<std::string, int> depth_;
};

/// Leaves for the demo grammar: numerals inside and outside the word table,
/// and a fixed out-of-vocabulary word per guesser.
inline std::string demo_leaf(const lcnl::FunDecl& f, std::mt19937& rng) {
  if (f.name == "mkNumeral") return std::to_string(std::uniform_int_distribution<int>(1, 90)(rng));
  if (f.name == "nameNP") return "Kraslava";
  if (f.name == "guessPlN") return "blorks";
  if (f.name == "guessV") return "walked";
  return "@@@";
}

/// Why `spans` fail to partition the non-space code points of `text` into
/// ordered, disjoint, non-empty, space-trimmed spans; empty when they do.
inline std::string partition_error(const std::string& text, const std::vector<lcnl::ConfidenceSpan>& spans) {
  std::vector<bool> space;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) space.push_back(text[i] == ' ');
  }
  std::vector<int> covered(space.size(), 0);
  int prev_end = 0;
  for (const auto& s : spans) {
    if (s.start >= s.end) return "empty span at " + std::to_string(s.start);
    if (s.start < prev_end) return "span at " + std::to_string(s.start) + " overlaps or is out of order";
    if (s.end > static_cast<int>(space.size())) return "span past the end";
    if (space[static_cast<std::size_t>(s.start)] || space[static_cast<std::size_t>(s.end - 1)]) return "span edge on a space";
    for (int i = s.start; i < s.end; ++i) ++covered[static_cast<std::size_t>(i)];
    prev_end = s.end;
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!space[i] && covered[i] != 1) return "code point " + std::to_string(i) + " not covered";
  }
  return "";
}

/// Functions that can be recovered from their own surface text: everything
/// but the guessers, whose acceptance depends on sentence position.
inline bool no_guessers(const lcnl::FunDecl& f) {
  for (const auto& a : f.args) {
    if (a == lcnl::kStringCat) return f.name == "mkNumeral";
  }
  return true;
}

}  // namespace testsupport
