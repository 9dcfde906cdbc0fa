#pragma once

// Small random grammars plus a brute-force derivation enumerator, used as an
// oracle for the k-best parser.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lcnl/grammar_lang.hpp"
#include "lcnl/linearizer.hpp"
#include "lcnl/pmcfg.hpp"
#include "support.hpp"

namespace oracle {

struct SmallGrammar {
  std::string abstract_src;
  std::string concrete_src;
  lcnl::Signature sig;
  lcnl::ConcreteGrammar conc;
};

inline const char* kVocab[] = {"a", "b", "c", "d"};

/// Three categories C0..C2 (start C0), at most 8 rules. Every rule uses each
/// argument exactly once in `s`, lexical rules emit at least one token, and
/// only C1/C2 -> C0 may be unary without consuming a token.
inline SmallGrammar random_grammar(std::mt19937& rng) {
  auto coin = [&](int pct) { return static_cast<int>(rng() % 100) < pct; };
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  const double costs[] = {0.0, 0.25, 0.5, 1.0, 2.0};
  auto cost = [&] { return costs[pick(5)]; };
  auto word = [&] { return std::string(kVocab[pick(4)]); };

  bool has_n[3];
  for (auto& h : has_n) h = coin(50);
  std::string abs = "abstract R { flags startcat = C0 ; cat C0 ; C1 ; C2 ;\n";
  std::string conc = "concrete RC of R { param P = P0 | P1 ;\n";
  for (int c = 0; c < 3; ++c) {
    conc += "  lincat C" + std::to_string(c) + (has_n[c] ? " = {s : Str ; n : P} ;\n" : " = {s : Str} ;\n");
  }
  auto n_field = [&](int result, const std::vector<std::pair<std::string, int>>& args) -> std::string {
    if (!has_n[result]) return "";
    for (const auto& [v, c] : args) {
      if (has_n[c] && coin(50)) return " ; n = " + v + ".n";
    }
    return coin(50) ? " ; n = P0" : " ; n = P1";
  };
  int rules = 4 + pick(5);
  for (int r = 0; r < rules; ++r) {
    std::string name = "f" + std::to_string(r);
    int result = r < 3 ? r : pick(3);
    int shape = r < 3 ? 0 : pick(3);  // 0 lexical, 1 binary, 2 unary
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", cost());
    std::string ann = std::string(" [cost=") + buf + "] ;\n";
    std::string res = "C" + std::to_string(result);
    if (shape == 0) {
      std::string s = "\"" + word() + (coin(30) ? " " + word() : "") + "\"";
      abs += "  fun " + name + " : " + res + ann;
      conc += "  lin " + name + " = {s = " + s + n_field(result, {}) + "} ;\n";
    } else if (shape == 1) {
      int a = pick(3), b = pick(3);
      abs += "  fun " + name + " : C" + std::to_string(a) + " -> C" + std::to_string(b) + " -> " + res + ann;
      std::string mid = coin(30) ? " ++ \"" + word() + "\"" : "";
      std::string xy = "x.s" + mid + " ++ y.s", yx = "y.s" + mid + " ++ x.s";
      std::string s;
      if (has_n[a] && coin(50)) {
        s = "table { P0 => " + xy + " ; P1 => " + yx + " } ! x.n";
      } else {
        s = coin(50) ? xy : yx;
      }
      conc += "  lin " + name + " x y = {s = " + s + n_field(result, {{"x", a}, {"y", b}}) + "} ;\n";
    } else {
      int a = pick(3);
      bool silent = result == 0 && a != 0 && coin(50);
      abs += "  fun " + name + " : C" + std::to_string(a) + " -> " + res + ann;
      std::string s = silent ? "x.s" : coin(50) ? "\"" + word() + "\" ++ x.s" : "x.s ++ \"" + word() + "\"";
      conc += "  lin " + name + " x = {s = " + s + n_field(result, {{"x", a}}) + "} ;\n";
    }
  }
  abs += "}\n";
  conc += "}\n";
  SmallGrammar g{abs, conc, lcnl::parse_abstract(abs), {}};
  g.conc = lcnl::parse_concrete(conc, g.sig);
  return g;
}

/// Every tree of the start category up to `max_depth` whose linearization is
/// exactly `input`, sorted by (cost, serialization).
inline std::vector<std::pair<std::string, double>> enumerate(const SmallGrammar& g,
                                                             const std::vector<std::string>& input,
                                                             int max_depth = 12) {
  std::set<std::string> vocab(input.begin(), input.end());
  std::map<std::string, std::vector<lcnl::Tree>> by_cat;
  std::set<std::string> seen;
  auto fits = [&](const lcnl::Tree& t, const std::string& cat) {
    auto v = lcnl::eval_lin(lcnl::TypedTree{t, cat}, g.conc);
    const auto& s = lcnl::start_field(v, cat);
    if (s.items.size() > input.size()) return false;
    return std::all_of(s.items.begin(), s.items.end(), [&](const lcnl::Item& i) { return vocab.contains(i.token); });
  };
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::map<std::string, std::vector<lcnl::Tree>> fresh;
    for (const auto& [name, f] : g.sig.functions()) {
      // all argument combinations from trees found so far
      std::vector<std::vector<lcnl::Tree>> combos{{}};
      for (const auto& a : f.args) {
        std::vector<std::vector<lcnl::Tree>> next;
        for (const auto& partial : combos) {
          for (const auto& t : by_cat[a]) {
            auto c = partial;
            c.push_back(t);
            next.push_back(std::move(c));
          }
        }
        combos = std::move(next);
      }
      for (auto& args : combos) {
        auto t = lcnl::Tree::app(name, std::move(args));
        auto key = lcnl::serialize_tree(t);
        if (seen.contains(key) || !fits(t, f.result)) continue;
        seen.insert(key);
        fresh[f.result].push_back(std::move(t));
      }
    }
    if (fresh.empty()) break;
    for (auto& [cat, ts] : fresh) {
      for (auto& t : ts) by_cat[cat].push_back(std::move(t));
    }
  }
  std::vector<std::pair<std::pair<long long, std::string>, double>> hits;
  for (const auto& t : by_cat["C0"]) {
    if (lcnl::linearize_tokens(lcnl::TypedTree{t, "C0"}, g.conc) != input) continue;
    double c = lcnl::tree_cost(t, g.sig);
    hits.push_back({lcnl::rank_key(c, t), c});
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [k, c] : hits) out.emplace_back(k.second, c);
  return out;
}

/// Input of at most five tokens: half the time the yield of a random tree,
/// otherwise random vocabulary.
inline std::vector<std::string> random_input(const SmallGrammar& g, std::mt19937& rng) {
  testsupport::TreeGen gen(
      g.sig, [](const lcnl::FunDecl&) { return true; },
      [](const lcnl::FunDecl&, std::mt19937&) { return std::string(); });
  if (rng() % 2 == 0 && gen.reachable("C0")) {
    for (int tries = 0; tries < 5; ++tries) {
      auto toks = lcnl::linearize_tokens(lcnl::TypedTree{gen.gen("C0", 4, rng), "C0"}, g.conc);
      if (!toks.empty() && toks.size() <= 5) return toks;
    }
  }
  std::vector<std::string> out(1 + rng() % 5);
  for (auto& t : out) t = kVocab[rng() % 4];
  return out;
}

}  // namespace oracle
