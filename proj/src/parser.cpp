#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <queue>

#include "lcnl/pmcfg.hpp"

namespace lcnl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-9;

using Span = std::pair<int, int>;
using Requirement = std::vector<std::pair<int, Span>>;  // component -> span, sorted

struct GoalKey {
  int nt;
  Requirement req;
  auto operator<=>(const GoalKey&) const = default;
};

struct Edge {
  int parent;
  int prod;
  std::vector<int> child;         // goal id per rhs slot, -1 for String slots
  std::vector<std::string> leaf;  // literal per String slot
  double cost;
};

struct Goal {
  GoalKey key;
  std::vector<int> edges;
  double best = kInf;
};

// Goal graph: which derivations of which nonterminal must yield which spans.
// Built top-down from the start goals, then solved bottom-up for best costs.
class Chart {
 public:
  Chart(const ParsingGrammar& pg, const std::vector<std::string>& tokens) : pg_(pg), toks_(tokens) {}

  int goal(GoalKey key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(goals_.size());
    index_.emplace(key, id);
    goals_.push_back(Goal{std::move(key), {}, kInf});
    queue_.push_back(id);
    return id;
  }

  void explore() {
    while (!queue_.empty()) {
      int g = queue_.front();
      queue_.pop_front();
      expand(g);
    }
  }

  void solve() {
    std::vector<int> remaining(edges_.size(), 0);
    std::vector<std::vector<int>> uses(goals_.size());
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      for (int c : edges_[e].child) {
        if (c < 0) continue;
        ++remaining[e];
        uses[static_cast<std::size_t>(c)].push_back(static_cast<int>(e));
      }
      if (remaining[e] == 0) pq.emplace(edges_[e].cost, edges_[e].parent);
    }
    std::vector<bool> done(goals_.size(), false);
    while (!pq.empty()) {
      auto [cost, g] = pq.top();
      pq.pop();
      if (done[static_cast<std::size_t>(g)]) continue;
      done[static_cast<std::size_t>(g)] = true;
      goals_[static_cast<std::size_t>(g)].best = cost;
      for (int e : uses[static_cast<std::size_t>(g)]) {
        if (--remaining[static_cast<std::size_t>(e)] != 0) continue;
        const auto& edge = edges_[static_cast<std::size_t>(e)];
        double total = edge.cost;
        for (int c : edge.child) {
          if (c >= 0) total += goals_[static_cast<std::size_t>(c)].best;
        }
        if (!done[static_cast<std::size_t>(edge.parent)]) pq.emplace(total, edge.parent);
      }
    }
  }

  const Goal& at(int g) const { return goals_[static_cast<std::size_t>(g)]; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::size_t goal_count() const { return goals_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

 private:
  struct MatchState {
    std::vector<Requirement> child_req;
    std::vector<std::optional<std::string>> leaf;
  };

  void expand(int g) {
    const GoalKey key = goals_[static_cast<std::size_t>(g)].key;
    for (int p : pg_.productions_of(key.nt)) {
      const auto& prod = pg_.productions()[static_cast<std::size_t>(p)];
      MatchState st;
      st.child_req.resize(prod.rhs.size());
      st.leaf.resize(prod.rhs.size());
      match_requirement(g, key, prod, p, 0, st);
    }
  }

  int item_min(const PProduction& prod, const Item& item) const {
    if (!item.is_arg()) return 1;
    const auto& slot = prod.rhs[static_cast<std::size_t>(item.arg)];
    if (slot.is_string()) return 1;
    return pg_.min_length(slot.nt, item.comp);
  }

  void match_requirement(int g, const GoalKey& key, const PProduction& prod, int p, std::size_t r,
                         MatchState& st) {
    if (r == key.req.size()) {
      finish(g, prod, p, st);
      return;
    }
    const auto& [comp, span] = key.req[r];
    const auto& items = prod.components[static_cast<std::size_t>(comp)];
    std::vector<int> suffix(items.size() + 1, 0);
    for (std::size_t i = items.size(); i-- > 0;) {
      int m = item_min(prod, items[i]);
      if (m == std::numeric_limits<int>::max() || suffix[i + 1] == std::numeric_limits<int>::max()) {
        suffix[i] = std::numeric_limits<int>::max();
      } else {
        suffix[i] = suffix[i + 1] + m;
      }
    }
    if (suffix[0] > span.second - span.first) return;
    match_items(g, key, prod, p, r, items, suffix, 0, span.first, span.second, st);
  }

  bool same_tokens(int a, int b, int len) const {
    for (int i = 0; i < len; ++i) {
      if (toks_[static_cast<std::size_t>(a + i)] != toks_[static_cast<std::size_t>(b + i)]) return false;
    }
    return true;
  }

  void match_items(int g, const GoalKey& key, const PProduction& prod, int p, std::size_t r,
                   const std::vector<Item>& items, const std::vector<int>& suffix, std::size_t i, int pos,
                   int end, MatchState& st) {
    if (i == items.size()) {
      if (pos == end) match_requirement(g, key, prod, p, r + 1, st);
      return;
    }
    if (suffix[i] > end - pos) return;
    const auto& item = items[i];
    if (!item.is_arg()) {
      if (toks_[static_cast<std::size_t>(pos)] == item.token) {
        match_items(g, key, prod, p, r, items, suffix, i + 1, pos + 1, end, st);
      }
      return;
    }
    auto a = static_cast<std::size_t>(item.arg);
    const auto& slot = prod.rhs[a];
    if (slot.is_string()) {
      const auto& tok = toks_[static_cast<std::size_t>(pos)];
      if (st.leaf[a]) {
        if (*st.leaf[a] == tok) match_items(g, key, prod, p, r, items, suffix, i + 1, pos + 1, end, st);
        return;
      }
      if (!guess_accepts(pg_, prod, tok, static_cast<std::size_t>(pos))) return;
      st.leaf[a] = tok;
      match_items(g, key, prod, p, r, items, suffix, i + 1, pos + 1, end, st);
      st.leaf[a].reset();
      return;
    }
    auto& req = st.child_req[a];
    for (const auto& [c, s] : req) {
      if (c != item.comp) continue;
      int len = s.second - s.first;
      if (pos + len <= end && same_tokens(s.first, pos, len)) {
        match_items(g, key, prod, p, r, items, suffix, i + 1, pos + len, end, st);
      }
      return;
    }
    int lo = pg_.min_length(slot.nt, item.comp);
    int hi = end - pos - suffix[i + 1];
    for (int len = lo; len <= hi; ++len) {
      req.emplace_back(item.comp, Span{pos, pos + len});
      match_items(g, key, prod, p, r, items, suffix, i + 1, pos + len, end, st);
      req.pop_back();
    }
  }

  void finish(int g, const PProduction& prod, int p, const MatchState& st) {
    Edge e{g, p, {}, {}, prod.cost};
    for (std::size_t i = 0; i < prod.rhs.size(); ++i) {
      const auto& slot = prod.rhs[i];
      if (slot.is_string()) {
        if (slot.fixed) e.leaf.push_back(*slot.fixed);
        else if (st.leaf[i]) e.leaf.push_back(*st.leaf[i]);
        else return;  // open literal not pinned by the input
        e.child.push_back(-1);
      } else {
        auto req = st.child_req[i];
        std::sort(req.begin(), req.end());
        e.child.push_back(goal(GoalKey{slot.nt, std::move(req)}));
      }
    }
    int id = static_cast<int>(edges_.size());
    edges_.push_back(std::move(e));
    goals_[static_cast<std::size_t>(g)].edges.push_back(id);
  }

  const ParsingGrammar& pg_;
  const std::vector<std::string>& toks_;
  std::vector<Goal> goals_;
  std::vector<Edge> edges_;
  std::map<GoalKey, int> index_;
  std::deque<int> queue_;
};

// Goals enclosing a pending expansion; a derivation never nests a goal in itself.
struct Ancestors {
  int goal;
  std::shared_ptr<const Ancestors> parent;
};

struct Pending {
  int goal;
  std::shared_ptr<const Ancestors> above;
};

struct Partial {
  double g = 0;
  double f = 0;
  std::size_t seq = 0;
  std::vector<int> choices;  // edge ids in preorder
  std::vector<Pending> stack;
};

struct PartialOrder {
  bool operator()(const std::shared_ptr<Partial>& a, const std::shared_ptr<Partial>& b) const {
    if (a->f != b->f) return a->f > b->f;
    return a->seq > b->seq;
  }
};

bool nested(const std::shared_ptr<const Ancestors>& chain, int goal) {
  for (const Ancestors* a = chain.get(); a; a = a->parent.get()) {
    if (a->goal == goal) return true;
  }
  return false;
}

Tree build_tree(const Chart& chart, const ParsingGrammar& pg, const std::vector<int>& choices, std::size_t& at) {
  const auto& e = chart.edge(choices[at++]);
  const auto& prod = pg.productions()[static_cast<std::size_t>(e.prod)];
  Tree t = Tree::app(prod.fun);
  std::size_t leaf = 0;
  for (int c : e.child) {
    if (c < 0) t.children.push_back(Tree::literal(e.leaf[leaf++]));
    else t.children.push_back(build_tree(chart, pg, choices, at));
  }
  return t;
}

}  // namespace

ParseResult parse(const ParsingGrammar& pg, const std::vector<std::string>& tokens, std::string_view start,
                  const ParseOptions& options) {
  ParseResult result;
  const std::size_t k = std::max<std::size_t>(options.k, 1);
  const auto& layout = pg.layout(start);
  if (layout.start_component < 0) {
    throw Error(ErrorKind::NoStartField, std::string(start), "lincat has no Str field 's'");
  }
  const int n = static_cast<int>(tokens.size());

  Chart chart(pg, tokens);
  std::vector<int> roots;
  for (int nt : pg.nonterminals_of(start)) {
    roots.push_back(chart.goal(GoalKey{nt, {{layout.start_component, Span{0, n}}}}));
  }
  chart.explore();
  chart.solve();
  result.stats.goals = chart.goal_count();
  result.stats.edges = chart.edge_count();

  std::priority_queue<std::shared_ptr<Partial>, std::vector<std::shared_ptr<Partial>>, PartialOrder> agenda;
  std::size_t seq = 0;
  for (int r : roots) {
    double h = chart.at(r).best;
    if (!std::isfinite(h)) continue;
    auto p = std::make_shared<Partial>();
    p->f = h;
    p->seq = seq++;
    p->stack.push_back(Pending{r, nullptr});
    agenda.push(std::move(p));
  }

  std::vector<ParsedTree> found;
  std::vector<double> costs;  // sorted costs of complete derivations
  while (!agenda.empty() && result.stats.pops < options.max_pops) {
    if (costs.size() >= k && agenda.top()->f > costs[k - 1] + kTieEps) break;
    auto cur = agenda.top();
    agenda.pop();
    ++result.stats.pops;
    if (cur->stack.empty()) {
      std::size_t at = 0;
      Tree t = build_tree(chart, pg, cur->choices, at);
      costs.insert(std::upper_bound(costs.begin(), costs.end(), cur->g), cur->g);
      found.push_back(ParsedTree{std::move(t), cur->g});
      continue;
    }
    Pending top = cur->stack.back();
    const auto& goal = chart.at(top.goal);
    auto above = std::make_shared<const Ancestors>(Ancestors{top.goal, top.above});
    for (int eid : goal.edges) {
      const auto& e = chart.edge(eid);
      double h_children = 0;
      bool ok = true;
      for (int c : e.child) {
        if (c < 0) continue;
        double b = chart.at(c).best;
        if (!std::isfinite(b) || nested(above, c)) {
          ok = false;
          break;
        }
        h_children += b;
      }
      if (!ok) continue;
      auto next = std::make_shared<Partial>();
      next->g = cur->g + e.cost;
      next->f = cur->f - goal.best + e.cost + h_children;
      next->seq = seq++;
      next->choices = cur->choices;
      next->choices.push_back(eid);
      next->stack = cur->stack;
      next->stack.pop_back();
      for (auto it = e.child.rbegin(); it != e.child.rend(); ++it) {
        if (*it >= 0) next->stack.push_back(Pending{*it, above});
      }
      agenda.push(std::move(next));
    }
  }

  for (auto& t : found) t.cost = tree_cost(t.tree, pg.signature());
  std::sort(found.begin(), found.end(), [](const ParsedTree& a, const ParsedTree& b) {
    return rank_key(a.cost, a.tree) < rank_key(b.cost, b.tree);
  });
  std::vector<ParsedTree> unique;
  for (auto& t : found) {
    if (!unique.empty() && unique.back().tree == t.tree) continue;
    unique.push_back(std::move(t));
    if (unique.size() == k) break;
  }
  result.trees = std::move(unique);
  return result;
}

}  // namespace lcnl
