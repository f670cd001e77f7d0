#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "dgb/chart.hpp"

namespace dgb {

namespace {

using NodeId = FStructure::NodeId;

struct Pending {
  NodeId up;
  NodeId down;
};

struct Check {
  Constraint::Kind kind;
  NodeId at;
  AttrPath path;
};

struct State {
  FStructure fs;
  std::vector<NodeId> word_nodes;
  std::vector<Pending> pending;
  std::vector<Check> checks;
};

struct Word {
  int token;
  NodeId node;
  std::vector<const LexicalEntry*> entries;
};

class Solver {
 public:
  Solver(const Grammar& g, std::span<const std::string> tokens)
      : g_(g), tokens_(tokens), modifier_(modifier_path(g)) {}

  std::vector<Solution> run(const CNode& c) {
    State s;
    s.word_nodes.assign(tokens_.size(), -1);
    if (!annotate(c, s.fs.root(), s)) return {};
    for (auto& w : words_) s.word_nodes[w.token] = w.node;
    lexical(0, std::move(s));
    std::vector<Solution> out;
    for (auto& [key, sol] : results_) out.push_back(std::move(sol));
    return out;
  }

 private:
  bool define_atom(State& s, NodeId at, const AttrPath& path, Atom value) {
    auto n = s.fs.ensure(at, path);
    if (!n) return false;
    return !s.fs.unify(*n, s.fs.add_atom(std::move(value)));
  }

  // Phase one: variables for c-structure nodes. Heads and unannotated
  // children share the mother's f-structure; spliced siblings share one.
  bool annotate(const CNode& n, NodeId up, State& s) {
    if (n.is_preterminal()) {
      auto entries = g_.entries(tokens_[n.token]);
      std::erase_if(entries, [&](const LexicalEntry* e) { return e->word_class != n.category.name; });
      words_.push_back({n.token, up, entries});
      return define_atom(s, up, {"CLASS"}, {n.category.name});
    }
    std::map<int, NodeId> groups;
    for (const auto& child : n.children) {
      NodeId down = up;
      bool fresh_group = true;
      if (child.group >= 0) {
        if (auto it = groups.find(child.group); it != groups.end()) {
          down = it->second;
          fresh_group = false;
        }
      }
      if (fresh_group && child.has(Annotation::Kind::Modifier)) {
        down = s.fs.add_node();
        s.pending.push_back({up, down});
      }
      if (child.group >= 0) groups[child.group] = down;
      if (const Annotation* f = child.field_annotation())
        if (!define_atom(s, down, {"FIELD"}, {f->field})) return false;
      if (!annotate(child, down, s)) return false;
    }
    return true;
  }

  // Phase two: lexical entry and valency branch of each word.
  void lexical(size_t w, State s) {
    if (w == words_.size()) {
      if (!slots_match(s)) return;
      visited_.clear();
      attach(std::move(s));
      return;
    }
    const Word& word = words_[w];
    for (const LexicalEntry* e : word.entries) {
      State t = s;
      NodeId f = word.node;
      if (!define_atom(t, f, {"LEXEME"}, {e->lexeme, word.token})) continue;
      bool ok = true;
      for (const auto& eq : e->features) {
        auto lhs = t.fs.ensure(f, eq.lhs);
        if (!lhs) {
          ok = false;
          break;
        }
        NodeId rhs;
        if (const auto* atom = std::get_if<std::string>(&eq.rhs)) {
          rhs = t.fs.add_atom({*atom});
        } else {
          auto r = t.fs.ensure(f, std::get<std::vector<std::string>>(eq.rhs));
          if (!r) {
            ok = false;
            break;
          }
          rhs = *r;
        }
        if (t.fs.unify(*lhs, rhs)) {
          ok = false;
          break;
        }
      }
      if (ok) valency(w, expand_valency(*e), 0, std::move(t));
    }
  }

  void valency(size_t w, const std::vector<ValencySchema>& schemata, size_t slot, State s) {
    if (slot == schemata.size()) {
      lexical(w + 1, std::move(s));
      return;
    }
    NodeId f = words_[w].node;
    for (const auto& branch : schemata[slot].branches) {
      State t = s;
      bool ok = true;
      for (const auto& c : branch) {
        if (c.kind == SchemaConstraint::Kind::Defining)
          ok = ok && define_atom(t, f, c.path, {c.value});
        else
          t.checks.push_back({c.kind == SchemaConstraint::Kind::Existential ? Constraint::Kind::Existential
                                                                            : Constraint::Kind::Negative,
                              f, c.path});
      }
      if (ok) valency(w, schemata, slot + 1, std::move(t));
    }
  }

  // Every modifier ends up in exactly one valency slot of its class, and
  // every opened slot needs one, so the counts per class must agree.
  bool slots_match(const State& s) const {
    std::map<std::string, int> balance;
    auto class_of = [&](NodeId n, const AttrPath& p) -> std::string {
      auto c = s.fs.get(n, p);
      return c && s.fs.is_atom(*c) ? s.fs.atom(*c)->text : std::string();
    };
    for (const auto& c : s.checks)
      if (c.kind == Constraint::Kind::Existential) ++balance[class_of(c.at, {c.path.front(), "CLASS"})];
    for (const auto& p : s.pending) --balance[class_of(p.down, {"CLASS"})];
    return std::all_of(balance.begin(), balance.end(), [](const auto& b) { return b.second == 0; });
  }

  std::string key(const State& s) const {
    std::vector<NodeId> roots{s.fs.root()};
    for (const auto& p : s.pending) {
      roots.push_back(p.up);
      roots.push_back(p.down);
    }
    return s.fs.canonical(roots);
  }

  // Phase three: resolve each MODIFIER path against the structure built so
  // far. Paths are never created, so a modifier waits until the attribute
  // it fills exists.
  void attach(State s) {
    if (s.pending.empty()) {
      finish(std::move(s));
      return;
    }
    for (size_t k = 0; k < s.pending.size(); ++k) {
      auto [up, down] = s.pending[k];
      for (const auto& path : resolve_uncertainty(s.fs, up, modifier_)) {
        State t = s;
        auto target = t.fs.get(up, path);
        if (!target || t.fs.unify(*target, down)) continue;
        t.pending.erase(t.pending.begin() + static_cast<long>(k));
        if (!visited_.insert(key(t)).second) continue;
        attach(std::move(t));
      }
    }
  }

  void finish(State s) {
    for (const auto& c : s.checks) {
      Constraint con{c.kind, Constraint::Anchor::Up, c.path, std::nullopt, {}};
      if (!check_constraining(s.fs, c.at, con)) return;
    }
    // Every dependency attribute must be filled by a word.
    std::set<NodeId> seen;
    std::vector<NodeId> todo{s.fs.root()};
    while (!todo.empty()) {
      NodeId n = s.fs.find(todo.back());
      todo.pop_back();
      if (!seen.insert(n).second || s.fs.is_atom(n)) continue;
      for (const auto& [attr, v] : s.fs.arcs(n)) {
        if (g_.has_dep(attr) && !s.fs.get(v, std::vector<std::string>{"LEXEME"})) return;
        todo.push_back(v);
      }
    }
    std::string canon = s.fs.canonical();
    if (results_.count(canon)) return;
    Solution sol{std::move(s.fs), {}};
    for (NodeId n : s.word_nodes) sol.word_nodes.push_back(n < 0 ? n : sol.f.find(n));
    results_.emplace(std::move(canon), std::move(sol));
  }

  const Grammar& g_;
  std::span<const std::string> tokens_;
  RegPath modifier_;
  std::vector<Word> words_;
  std::set<std::string> visited_;
  std::map<std::string, Solution> results_;
};

}  // namespace

std::vector<Solution> solve(const CNode& c, std::span<const std::string> tokens, const Grammar& g) {
  return Solver(g, tokens).run(c);
}

}  // namespace dgb
