#include "dgb/chart.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dgb {

UnknownWordError::UnknownWordError(std::string token, int position)
    : std::runtime_error("unknown word '" + token + "' at position " + std::to_string(position)),
      token_(std::move(token)),
      position_(position) {}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::istringstream in{std::string(sentence)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool CNode::has(Annotation::Kind k) const {
  return std::any_of(annotations.begin(), annotations.end(), [k](const Annotation& a) { return a.kind == k; });
}

const Annotation* CNode::field_annotation() const {
  for (const auto& a : annotations)
    if (a.kind == Annotation::Kind::Field) return &a;
  return nullptr;
}

size_t CNode::size() const {
  size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::string render_bracketed(const CNode& n, const std::vector<std::string>& tokens) {
  std::string s = "[" + n.category.name;
  if (n.is_preterminal()) return s + " " + tokens.at(n.token) + "]";
  for (const auto& c : n.children) s += " " + render_bracketed(c, tokens);
  return s + "]";
}

std::string render_tree(const CNode& root, const std::vector<std::string>& tokens) {
  std::ostringstream out;
  int counter = 0;
  std::function<void(const CNode&, int)> walk = [&](const CNode& n, int depth) {
    out << std::string(2 * depth, ' ') << n.category.name << ':' << ++counter;
    if (n.is_preterminal()) out << ' ' << tokens.at(n.token);
    out << '\n';
    for (const auto& c : n.children) walk(c, depth + 1);
  };
  walk(root, 0);
  return out.str();
}

// ---------------------------------------------------------------------------

struct ChartParser::Impl {
  enum class Kind { Term, Visible, Union, Opt, Star };
  struct Sym {
    Kind kind;
    Category cat;
  };
  struct Child {
    int sym;
    std::vector<Annotation> ann;
    int group = -1;  // children of one production sharing a key form a spliced group
  };
  struct Prod {
    int lhs;
    std::vector<Child> rhs;
  };

  std::vector<Sym> syms;
  std::vector<Prod> prods;
  std::vector<std::vector<int>> prods_of;
  std::map<std::string, int> sym_index;
  std::map<std::string, std::set<std::string>> classes_of;  // surface -> classes
  int start = -1;
  std::vector<int> min_len;  // shortest yield per symbol

  int intern(const std::string& key, Kind kind, Category cat) {
    auto [it, fresh] = sym_index.emplace(key, static_cast<int>(syms.size()));
    if (fresh) {
      syms.push_back({kind, std::move(cat)});
      prods_of.emplace_back();
    }
    return it->second;
  }
  int category_sym(const Category& c) {
    if (c.kind == CategoryKind::Meta) throw BackboneError("metacategory '" + c.name + "' left in backbone");
    return intern((c.kind == CategoryKind::Preterminal ? "t:" : "c:") + c.name,
                  c.kind == CategoryKind::Preterminal ? Kind::Term : Kind::Visible, c);
  }
  void add(int lhs, std::vector<Child> rhs) {
    prods_of[lhs].push_back(static_cast<int>(prods.size()));
    prods.push_back({lhs, std::move(rhs)});
  }
  int union_sym(const std::vector<UnionAlt>& alts) {
    std::string key = "u:";
    for (const auto& a : alts) {
      key += '{';
      for (const auto& c : a.seq) key += c.name + ' ';
    }
    bool fresh = !sym_index.count(key);
    int u = intern(key, Kind::Union, kDomainUnion);
    if (fresh)
      for (const auto& a : alts) {
        std::vector<Child> rhs;
        for (const auto& c : a.seq) rhs.push_back({category_sym(c), {}, a.seq.size() > 1 ? 0 : -1});
        add(u, std::move(rhs));
      }
    return u;
  }
  int item_sym(const RhsItem& item) {
    int inner = item.category.kind == CategoryKind::Union ? union_sym(item.alternatives) : category_sym(item.category);
    if (item.repetition == Repetition::One) return inner;
    bool star = item.repetition == Repetition::Star;
    std::string key = (star ? "s:" : "o:") + std::to_string(inner);
    bool fresh = !sym_index.count(key);
    int aux = intern(key, star ? Kind::Star : Kind::Opt, item.category);
    if (fresh) {
      add(aux, {});
      if (star)
        add(aux, {{inner, {}, -1}, {aux, {}, -1}});
      else
        add(aux, {{inner, {}, -1}});
    }
    return aux;
  }

  Impl(const BackboneRuleSet& rs, const Grammar& g) {
    for (const auto& e : g.lexicon) classes_of[e.surface].insert(e.word_class);
    start = intern("c:" + rs.start.name, Kind::Visible, rs.start);
    for (const auto& rule : rs.rules) {
      int lhs = category_sym(rule.lhs);
      std::vector<Child> rhs;
      for (const auto& item : rule.rhs) rhs.push_back({item_sym(item), item.annotations, item.group});
      add(lhs, std::move(rhs));
    }
    compute_min_len();
  }

  void compute_min_len() {
    const int inf = 1 << 20;
    min_len.assign(syms.size(), inf);
    for (size_t i = 0; i < syms.size(); ++i)
      if (syms[i].kind == Kind::Term) min_len[i] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& p : prods) {
        int sum = 0;
        for (const auto& c : p.rhs) sum = std::min(inf, sum + min_len[c.sym]);
        if (sum < min_len[p.lhs]) {
          min_len[p.lhs] = sum;
          changed = true;
        }
      }
    }
  }

  struct Deriv {
    int prod;
    std::vector<int> bounds;  // child k spans [bounds[k], bounds[k+1])
  };
  struct PNode {
    int sym;
    int begin, end;
    int prod = -1;
    std::vector<std::shared_ptr<const PNode>> kids;
  };
  using Trees = std::vector<std::shared_ptr<const PNode>>;

  struct Run {
    const Impl& g;
    std::span<const std::string> tokens;
    int n;
    enum class State : char { Fresh, Busy, Done };
    std::vector<State> state;
    std::vector<std::vector<Deriv>> cells;
    std::map<size_t, Trees> unpacked;
    bool truncated = false;

    Run(const Impl& g, std::span<const std::string> t)
        : g(g), tokens(t), n(static_cast<int>(t.size())) {
      size_t size = g.syms.size() * (n + 1) * (n + 1);
      state.assign(size, State::Fresh);
      cells.resize(size);
    }
    size_t key(int sym, int i, int j) const { return (static_cast<size_t>(sym) * (n + 1) + i) * (n + 1) + j; }

    bool term_matches(int sym, int i) const {
      auto it = g.classes_of.find(tokens[i]);
      return it != g.classes_of.end() && it->second.count(g.syms[sym].cat.name);
    }

    const std::vector<Deriv>& derive(int sym, int i, int j) {
      static const std::vector<Deriv> none;
      size_t k = key(sym, i, j);
      if (state[k] == State::Done) return cells[k];
      if (state[k] == State::Busy) return none;
      state[k] = State::Busy;
      std::vector<Deriv> out;
      if (g.syms[sym].kind == Kind::Term) {
        if (j == i + 1 && term_matches(sym, i)) out.push_back({-1, {i, j}});
      } else {
        for (int p : g.prods_of[sym]) {
          const auto& rhs = g.prods[p].rhs;
          std::vector<int> rest(rhs.size() + 1, 0);
          for (size_t r = rhs.size(); r-- > 0;) rest[r] = rest[r + 1] + g.min_len[rhs[r].sym];
          if (rest[0] > j - i) continue;
          std::vector<int> bounds{i};
          std::function<void(size_t)> fill = [&](size_t pos) {
            int from = bounds.back();
            if (pos == rhs.size()) {
              if (from == j) out.push_back({p, bounds});
              return;
            }
            for (int to = from + g.min_len[rhs[pos].sym]; to <= j - rest[pos + 1]; ++to) {
              if (g.syms[rhs[pos].sym].kind == Kind::Term && to != from + 1) continue;
              if (derive(rhs[pos].sym, from, to).empty()) continue;
              bounds.push_back(to);
              fill(pos + 1);
              bounds.pop_back();
            }
          };
          fill(0);
        }
      }
      cells[k] = std::move(out);
      state[k] = State::Done;
      return cells[k];
    }

    const Trees& unpack(int sym, int i, int j, size_t cap) {
      size_t k = key(sym, i, j);
      if (auto it = unpacked.find(k); it != unpacked.end()) return it->second;
      Trees out;
      for (const auto& d : derive(sym, i, j)) {
        if (d.prod < 0) {
          if (out.size() >= cap) {
            truncated = true;
            continue;
          }
          out.push_back(std::make_shared<PNode>(PNode{sym, i, j, -1, {}}));
          continue;
        }
        const auto& rhs = g.prods[d.prod].rhs;
        std::vector<const Trees*> options;
        bool dead = false;
        for (size_t c = 0; c < rhs.size(); ++c) {
          options.push_back(&unpack(rhs[c].sym, d.bounds[c], d.bounds[c + 1], cap));
          if (options.back()->empty()) dead = true;
        }
        if (dead) continue;
        std::vector<size_t> idx(rhs.size(), 0);
        while (true) {
          if (out.size() >= cap) {
            truncated = true;
            break;
          }
          auto node = std::make_shared<PNode>(PNode{sym, i, j, d.prod, {}});
          for (size_t c = 0; c < rhs.size(); ++c) node->kids.push_back((*options[c])[idx[c]]);
          out.push_back(std::move(node));
          bool done = true;
          for (size_t c = rhs.size(); c-- > 0;) {
            if (++idx[c] < options[c]->size()) {
              done = false;
              break;
            }
            idx[c] = 0;
          }
          if (done) break;
        }
      }
      return unpacked[k] = std::move(out);
    }
  };

  // Emits the visible nodes for `p` into `out`, with the annotations and
  // group it occupies in its visible parent.
  void emit(const PNode& p, const std::vector<Annotation>& ann, int group, int& next_group,
            std::vector<CNode>& out) const {
    const Sym& s = syms[p.sym];
    if (s.kind == Kind::Term) {
      out.push_back({s.cat, p.begin, p.end, {}, ann, group, p.begin});
      return;
    }
    if (s.kind == Kind::Visible) {
      CNode node{s.cat, p.begin, p.end, {}, ann, group, -1};
      emit_children(p, nullptr, -1, next_group, node.children);
      out.push_back(std::move(node));
      return;
    }
    emit_children(p, &ann, group, next_group, out);
  }

  // Children of a visible node take their own rule annotations; children of
  // transparent nodes inherit what the transparent node carried.
  void emit_children(const PNode& p, const std::vector<Annotation>* inherited, int inherited_group, int& next_group,
                     std::vector<CNode>& out) const {
    const auto& rhs = prods[p.prod].rhs;
    std::map<int, int> groups;
    for (size_t c = 0; c < rhs.size(); ++c) {
      int group = inherited_group;
      if (rhs[c].group >= 0) {
        auto [it, fresh] = groups.emplace(rhs[c].group, next_group);
        if (fresh) ++next_group;
        group = it->second;
      }
      emit(*p.kids[c], inherited ? *inherited : rhs[c].ann, group, next_group, out);
    }
  }

  CNode to_cnode(const PNode& top) const {
    int next_group = 0;
    std::vector<CNode> out;
    emit(top, {}, -1, next_group, out);
    CNode root = std::move(out.front());
    if (root.category.kind == CategoryKind::Root && root.children.size() == 1) {
      CNode only = std::move(root.children.front());
      only.annotations.clear();
      only.group = -1;
      return only;
    }
    return root;
  }
};

ChartParser::ChartParser(const BackboneRuleSet& rs, const Grammar& g) : impl_(std::make_unique<Impl>(rs, g)) {}
ChartParser::~ChartParser() = default;
ChartParser::ChartParser(ChartParser&&) noexcept = default;
ChartParser& ChartParser::operator=(ChartParser&&) noexcept = default;

std::vector<CNode> ChartParser::parse(std::span<const std::string> tokens, size_t max_trees, bool* truncated) const {
  if (truncated) *truncated = false;
  if (tokens.empty()) return {};
  Impl::Run run(*impl_, tokens);
  int n = static_cast<int>(tokens.size());
  const auto& trees = run.unpack(impl_->start, 0, n, max_trees);
  std::vector<CNode> out;
  for (const auto& t : trees) out.push_back(impl_->to_cnode(*t));
  if (truncated) *truncated = run.truncated;
  return out;
}

bool ChartParser::recognizes(std::span<const std::string> tokens) const {
  if (tokens.empty()) return false;
  Impl::Run run(*impl_, tokens);
  return !run.derive(impl_->start, 0, static_cast<int>(tokens.size())).empty();
}

std::vector<CNode> parse_backbone(std::span<const std::string> tokens, const BackboneRuleSet& rs, const Grammar& g,
                                  size_t max_trees) {
  for (size_t i = 0; i < tokens.size(); ++i)
    if (g.entries(tokens[i]).empty()) throw UnknownWordError(tokens[i], static_cast<int>(i) + 1);
  bool has_meta = !rs.metacategories.empty();
  ChartParser parser(has_meta ? expand_metacategories(rs) : rs, g);
  return parser.parse(tokens, max_trees);
}

}  // namespace dgb
