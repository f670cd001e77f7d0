#include "dgb/fstruct.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

#include "dgb/grammar.hpp"

namespace dgb {

FStructure::FStructure() { nodes_.emplace_back(); }

FStructure::NodeId FStructure::add_node() {
  nodes_.emplace_back();
  return static_cast<NodeId>(nodes_.size()) - 1;
}

FStructure::NodeId FStructure::add_atom(Atom a) {
  NodeId n = add_node();
  nodes_[n].atom = std::move(a);
  return n;
}

FStructure::NodeId FStructure::find(NodeId n) const {
  while (nodes_[n].forward >= 0) n = nodes_[n].forward;
  return n;
}

bool FStructure::is_atom(NodeId n) const { return nodes_[find(n)].atom.has_value(); }

bool FStructure::is_unbound(NodeId n) const {
  const Node& node = nodes_[find(n)];
  return !node.atom && node.arcs.empty();
}

const Atom* FStructure::atom(NodeId n) const {
  const Node& node = nodes_[find(n)];
  return node.atom ? &*node.atom : nullptr;
}

const std::map<std::string, FStructure::NodeId>& FStructure::arcs(NodeId n) const { return nodes_[find(n)].arcs; }

std::optional<FStructure::NodeId> FStructure::get(NodeId from, std::span<const std::string> path) const {
  NodeId cur = find(from);
  for (const auto& attr : path) {
    const auto& a = nodes_[cur].arcs;
    auto it = a.find(attr);
    if (it == a.end()) return std::nullopt;
    cur = find(it->second);
  }
  return cur;
}

std::optional<FStructure::NodeId> FStructure::ensure(NodeId from, std::span<const std::string> path,
                                                     UnifyFailure* why) {
  NodeId cur = find(from);
  AttrPath walked;
  for (const auto& attr : path) {
    walked.push_back(attr);
    if (nodes_[cur].atom) {
      if (why) *why = {walked, "path passes through an atomic value"};
      return std::nullopt;
    }
    auto it = nodes_[cur].arcs.find(attr);
    if (it == nodes_[cur].arcs.end()) {
      NodeId fresh = add_node();
      nodes_[cur].arcs.emplace(attr, fresh);
      cur = fresh;
    } else {
      cur = find(it->second);
    }
  }
  return cur;
}

std::optional<UnifyFailure> FStructure::merge(NodeId a, NodeId b, AttrPath& path) {
  a = find(a);
  b = find(b);
  if (a == b) return std::nullopt;
  Node& na = nodes_[a];
  Node& nb = nodes_[b];
  if (na.atom && nb.atom) {
    if (*na.atom != *nb.atom) return UnifyFailure{path, "atom clash: " + na.atom->text + " vs " + nb.atom->text};
    nb.forward = a;
    return std::nullopt;
  }
  if (na.atom || nb.atom) {
    const Node& complex = na.atom ? nb : na;
    if (!complex.arcs.empty()) return UnifyFailure{path, "atomic vs complex value"};
    // unbound joins the atom
    if (na.atom)
      nb.forward = a;
    else
      na.forward = b;
    return std::nullopt;
  }
  auto moved = std::move(nb.arcs);
  nb.arcs.clear();
  nb.forward = a;
  for (auto& [attr, value] : moved) {
    auto it = nodes_[a].arcs.find(attr);
    if (it == nodes_[a].arcs.end()) {
      nodes_[a].arcs.emplace(attr, value);
      continue;
    }
    path.push_back(attr);
    if (auto fail = merge(it->second, value, path)) return fail;
    path.pop_back();
  }
  return std::nullopt;
}

bool FStructure::acyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<char> state(nodes_.size(), 0);
  std::function<bool(NodeId)> visit = [&](NodeId n) {
    n = find(n);
    if (state[n] == 1) return false;
    if (state[n] == 2) return true;
    state[n] = 1;
    for (const auto& [attr, v] : nodes_[n].arcs)
      if (!visit(v)) return false;
    state[n] = 2;
    return true;
  };
  for (NodeId n = 0; n < static_cast<NodeId>(nodes_.size()); ++n)
    if (nodes_[n].forward < 0 && !visit(n)) return false;
  return true;
}

std::optional<UnifyFailure> FStructure::unify(NodeId a, NodeId b) {
  AttrPath path;
  if (auto fail = merge(a, b, path)) return fail;
  if (!acyclic()) return UnifyFailure{{}, "cyclic structure"};
  return std::nullopt;
}

namespace {

template <typename F>
void walk_reachable(const FStructure& fs, FStructure::NodeId from, F&& f) {
  std::set<FStructure::NodeId> seen;
  std::vector<FStructure::NodeId> todo{fs.find(from)};
  while (!todo.empty()) {
    auto n = todo.back();
    todo.pop_back();
    if (!seen.insert(n).second) continue;
    f(n);
    for (const auto& [attr, v] : fs.arcs(n)) todo.push_back(fs.find(v));
  }
}

}  // namespace

size_t FStructure::node_count() const {
  size_t count = 0;
  walk_reachable(*this, root_, [&](NodeId) { ++count; });
  return count;
}

size_t FStructure::arc_count() const {
  size_t count = 0;
  walk_reachable(*this, root_, [&](NodeId n) { count += arcs(n).size(); });
  return count;
}

std::string FStructure::canonical(std::span<const NodeId> roots) const {
  std::map<NodeId, int> numbers;
  std::string out;
  std::function<void(NodeId)> emit = [&](NodeId n) {
    n = find(n);
    if (const Atom* a = atom(n)) {
      out += a->text;
      if (a->instance >= 0) out += "#" + std::to_string(a->instance);
      return;
    }
    if (auto it = numbers.find(n); it != numbers.end()) {
      out += "<" + std::to_string(it->second) + ">";
      return;
    }
    int k = static_cast<int>(numbers.size());
    numbers[n] = k;
    out += "<" + std::to_string(k) + ">[";
    bool first = true;
    for (const auto& [attr, v] : arcs(n)) {
      if (!first) out += ' ';
      first = false;
      out += attr + ':';
      emit(v);
    }
    out += ']';
  };
  for (NodeId r : roots) {
    emit(r);
    out += ';';
  }
  return out;
}

std::string FStructure::canonical() const {
  NodeId r = root();
  return canonical(std::span<const NodeId>(&r, 1));
}

FStructure::NodeId FStructure::import(const FStructure& other, NodeId n, std::map<NodeId, NodeId>& seen) {
  n = other.find(n);
  if (auto it = seen.find(n); it != seen.end()) return it->second;
  NodeId mine = other.is_atom(n) ? add_atom(*other.atom(n)) : add_node();
  seen[n] = mine;
  for (const auto& [attr, v] : other.arcs(n)) {
    NodeId child = import(other, v, seen);
    nodes_[mine].arcs.emplace(attr, child);
  }
  return mine;
}

FStructure::NodeId FStructure::absorb(const FStructure& other) {
  std::map<NodeId, NodeId> seen;
  return import(other, other.root(), seen);
}

namespace {

class AvmReader {
 public:
  AvmReader(std::string_view text, FStructure& fs) : text_(text), fs_(fs) {}

  FStructure::NodeId read() {
    auto n = value();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("AVM column " + std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == ','))
      ++pos_;
  }
  std::string word() {
    size_t b = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           std::string_view("[]<>,").find(text_[pos_]) == std::string_view::npos)
      ++pos_;
    if (b == pos_) fail("expected a name");
    return std::string(text_.substr(b, pos_ - b));
  }

  FStructure::NodeId value() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    std::optional<int> tag;
    if (text_[pos_] == '<') {
      ++pos_;
      tag = std::stoi(word());
      if (pos_ >= text_.size() || text_[pos_] != '>') fail("expected '>'");
      ++pos_;
      skip();
      if (pos_ >= text_.size() || text_[pos_] != '[') {
        auto it = tags_.find(*tag);
        if (it == tags_.end()) fail("undefined tag");
        return it->second;
      }
    }
    if (text_[pos_] == '[') {
      ++pos_;
      auto n = fs_.add_node();
      if (tag) tags_[*tag] = n;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) fail("unterminated '['");
        if (text_[pos_] == ']') {
          ++pos_;
          return n;
        }
        std::string attr = word();
        auto v = value();
        auto slot = fs_.ensure(n, std::vector<std::string>{attr});
        if (fs_.unify(*slot, v)) fail("inconsistent AVM at " + attr);
      }
    }
    return fs_.add_atom({word(), -1});
  }

  std::string_view text_;
  FStructure& fs_;
  size_t pos_ = 0;
  std::map<int, FStructure::NodeId> tags_;
};

}  // namespace

FStructure FStructure::from_avm(std::string_view text) {
  FStructure fs;
  fs.set_root(AvmReader(text, fs).read());
  return fs;
}

UnifyResult unify(const FStructure& a, const FStructure& b) {
  FStructure out = a;
  auto other = out.absorb(b);
  if (auto fail = out.unify(out.root(), other)) return {std::nullopt, *fail};
  return {std::move(out), {}};
}

bool isomorphic(const FStructure& a, const FStructure& b) { return a.canonical() == b.canonical(); }

bool subsumes(const FStructure& a, const FStructure& b) {
  std::map<FStructure::NodeId, FStructure::NodeId> image;
  std::function<bool(FStructure::NodeId, FStructure::NodeId)> visit = [&](FStructure::NodeId x,
                                                                          FStructure::NodeId y) {
    x = a.find(x);
    y = b.find(y);
    if (const Atom* ax = a.atom(x)) {
      const Atom* by = b.atom(y);
      return by && *ax == *by;
    }
    if (auto it = image.find(x); it != image.end()) return it->second == y;
    image[x] = y;
    if (a.arcs(x).empty()) return true;
    if (b.atom(y)) return false;
    for (const auto& [attr, v] : a.arcs(x)) {
      auto it = b.arcs(y).find(attr);
      if (it == b.arcs(y).end() || !visit(v, it->second)) return false;
    }
    return true;
  };
  return visit(a.root(), b.root());
}

std::optional<UnifyFailure> apply_defining(FStructure& fs, FStructure::NodeId at, const Constraint& c) {
  if (c.kind != Constraint::Kind::Defining) throw std::invalid_argument("apply_defining needs a defining constraint");
  UnifyFailure why;
  auto target = fs.ensure(at, c.path, &why);
  if (!target) return why;
  if (!c.value) return std::nullopt;
  auto value = fs.add_atom(*c.value);
  if (auto fail = fs.unify(*target, value)) {
    fail->path.insert(fail->path.begin(), c.path.begin(), c.path.end());
    return fail;
  }
  return std::nullopt;
}

bool check_constraining(const FStructure& fs, FStructure::NodeId at, const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::Existential: return fs.get(at, c.path).has_value();
    case Constraint::Kind::Negative: return !fs.get(at, c.path).has_value();
    default: throw std::invalid_argument("check_constraining needs an existential or negative constraint");
  }
}

PathSet resolve_uncertainty(const FStructure& fs, FStructure::NodeId at, const RegPath& r) {
  std::set<AttrPath> found;
  AttrPath path;
  std::function<void(FStructure::NodeId, const RegPath::StateSet&)> walk = [&](FStructure::NodeId n,
                                                                               const RegPath::StateSet& states) {
    if (r.accepting(states)) found.insert(path);
    for (const auto& [attr, v] : fs.arcs(n)) {
      auto next = r.step(states, attr);
      if (next.empty()) continue;
      path.push_back(attr);
      walk(fs.find(v), next);
      path.pop_back();
    }
  };
  walk(fs.find(at), r.start());
  return {found.begin(), found.end()};
}

namespace {

int attr_rank(const std::string& a) {
  if (a == kClassAttr) return 0;
  if (a == kLexemeAttr) return 1;
  if (a == kFieldAttr) return 2;
  return 3;
}

std::vector<std::pair<std::string, FStructure::NodeId>> ordered_arcs(const FStructure& fs, FStructure::NodeId n) {
  std::vector<std::pair<std::string, FStructure::NodeId>> v(fs.arcs(n).begin(), fs.arcs(n).end());
  std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
    return std::pair(attr_rank(x.first), x.first) < std::pair(attr_rank(y.first), y.first);
  });
  return v;
}

}  // namespace

std::string render_avm(const FStructure& fs) {
  std::map<FStructure::NodeId, int> indegree;
  walk_reachable(fs, fs.root(), [&](FStructure::NodeId n) {
    for (const auto& [attr, v] : fs.arcs(n)) ++indegree[fs.find(v)];
  });
  std::map<FStructure::NodeId, int> tags;
  std::function<std::vector<std::string>(FStructure::NodeId)> lines = [&](FStructure::NodeId n) {
    n = fs.find(n);
    if (const Atom* a = fs.atom(n)) return std::vector<std::string>{a->text};
    std::string prefix;
    if (indegree[n] > 1) {
      if (auto it = tags.find(n); it != tags.end()) return std::vector<std::string>{"<" + std::to_string(it->second) + ">"};
      int k = static_cast<int>(tags.size()) + 1;
      tags[n] = k;
      prefix = "<" + std::to_string(k) + ">";
    }
    auto arcs = ordered_arcs(fs, n);
    if (arcs.empty()) return std::vector<std::string>{prefix + "[ ]"};
    size_t width = 0;
    for (const auto& [attr, v] : arcs) width = std::max(width, attr.size());
    std::vector<std::string> out;
    for (const auto& [attr, v] : arcs) {
      auto sub = lines(v);
      std::string head = attr + std::string(width - attr.size() + 1, ' ');
      out.push_back(head + sub.front());
      for (size_t i = 1; i < sub.size(); ++i) out.push_back(std::string(width + 1, ' ') + sub[i]);
    }
    std::string pad(prefix.size() + 1, ' ');
    out.front() = prefix + "[" + out.front();
    for (size_t i = 1; i < out.size(); ++i) out[i] = pad + out[i];
    out.back() += "]";
    return out;
  };
  std::string text;
  for (const auto& l : lines(fs.root())) text += l + "\n";
  return text;
}

nlohmann::json to_json(const FStructure& fs) {
  std::map<FStructure::NodeId, int> ids;
  nlohmann::json nodes = nlohmann::json::array();
  std::function<nlohmann::json(FStructure::NodeId)> value = [&](FStructure::NodeId n) -> nlohmann::json {
    n = fs.find(n);
    if (const Atom* a = fs.atom(n)) {
      if (a->instance < 0) return a->text;
      return {{"atom", a->text}, {"word", a->instance}};
    }
    if (auto it = ids.find(n); it != ids.end()) return {{"ref", it->second}};
    int k = static_cast<int>(ids.size());
    ids[n] = k;
    nodes.push_back(nullptr);
    nlohmann::json arcs = nlohmann::json::object();
    for (const auto& [attr, v] : ordered_arcs(fs, n)) arcs[attr] = value(v);
    nodes[k] = {{"id", k}, {"arcs", arcs}};
    return {{"ref", k}};
  };
  value(fs.root());
  return {{"root", 0}, {"nodes", nodes}};
}

}  // namespace dgb
