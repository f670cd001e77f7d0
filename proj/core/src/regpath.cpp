#include "dgb/regpath.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace dgb {

struct RegPath::Nfa {
  struct State {
    std::vector<int> eps;
    std::vector<std::pair<std::string, int>> edges;
  };
  std::vector<State> states;
  int initial = 0;
  int final = 0;

  int add() {
    states.emplace_back();
    return static_cast<int>(states.size()) - 1;
  }

  // Thompson construction; returns (entry, exit).
  std::pair<int, int> build(const RegPath& r) {
    switch (r.op()) {
      case Op::Epsilon: {
        int s = add();
        return {s, s};
      }
      case Op::Atom: {
        int a = add(), b = add();
        states[a].edges.emplace_back(r.name(), b);
        return {a, b};
      }
      case Op::Concat: {
        int entry = add();
        int cur = entry;
        for (const auto& p : r.parts()) {
          auto [s, e] = build(p);
          states[cur].eps.push_back(s);
          cur = e;
        }
        return {entry, cur};
      }
      case Op::Alt: {
        int a = add(), b = add();
        for (const auto& p : r.parts()) {
          auto [s, e] = build(p);
          states[a].eps.push_back(s);
          states[e].eps.push_back(b);
        }
        return {a, b};
      }
      case Op::Opt: {
        int a = add(), b = add();
        auto [s, e] = build(r.parts().front());
        states[a].eps.push_back(s);
        states[a].eps.push_back(b);
        states[e].eps.push_back(b);
        return {a, b};
      }
      case Op::Star: {
        int a = add(), b = add();
        auto [s, e] = build(r.parts().front());
        states[a].eps.push_back(s);
        states[a].eps.push_back(b);
        states[e].eps.push_back(s);
        states[e].eps.push_back(b);
        return {a, b};
      }
    }
    throw std::logic_error("unreachable");
  }

  StateSet closure(std::vector<int> seed) const {
    std::set<int> seen(seed.begin(), seed.end());
    while (!seed.empty()) {
      int s = seed.back();
      seed.pop_back();
      for (int t : states[s].eps)
        if (seen.insert(t).second) seed.push_back(t);
    }
    return {seen.begin(), seen.end()};
  }
};

RegPath::RegPath() : RegPath(std::make_shared<Node>()) {}

RegPath::RegPath(std::shared_ptr<const Node> node) : node_(std::move(node)) {
  auto nfa = std::make_shared<Nfa>();
  auto [s, e] = nfa->build(*this);
  nfa->initial = s;
  nfa->final = e;
  nfa_ = std::move(nfa);
}

RegPath RegPath::epsilon() { return RegPath(); }

RegPath RegPath::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->name = std::move(name);
  return RegPath(std::move(n));
}

RegPath RegPath::concat(std::vector<RegPath> parts) {
  std::erase_if(parts, [](const RegPath& p) { return p.is_epsilon(); });
  if (parts.empty()) return epsilon();
  if (parts.size() == 1) return parts.front();
  auto n = std::make_shared<Node>();
  n->op = Op::Concat;
  n->parts = std::move(parts);
  return RegPath(std::move(n));
}

RegPath RegPath::alt(std::vector<RegPath> parts) {
  if (parts.empty()) throw std::invalid_argument("empty disjunction");
  if (parts.size() == 1) return parts.front();
  auto n = std::make_shared<Node>();
  n->op = Op::Alt;
  n->parts = std::move(parts);
  return RegPath(std::move(n));
}

RegPath RegPath::opt(RegPath inner) {
  auto n = std::make_shared<Node>();
  n->op = Op::Opt;
  n->parts.push_back(std::move(inner));
  return RegPath(std::move(n));
}

RegPath RegPath::star(RegPath inner) {
  auto n = std::make_shared<Node>();
  n->op = Op::Star;
  n->parts.push_back(std::move(inner));
  return RegPath(std::move(n));
}

namespace {

class PathParser {
 public:
  explicit PathParser(std::string_view text) : text_(text) {}

  RegPath parse() {
    RegPath r = sequence();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("path expression column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  RegPath sequence() {
    std::vector<RegPath> parts;
    for (;;) {
      skip();
      if (pos_ >= text_.size()) break;
      char c = text_[pos_];
      if (c == '|' || c == '}' || c == ')') break;
      parts.push_back(factor());
    }
    return RegPath::concat(std::move(parts));
  }

  RegPath factor() {
    RegPath p = primary();
    for (;;) {
      skip();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        p = RegPath::star(std::move(p));
      } else {
        return p;
      }
    }
  }

  RegPath primary() {
    char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      std::vector<RegPath> alts{sequence()};
      for (;;) {
        skip();
        if (pos_ >= text_.size()) fail("unterminated '{'");
        if (text_[pos_] == '|') {
          ++pos_;
          alts.push_back(sequence());
        } else if (text_[pos_] == '}') {
          ++pos_;
          break;
        } else {
          fail("expected '|' or '}'");
        }
      }
      return RegPath::alt(std::move(alts));
    }
    if (c == '(') {
      ++pos_;
      RegPath inner = sequence();
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return RegPath::opt(std::move(inner));
    }
    if (!name_char(c)) fail("expected attribute name");
    size_t begin = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    return RegPath::atom(std::string(text_.substr(begin, pos_ - begin)));
  }

  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

RegPath RegPath::parse(std::string_view text) { return PathParser(text).parse(); }

std::vector<std::string> RegPath::symbols() const {
  std::set<std::string> out;
  std::vector<const RegPath*> todo{this};
  while (!todo.empty()) {
    const RegPath* r = todo.back();
    todo.pop_back();
    if (r->op() == Op::Atom) out.insert(r->name());
    for (const auto& p : r->parts()) todo.push_back(&p);
  }
  return {out.begin(), out.end()};
}

std::string RegPath::str() const {
  switch (op()) {
    case Op::Epsilon:
      return "";
    case Op::Atom:
      return name();
    case Op::Concat: {
      std::string s;
      for (const auto& p : parts()) {
        if (!s.empty()) s += ' ';
        s += p.op() == Op::Concat ? "{" + p.str() + "}" : p.str();
      }
      return s;
    }
    case Op::Alt: {
      std::string s = "{";
      for (size_t i = 0; i < parts().size(); ++i) {
        if (i) s += '|';
        s += parts()[i].str();
      }
      return s + "}";
    }
    case Op::Opt:
      return "(" + parts().front().str() + ")";
    case Op::Star: {
      const RegPath& in = parts().front();
      bool wrap = in.op() == Op::Concat || in.op() == Op::Epsilon;
      return (wrap ? "{" + in.str() + "}" : in.str()) + "*";
    }
  }
  return {};
}

const RegPath::Nfa& RegPath::nfa() const { return *nfa_; }

RegPath::StateSet RegPath::start() const { return nfa().closure({nfa().initial}); }

RegPath::StateSet RegPath::step(const StateSet& states, std::string_view label) const {
  std::vector<int> next;
  for (int s : states)
    for (const auto& [l, t] : nfa().states[s].edges)
      if (l == label) next.push_back(t);
  if (next.empty()) return {};
  return nfa().closure(std::move(next));
}

bool RegPath::accepting(const StateSet& states) const {
  return std::binary_search(states.begin(), states.end(), nfa().final);
}

bool RegPath::matches(std::span<const std::string> path) const {
  StateSet s = start();
  for (const auto& label : path) {
    s = step(s, label);
    if (s.empty()) return false;
  }
  return accepting(s);
}

}  // namespace dgb
