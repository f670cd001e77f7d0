#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgb {

// Regular expression over attribute (dependency) names.
//
// Concrete syntax:
//   VPART* OBJ            concatenation and Kleene star
//   {SUBJ|OBJ|VPART}* RELA
//   (VCOMP) OBJ           optional factor
//   <empty string>        the language {epsilon}
class RegPath {
 public:
  enum class Op { Epsilon, Atom, Concat, Alt, Opt, Star };

  RegPath();  // epsilon

  static RegPath epsilon();
  static RegPath atom(std::string name);
  static RegPath concat(std::vector<RegPath> parts);
  static RegPath alt(std::vector<RegPath> parts);
  static RegPath opt(RegPath inner);
  static RegPath star(RegPath inner);

  // Throws std::invalid_argument with the offending column on bad syntax.
  static RegPath parse(std::string_view text);

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  const std::vector<RegPath>& parts() const { return node_->parts; }

  bool is_epsilon() const { return node_->op == Op::Epsilon; }

  // Every attribute name occurring in the expression.
  std::vector<std::string> symbols() const;

  std::string str() const;

  // NFA simulation. A state set is a sorted vector of state indices.
  using StateSet = std::vector<int>;
  StateSet start() const;
  StateSet step(const StateSet& states, std::string_view label) const;
  bool accepting(const StateSet& states) const;

  bool matches(std::span<const std::string> path) const;

  friend bool operator==(const RegPath& a, const RegPath& b) { return a.str() == b.str(); }

 private:
  struct Node {
    Op op = Op::Epsilon;
    std::string name;
    std::vector<RegPath> parts;
  };
  struct Nfa;

  explicit RegPath(std::shared_ptr<const Node> node);
  const Nfa& nfa() const;

  std::shared_ptr<const Node> node_;
  mutable std::shared_ptr<const Nfa> nfa_;
};

}  // namespace dgb
