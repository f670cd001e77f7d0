#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgb/regpath.hpp"

namespace dgb {

// Atomic value. `instance` distinguishes instantiated values such as the
// LEXEME of a particular token: two atoms unify only if text and instance
// agree, so distinct words never collapse into one f-structure.
struct Atom {
  std::string text;
  int instance = -1;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

using AttrPath = std::vector<std::string>;
using PathSet = std::vector<AttrPath>;

struct UnifyFailure {
  AttrPath path;
  std::string reason;
};

// Rooted attribute-value graph. Every value is a node: complex (arcs),
// atomic, or unbound (neither yet). Nodes merged by unification are
// forwarded to a representative; the graph is kept acyclic.
class FStructure {
 public:
  using NodeId = int;

  FStructure();

  NodeId root() const { return find(root_); }
  void set_root(NodeId n) { root_ = n; }

  NodeId add_node();
  NodeId add_atom(Atom a);

  NodeId find(NodeId n) const;
  bool is_atom(NodeId n) const;
  bool is_unbound(NodeId n) const;
  const Atom* atom(NodeId n) const;
  const std::map<std::string, NodeId>& arcs(NodeId n) const;

  // Follows `path` from `from` without constructing anything.
  std::optional<NodeId> get(NodeId from, std::span<const std::string> path) const;
  // Follows `path`, creating missing arcs. Fails when passing through an atom.
  std::optional<NodeId> ensure(NodeId from, std::span<const std::string> path, UnifyFailure* why = nullptr);

  // Merges two nodes. On failure the structure is left in an unspecified
  // state; callers that need to backtrack work on a copy.
  std::optional<UnifyFailure> unify(NodeId a, NodeId b);

  // Reachable from the root (after forwarding).
  size_t node_count() const;
  size_t arc_count() const;

  // Canonical text: equal strings iff the structures rooted at `roots` are
  // isomorphic (atoms compared by value, complex nodes by sharing).
  std::string canonical(std::span<const NodeId> roots) const;
  std::string canonical() const;

  // Copies the structure reachable from other's root into this graph.
  NodeId absorb(const FStructure& other);

  // Parses a compact AVM such as "[OBJ <1>[CLASS N] VPART [OBJ <1>]]".
  static FStructure from_avm(std::string_view text);

 private:
  struct Node {
    std::optional<Atom> atom;
    std::map<std::string, NodeId> arcs;
    NodeId forward = -1;
  };

  std::optional<UnifyFailure> merge(NodeId a, NodeId b, AttrPath& path);
  bool acyclic() const;
  NodeId import(const FStructure& other, NodeId n, std::map<NodeId, NodeId>& seen);

  std::vector<Node> nodes_;
  NodeId root_ = 0;
};

struct UnifyResult {
  std::optional<FStructure> value;
  UnifyFailure failure;
  explicit operator bool() const { return value.has_value(); }
};

// Least upper bound of two independent structures (their roots are merged).
UnifyResult unify(const FStructure& a, const FStructure& b);

bool isomorphic(const FStructure& a, const FStructure& b);

// a subsumes b: every path, atom and reentrancy of a is present in b.
bool subsumes(const FStructure& a, const FStructure& b);

struct Constraint {
  enum class Kind { Defining, Existential, Negative, PathDisjunction };
  enum class Anchor { Up, Down };
  Kind kind = Kind::Defining;
  Anchor anchor = Anchor::Up;
  AttrPath path;
  std::optional<Atom> value;
  RegPath regular_path;
};

// Constructive: builds the path if missing and unifies the value in.
std::optional<UnifyFailure> apply_defining(FStructure& fs, FStructure::NodeId at, const Constraint& c);

// Existential / negative constraints; never mutates.
bool check_constraining(const FStructure& fs, FStructure::NodeId at, const Constraint& c);

// Every existing attribute path from `at` whose label sequence is in the
// language of `r`. Non-constructive; sorted.
PathSet resolve_uncertainty(const FStructure& fs, FStructure::NodeId at, const RegPath& r);

// Bracketed attribute-value matrix. Reserved attributes first,
// the rest alphabetically; shared complex values are tagged <n>.
std::string render_avm(const FStructure& fs);

nlohmann::json to_json(const FStructure& fs);

}  // namespace dgb
