#pragma once

#include <string>
#include <vector>

#include "dgb/backbone.hpp"

namespace dgb {

// C-structure node. Repetition auxiliaries, union nodes and metacategories
// never appear; spliced slot categories share a `group` id.
struct CNode {
  Category category;
  int begin = 0;  // token span [begin, end)
  int end = 0;
  std::vector<CNode> children;
  std::vector<Annotation> annotations;  // as the child of its parent's rule
  int group = -1;
  int token = -1;  // preterminals only

  bool is_preterminal() const { return category.kind == CategoryKind::Preterminal; }
  bool has(Annotation::Kind k) const;
  const Annotation* field_annotation() const;
  size_t size() const;  // node count
};

// [domI [domINITIAL [domN [D den] [N Mann]]] ...]
std::string render_bracketed(const CNode& n, const std::vector<std::string>& tokens);
// Indented tree with numbered nodes.
std::string render_tree(const CNode& n, const std::vector<std::string>& tokens);

}  // namespace dgb
