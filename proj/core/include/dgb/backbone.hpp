#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgb/grammar.hpp"
#include "dgb/regpath.hpp"

namespace dgb {

enum class CategoryKind {
  Domain,       // domC of a single-slot class
  Slot,         // domSLOT of a multi-slot class
  Preterminal,  // word class
  Meta,         // domC of a multi-slot class; never a tree node
  Union,        // DOMAIN
  Root,
};

struct Category {
  std::string name;
  CategoryKind kind = CategoryKind::Domain;
  friend bool operator==(const Category&, const Category&) = default;
};

inline const Category kDomainUnion{"DOMAIN", CategoryKind::Union};
inline const Category kRoot{"ROOT", CategoryKind::Root};

std::string domain_category_name(const std::string& word_class);

struct Annotation {
  enum class Kind { Head, Modifier, Field };
  Kind kind = Kind::Head;
  std::string field;  // Field only
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class Repetition { One, Optional, Star };

// One alternative of a DOMAIN occurrence: the domain of `word_class`, as a
// category sequence (a single category until metacategories are expanded).
struct UnionAlt {
  std::string word_class;
  std::vector<Category> seq;
  friend bool operator==(const UnionAlt&, const UnionAlt&) = default;
};

struct RhsItem {
  Category category;
  Repetition repetition = Repetition::One;
  std::vector<Annotation> annotations;
  std::vector<UnionAlt> alternatives;  // Union items only
  int group = -1;                      // items spliced from one metacategory occurrence
  friend bool operator==(const RhsItem&, const RhsItem&) = default;
};

struct BackboneRule {
  Category lhs;
  std::vector<RhsItem> rhs;
};

struct MetaDefinition {
  Category name;
  std::vector<Category> expansion;
};

struct SlotRef {
  std::string word_class;
  int slot = 0;
};

struct BackboneRuleSet {
  std::vector<BackboneRule> rules;
  std::vector<MetaDefinition> metacategories;
  Category start = kRoot;
  std::vector<UnionAlt> domain_union;
  // Body of the MODIFIER template: union over deps of floatPath followed by dep.
  RegPath modifier_path;
  std::map<std::string, SlotRef> slots;  // domain/slot category -> defining slot

  std::vector<const BackboneRule*> rules_for(const std::string& lhs) const;
};

class BackboneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BackboneRuleSet compile_domains(const Grammar& g);

// Splices metacategory expansions into referencing rules and union
// alternatives. Throws BackboneError on cyclic definitions.
BackboneRuleSet expand_metacategories(const BackboneRuleSet& rs);

// Narrows each DOMAIN occurrence to the domains of classes that can be
// placed there, then drops rules that became unproductive.
BackboneRuleSet specialize_domain_union(const BackboneRuleSet& rs, const Grammar& g);

// Classes whose words may be placed in `slot` of a domain owned by
// `owner_class`, by valency and float paths.
std::vector<std::string> placeable_classes(const Grammar& g, const std::string& owner_class,
                                           const DomainSlotSpec& slot);

RegPath modifier_path(const Grammar& g);

// Rule listing in the notation `domN --> DOMAIN* N DOMAIN*.` followed by
// the annotated rules.
std::string dump_backbone(const BackboneRuleSet& rs);

}  // namespace dgb
