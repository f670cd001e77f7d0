#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dgb/regpath.hpp"

namespace dgb {

// Attribute names that share the f-structure namespace with dependencies.
inline constexpr std::string_view kClassAttr = "CLASS";
inline constexpr std::string_view kLexemeAttr = "LEXEME";
inline constexpr std::string_view kFieldAttr = "FIELD";

bool is_reserved_attribute(std::string_view name);

struct SourceLoc {
  int line = 0;
  int column = 0;
};

class GrammarError : public std::runtime_error {
 public:
  GrammarError(const std::string& message, SourceLoc loc);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

enum class Optionality { Opt, Req };

struct ValencySlot {
  Optionality optionality = Optionality::Req;
  std::string dep;
  std::string mod_class;
  friend bool operator==(const ValencySlot&, const ValencySlot&) = default;
};

// Spelled `*`, `?`, `+`, `!` in grammar files.
enum class Cardinality { ZeroOrMore, AtMostOne, AtLeastOne, ExactlyOne };

char cardinality_symbol(Cardinality c);
std::optional<Cardinality> cardinality_from_symbol(char c);
// Whether `count` elements satisfy `c`; an absent cardinality admits only zero.
bool cardinality_admits(std::optional<Cardinality> c, int count);

// One order domain in a word's domain sequence.
//
// A slot that holds the defining word splits its remaining elements into those
// before and those after the word; `before`/`after` restrict each side
// (nullopt = nothing on that side). Other slots use `cardinality`.
struct DomainSlotSpec {
  std::string name;
  Cardinality cardinality = Cardinality::ZeroOrMore;
  bool holds_self = false;
  std::optional<Cardinality> before;
  std::optional<Cardinality> after;
  std::optional<std::string> field;
  // Dependencies admitted into this slot; empty admits all.
  std::vector<std::string> accepts;
  SourceLoc loc;

  bool admits(int before_count, int after_count) const;
  friend bool operator==(const DomainSlotSpec& a, const DomainSlotSpec& b) {
    return a.name == b.name && a.cardinality == b.cardinality && a.holds_self == b.holds_self &&
           a.before == b.before && a.after == b.after && a.field == b.field && a.accepts == b.accepts;
  }
};

struct DomainSpec {
  std::string word_class;
  std::vector<DomainSlotSpec> slots;
  SourceLoc loc;

  int self_slot() const;
  friend bool operator==(const DomainSpec& a, const DomainSpec& b) {
    return a.word_class == b.word_class && a.slots == b.slots;
  }
};

enum class PredicateKind { SelfFirst, SelfLast, DepBeforeDep };

struct PrecedencePredicate {
  std::string holder;
  PredicateKind kind = PredicateKind::SelfFirst;
  std::optional<std::string> left;
  std::optional<std::string> right;
  SourceLoc loc;

  std::string str() const;
  friend bool operator==(const PrecedencePredicate& a, const PrecedencePredicate& b) {
    return a.holder == b.holder && a.kind == b.kind && a.left == b.left && a.right == b.right;
  }
};

struct ModifierPathSpec {
  std::string dep;
  RegPath float_path;
  std::optional<std::string> target_field;
  SourceLoc loc;

  friend bool operator==(const ModifierPathSpec& a, const ModifierPathSpec& b) {
    return a.dep == b.dep && a.float_path == b.float_path && a.target_field == b.target_field;
  }
};

// A lexical feature equation relative to the word's own f-structure, e.g.
//   SUBJ CASE = nom        (path = atom)
//   CASE = SPEC CASE       (path = path)
// Every path is a (possibly empty) chain of dependencies followed by one
// atom-valued attribute.
struct FeatureEquation {
  std::vector<std::string> lhs;
  std::variant<std::string, std::vector<std::string>> rhs;

  std::string str() const;
  friend bool operator==(const FeatureEquation&, const FeatureEquation&) = default;
};

struct LexicalEntry {
  std::string surface;
  std::string word_class;
  std::string lexeme;
  std::vector<ValencySlot> valency;
  std::vector<FeatureEquation> features;
  SourceLoc loc;

  const ValencySlot* slot(std::string_view dep) const;
  friend bool operator==(const LexicalEntry& a, const LexicalEntry& b) {
    return a.surface == b.surface && a.word_class == b.word_class && a.lexeme == b.lexeme &&
           a.valency == b.valency && a.features == b.features;
  }
};

struct Grammar {
  std::vector<std::string> classes;
  std::vector<std::string> deps;
  std::vector<DomainSpec> domains;
  std::vector<PrecedencePredicate> predicates;
  std::vector<ModifierPathSpec> paths;
  std::vector<LexicalEntry> lexicon;
  std::vector<std::string> root_classes;  // sentence-level classes, in start-rule order
  std::vector<std::string> punct_classes;

  bool has_class(std::string_view c) const;
  bool has_dep(std::string_view d) const;
  bool is_punct(std::string_view c) const;
  const DomainSpec* domain(std::string_view word_class) const;
  const ModifierPathSpec* path_spec(std::string_view dep) const;
  std::vector<const PrecedencePredicate*> predicates_for(std::string_view word_class) const;
  std::vector<const LexicalEntry*> entries(std::string_view surface) const;
  const LexicalEntry* entry(std::string_view surface, std::string_view word_class) const;

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

// ---------------------------------------------------------------------------
// Loading and validation

struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity = Severity::Error;
  std::string message;
  SourceLoc loc;

  std::string str() const;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  bool empty() const { return diagnostics.empty(); }
  bool has_errors() const;
};

// Parses grammar-file text. Template invocations are expanded, duplicate
// predicates are dropped (reported through `warnings` when given).
// Throws GrammarError on syntax errors and invariant violations.
Grammar load_grammar(std::string_view text, std::vector<Diagnostic>* warnings = nullptr);
Grammar load_grammar_file(const std::string& path, std::vector<Diagnostic>* warnings = nullptr);

ValidationReport validate_grammar(const Grammar& g);

// Canonical grammar-file text; load_grammar(serialize_grammar(g)) == g.
std::string serialize_grammar(const Grammar& g);

// ---------------------------------------------------------------------------
// Valency expansion

// A constraint schema relative to the word's f-structure (the `up` anchor).
struct SchemaConstraint {
  enum class Kind { Defining, Existential, Negative };
  Kind kind = Kind::Defining;
  std::vector<std::string> path;
  std::string value;  // Defining only

  std::string str() const;
  friend bool operator==(const SchemaConstraint&, const SchemaConstraint&) = default;
};

// One valency slot expands to a disjunction of conjunctive branches.
struct ValencySchema {
  std::string dep;
  std::vector<std::vector<SchemaConstraint>> branches;
};

std::vector<ValencySchema> expand_valency(const LexicalEntry& entry);

}  // namespace dgb
