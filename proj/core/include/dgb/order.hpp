#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgb/cnode.hpp"
#include "dgb/fstruct.hpp"
#include "dgb/grammar.hpp"

namespace dgb {

struct DomainElement {
  bool is_word = true;
  int index = -1;  // token index or domain index
  friend bool operator==(const DomainElement&, const DomainElement&) = default;
};

struct Domain {
  std::string category;  // domN, domMIDDLE, ...
  std::string word_class;
  int slot = 0;          // index into the class's DomainSpec::slots
  std::optional<std::string> field;
  int owner = -1;   // word whose domain specification introduced this domain
  int member = -1;  // word that is a direct member, if the slot holds self
  int parent = -1;  // enclosing domain
  std::vector<DomainElement> elements;  // surface order
  int begin = 0;
  int end = 0;
};

struct DomainTree {
  std::vector<Domain> domains;

  // Domain in which `word` is a direct member, or -1.
  int member_domain(int word) const;
  // Words representing each element: the member itself, or for a child
  // domain its member (recursing through memberless domains).
  std::vector<int> element_words(int domain) const;
  std::vector<int> top_domains() const;
  std::vector<int> words_in_order() const;

  // Shape-only comparison (categories, members, fields, nesting, order).
  friend bool operator==(const DomainTree& a, const DomainTree& b) { return a.shape() == b.shape(); }
  std::string shape() const;
  std::string render(const std::vector<std::string>& tokens) const;
  nlohmann::json to_json(const std::vector<std::string>& tokens) const;
};

struct DepWord {
  std::string surface;
  std::string word_class;
  std::string lexeme;
  int head = -1;
  std::string label;  // incoming dependency, empty for the root
};

struct DepTree {
  std::vector<DepWord> words;
  int root = -1;

  std::vector<int> children(int w) const;
  // Dependency labels from `ancestor` down to `w`, nullopt if not an ancestor.
  std::optional<std::vector<std::string>> path(int ancestor, int w) const;
  bool is_tree() const;

  // (head surface, label, dependent surface), sorted; edges touching
  // punctuation classes are left out unless `with_punct`.
  std::vector<std::tuple<std::string, std::string, std::string>> triples(const Grammar& g,
                                                                       bool with_punct = false) const;
  // "id surface class head label" lines; root has head 0 and label ROOT.
  std::string render() const;
  static DepTree parse(std::string_view text);
  nlohmann::json to_json() const;
};

enum class ViolationCode { PredSelfFirst, PredSelfLast, PredDepOrder, FloatPath, FieldMismatch };

std::string_view code_name(ViolationCode c);

struct Violation {
  ViolationCode code;
  int word = -1;
  std::string message;
  friend bool operator==(const Violation& a, const Violation& b) { return a.code == b.code && a.word == b.word; }
};

DomainTree extract_domain_structure(const CNode& c, const Grammar& g);

// Throws std::logic_error on a dependency attribute without a LEXEME.
DepTree derive_dependency_tree(const FStructure& f, const Grammar& g, std::span<const std::string> tokens);

std::vector<Violation> check_precedence(const DomainTree& dt, const DepTree& dep, const Grammar& g);
std::vector<Violation> check_float_licensing(const DomainTree& dt, const DepTree& dep, const Grammar& g);
std::vector<Violation> check_order(const DomainTree& dt, const DepTree& dep, const Grammar& g);

}  // namespace dgb
