#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dgb/backbone.hpp"
#include "dgb/cnode.hpp"
#include "dgb/fstruct.hpp"
#include "dgb/grammar.hpp"
#include "dgb/order.hpp"

namespace dgb {

class UnknownWordError : public std::runtime_error {
 public:
  UnknownWordError(std::string token, int position);
  const std::string& token() const { return token_; }
  int position() const { return position_; }  // 1-based

 private:
  std::string token_;
  int position_;
};

std::vector<std::string> tokenize(std::string_view sentence);

// Star/optional/union-free form of a backbone, recognized by a memoized
// span chart with a packed forest.
class ChartParser {
 public:
  ChartParser(const BackboneRuleSet& rs, const Grammar& g);
  ~ChartParser();
  ChartParser(ChartParser&&) noexcept;
  ChartParser& operator=(ChartParser&&) noexcept;

  // All complete c-structures, at most `max_trees`. `truncated` is set when
  // more exist.
  std::vector<CNode> parse(std::span<const std::string> tokens, size_t max_trees = 1000,
                           bool* truncated = nullptr) const;
  bool recognizes(std::span<const std::string> tokens) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Throws UnknownWordError. Expands metacategories if still present.
std::vector<CNode> parse_backbone(std::span<const std::string> tokens, const BackboneRuleSet& rs, const Grammar& g,
                                  size_t max_trees = 1000);

struct Solution {
  FStructure f;
  std::vector<FStructure::NodeId> word_nodes;  // per token
};

// Functional solutions of one c-structure, deduplicated up to isomorphism
// and ordered by canonical form.
std::vector<Solution> solve(const CNode& c, std::span<const std::string> tokens, const Grammar& g);

struct Analysis {
  std::vector<std::string> tokens;
  CNode c_tree;
  Solution f;
  DomainTree domains;
  DepTree deps;
  std::vector<Violation> violations;

  bool accepted() const { return violations.empty(); }
};

struct EngineOptions {
  size_t max_unpack = 1000;
  bool specialize = true;
};

class Engine {
 public:
  explicit Engine(Grammar g, EngineOptions opts = {});

  const Grammar& grammar() const { return grammar_; }
  const BackboneRuleSet& backbone() const { return backbone_; }

  // Throws UnknownWordError.
  std::vector<std::string> tokens(std::string_view sentence) const;
  std::vector<CNode> parse_backbone(std::span<const std::string> tokens, bool* truncated = nullptr) const;
  // Every solved analysis with its order violations.
  std::vector<Analysis> candidates(std::span<const std::string> tokens) const;
  // Violation-free analyses in deterministic order.
  std::vector<Analysis> analyses(std::span<const std::string> tokens) const;
  std::vector<Analysis> analyses(std::string_view sentence) const;
  bool accepts(std::span<const std::string> tokens) const;

 private:
  Grammar grammar_;
  EngineOptions opts_;
  BackboneRuleSet backbone_;
  ChartParser parser_;
};

std::vector<Analysis> analyses(std::string_view sentence, const Grammar& g);

}  // namespace dgb
